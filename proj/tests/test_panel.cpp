#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "panel_fixture.hpp"
#include "scopemeter/indices.hpp"
#include "scopemeter/panel.hpp"
#include "test_support.hpp"

using scopemeter::errc;
using scopemeter::IndexTuple;
using support::err_code;

namespace {

scopemeter::AuthorProfile make_profile(const std::string& id, int h, int nj) {
    fixture::SyntheticPanel tmp;
    fixture::append_author_records(tmp, id, h, nj);
    return scopemeter::build_profile(std::move(tmp.records), id);
}

IndexTuple tuple_for(int h, int nj) {
    auto p = scopemeter::to_polar(h, nj);
    return IndexTuple{h, nj, p.big_h, p.big_m};
}

}  // namespace

TEST_CASE("pearson reproduces the worked examples") {
    CHECK(scopemeter::pearson({1, 2, 3}, {1, 2, 3}) == Catch::Approx(1.0).margin(1e-12));
    CHECK(scopemeter::pearson({1, 2, 3}, {-1, -2, -3}) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(scopemeter::pearson({1, 2, 3, 4}, {2, 1, 4, 3}) == Catch::Approx(0.6).margin(1e-12));
}

TEST_CASE("pearson rejects malformed input") {
    CHECK(err_code([] { scopemeter::pearson({1, 2, 3}, {1, 2}); }) == errc::length_mismatch);
    CHECK(err_code([] { scopemeter::pearson({1}, {2}); }) == errc::too_few_points);
    CHECK(err_code([] { scopemeter::pearson({}, {}); }) == errc::too_few_points);
    CHECK(err_code([] { scopemeter::pearson({4, 4, 4}, {1, 2, 3}); }) == errc::zero_variance);
    CHECK(err_code([] { scopemeter::pearson({1, 2, 3}, {7, 7, 7}); }) == errc::zero_variance);
}

TEST_CASE("pearson is symmetric in its arguments") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> val(-50.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> xs(12), ys(12);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            xs[k] = val(rng);
            ys[k] = val(rng);
        }
        REQUIRE(std::abs(scopemeter::pearson(xs, ys) - scopemeter::pearson(ys, xs)) <= 1e-12);
    }
}

TEST_CASE("pearson is affine invariant") {
    std::mt19937 rng(777123);
    std::uniform_real_distribution<double> val(-20.0, 20.0);
    std::uniform_real_distribution<double> scale(0.05, 30.0);
    std::uniform_real_distribution<double> shift(-100.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> xs(10), ys(10);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            xs[k] = val(rng);
            ys[k] = val(rng);
        }
        double r = scopemeter::pearson(xs, ys);
        double a = scale(rng), b = shift(rng);
        std::vector<double> pos(xs), neg(xs);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            pos[k] = a * xs[k] + b;
            neg[k] = -a * xs[k] + b;
        }
        REQUIRE(std::abs(scopemeter::pearson(pos, ys) - r) <= 1e-9);
        REQUIRE(std::abs(scopemeter::pearson(neg, ys) + r) <= 1e-9);
    }
}

TEST_CASE("pearson result is clamped to the unit interval") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> xs(5), ys(5);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            xs[k] = val(rng);
            ys[k] = xs[k] * 3.0 + val(rng) * 1e-9;  // near-perfect correlation
        }
        double r = scopemeter::pearson(xs, ys);
        REQUIRE(r >= -1.0);
        REQUIRE(r <= 1.0);
    }
}

TEST_CASE("group_summary evaluates the sample statistics") {
    IndexTuple a{4, 4, 4.0, 0.4};
    IndexTuple b{6, 6, 6.0, 0.6};
    auto stats = scopemeter::group_summary({{a, "lab"}, {b, "lab"}});
    REQUIRE(stats.size() == 1);
    const auto& s = stats.at("lab");
    CHECK(s.count == 2);
    CHECK(s.mean_m == Catch::Approx(0.5).margin(1e-12));
    CHECK(s.std_m == Catch::Approx(0.141421).margin(1e-6));
    CHECK(s.mean_h == Catch::Approx(5.0).margin(1e-12));
    CHECK(s.std_h == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
}

TEST_CASE("group_summary gives singleton groups zero spread") {
    IndexTuple only{3, 3, 3.0, 0.7};
    auto stats = scopemeter::group_summary({{only, "solo"}});
    CHECK(stats.at("solo").count == 1);
    CHECK(stats.at("solo").mean_m == Catch::Approx(0.7).margin(1e-12));
    CHECK(stats.at("solo").std_m == 0.0);
    CHECK(stats.at("solo").std_h == 0.0);
}

TEST_CASE("group_summary partitions the panel") {
    std::vector<std::pair<IndexTuple, std::string>> panel;
    std::mt19937 rng(48213);
    std::uniform_int_distribution<int> h(1, 30), nj(1, 30), which(0, 2);
    const char* names[] = {"alpha", "beta", "gamma"};
    for (int i = 0; i < 57; ++i) panel.emplace_back(tuple_for(h(rng), nj(rng)), names[which(rng)]);

    auto stats = scopemeter::group_summary(panel);
    int total = 0;
    double weighted_m = 0.0;
    for (const auto& [name, s] : stats) {
        REQUIRE(s.count >= 1);
        REQUIRE(std::isfinite(s.std_m));
        REQUIRE(s.std_m >= 0.0);
        REQUIRE(std::isfinite(s.std_h));
        REQUIRE(s.std_h >= 0.0);
        total += s.count;
        weighted_m += s.count * s.mean_m;
    }
    REQUIRE(total == static_cast<int>(panel.size()));

    double direct_mean = 0.0;
    for (const auto& [t, name] : panel) direct_mean += t.big_m;
    direct_mean /= static_cast<double>(panel.size());
    REQUIRE(std::abs(weighted_m / static_cast<double>(panel.size()) - direct_mean) <= 1e-12);
}

TEST_CASE("group_summary rejects an empty panel") {
    CHECK(err_code([] { scopemeter::group_summary({}); }) == errc::empty_panel);
}

TEST_CASE("build_panel_report requires at least two authors") {
    std::vector<scopemeter::AuthorProfile> one;
    one.push_back(make_profile("a1", 3, 2));
    CHECK(err_code([&] { scopemeter::build_panel_report(one, {}, {}); }) ==
          errc::too_few_authors);
    CHECK(err_code([] { scopemeter::build_panel_report({}, {}, {}); }) == errc::too_few_authors);
}

TEST_CASE("build_panel_report reports degenerate correlations as absent") {
    std::vector<scopemeter::AuthorProfile> twins;
    twins.push_back(make_profile("a1", 4, 3));
    twins.push_back(make_profile("a2", 4, 3));
    auto report = scopemeter::build_panel_report(twins, {}, {});
    CHECK_FALSE(report.pearson_h_nj.value.has_value());
    CHECK_FALSE(report.pearson_big_h_m.value.has_value());
    CHECK(report.pearson_h_nj.reason == "undefined (zero variance)");
    CHECK(report.pearson_big_h_m.reason == "undefined (zero variance)");
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].author_id == "a1");  // tie broken by ascending id
    CHECK(report.rows[1].author_id == "a2");
}

TEST_CASE("build_panel_report sorts rows by descending big_h then h then id") {
    std::vector<scopemeter::AuthorProfile> profiles;
    profiles.push_back(make_profile("low", 2, 2));
    profiles.push_back(make_profile("top", 9, 9));
    profiles.push_back(make_profile("mid-b", 5, 3));   // same big_h as mid-a
    profiles.push_back(make_profile("mid-a", 3, 5));   // lower h than mid-b
    auto report = scopemeter::build_panel_report(profiles, {}, {});
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].author_id == "top");
    CHECK(report.rows[1].author_id == "mid-b");  // equal big_h, larger h wins
    CHECK(report.rows[2].author_id == "mid-a");
    CHECK(report.rows[3].author_id == "low");
    CHECK(report.rows[0].n_papers == 9);
}

TEST_CASE("build_panel_report labels unmapped authors as ungrouped") {
    std::vector<scopemeter::AuthorProfile> profiles;
    profiles.push_back(make_profile("a1", 3, 2));
    profiles.push_back(make_profile("a2", 2, 4));
    std::map<std::string, std::string> groups{{"a1", "lab-x"}};
    auto report = scopemeter::build_panel_report(profiles, groups, {});
    std::map<std::string, std::string> seen;
    for (const auto& row : report.rows) seen[row.author_id] = row.group;
    CHECK(seen.at("a1") == "lab-x");
    CHECK(seen.at("a2") == "ungrouped");
    CHECK(report.groups.count("ungrouped") == 1);
    CHECK(report.groups.at("ungrouped").count == 1);
}

TEST_CASE("build_panel_report annotates index errors with the author id") {
    std::vector<scopemeter::PaperRecord> bad(1);
    bad[0].author_id = "broken";
    bad[0].journal_name = "J";  // citations left unknown
    std::vector<scopemeter::AuthorProfile> profiles;
    profiles.push_back(scopemeter::build_profile(std::move(bad), "broken"));
    profiles.push_back(make_profile("fine", 2, 2));
    try {
        scopemeter::build_panel_report(profiles, {}, {});
        FAIL("expected UnknownCitations");
    } catch (const scopemeter::Error& e) {
        CHECK(e.code() == errc::unknown_citations);
        CHECK(std::string(e.what()).find("broken") != std::string::npos);
    }
}

TEST_CASE("the synthetic panel decorrelates in polar form") {
    auto panel = fixture::make_synthetic_panel();
    auto profiles = scopemeter::build_profiles(panel.records);
    REQUIRE(profiles.size() == 90);
    auto report = scopemeter::build_panel_report(profiles, panel.groups, {});
    REQUIRE(report.rows.size() == 90);
    REQUIRE(report.pearson_h_nj.value.has_value());
    REQUIRE(report.pearson_big_h_m.value.has_value());
    double raw = *report.pearson_h_nj.value;
    double polar = *report.pearson_big_h_m.value;
    CHECK(raw >= 0.5);
    CHECK(std::abs(polar) <= 0.35);
    CHECK(std::abs(polar) < std::abs(raw));
    CHECK(report.groups.size() == 3);
    int count_sum = 0;
    for (const auto& [name, s] : report.groups) count_sum += s.count;
    CHECK(count_sum == 90);

    // The generator's (h, nj) targets are realized exactly by the records.
    std::map<std::string, std::pair<int, int>> expected;
    for (std::size_t i = 0; i < panel.author_ids.size(); ++i)
        expected[panel.author_ids[i]] = panel.expected_h_nj[i];
    for (const auto& row : report.rows) {
        REQUIRE(row.indices.h == expected.at(row.author_id).first);
        REQUIRE(row.indices.n_j == expected.at(row.author_id).second);
    }
}

TEST_CASE("rank_authors orders by the requested key") {
    scopemeter::PanelReport report;
    auto add = [&report](const std::string& id, int h, int nj) {
        report.rows.push_back({id, "g", std::max(h, nj), tuple_for(h, nj)});
    };
    add("c7", 7, 7);
    add("c3", 3, 3);
    add("c5", 5, 5);

    auto by_big_h = scopemeter::rank_authors(report, scopemeter::RankKey::by_big_h);
    REQUIRE(by_big_h.size() == 3);
    CHECK(by_big_h == std::vector<std::string>{"c7", "c5", "c3"});

    auto by_h = scopemeter::rank_authors(report, scopemeter::RankKey::by_h);
    CHECK(by_h[0] == "c7");
    CHECK(by_h[2] == "c3");
}

TEST_CASE("rank_authors prefers balanced profiles under the m-distance key") {
    scopemeter::PanelReport report;
    report.rows.push_back({"balanced", "g", 6, tuple_for(6, 6)});  // M = 1/2 exactly
    report.rows.push_back({"skewed", "g", 9, tuple_for(1, 9)});    // M far from 1/2
    // Fabricated dyadic M values so |M - 1/2| ties *exactly*; equal big_h too,
    // leaving ascending author_id as the only discriminator.
    report.rows.push_back({"wide", "g", 9, IndexTuple{2, 9, 6.5, 0.75}});
    report.rows.push_back({"deep", "g", 9, IndexTuple{9, 2, 6.5, 0.25}});

    auto ranked = scopemeter::rank_authors(report, scopemeter::RankKey::by_m_distance_half);
    CHECK(ranked == std::vector<std::string>{"balanced", "deep", "wide", "skewed"});
}

TEST_CASE("rank_authors falls back to ascending id on a full tie") {
    scopemeter::PanelReport report;
    for (const char* id : {"zeta", "alpha", "mid"})
        report.rows.push_back({id, "g", 4, tuple_for(4, 4)});
    for (auto key : {scopemeter::RankKey::by_big_h, scopemeter::RankKey::by_h,
                     scopemeter::RankKey::by_m_distance_half}) {
        auto ranked = scopemeter::rank_authors(report, key);
        CHECK(ranked == std::vector<std::string>{"alpha", "mid", "zeta"});
    }
}

TEST_CASE("rank_authors is deterministic") {
    auto panel = fixture::make_synthetic_panel();
    auto report =
        scopemeter::build_panel_report(scopemeter::build_profiles(panel.records), panel.groups, {});
    auto first = scopemeter::rank_authors(report, scopemeter::RankKey::by_m_distance_half);
    REQUIRE(first.size() == 90);
    for (int i = 0; i < 3; ++i) {
        auto again = scopemeter::rank_authors(report, scopemeter::RankKey::by_m_distance_half);
        REQUIRE(again == first);
    }
}
