#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scopemeter/core.hpp"
#include "scopemeter/error.hpp"
#include "scopemeter/indices.hpp"

namespace scopemeter {

// Sample Pearson correlation coefficient (two-pass covariance over the
// product of sample deviations). Constant input is an error, not 0: a
// fabricated 0 would read as a finding.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        raise(errc::length_mismatch, std::to_string(xs.size()) + " xs vs " +
                                         std::to_string(ys.size()) + " ys");
    if (xs.size() < 2)
        raise(errc::too_few_points, "need at least 2 points, got " + std::to_string(xs.size()));

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(xs.size());
    mean_y /= static_cast<double>(ys.size());

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mean_x;
        double dy = ys[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        raise(errc::zero_variance, sxx == 0.0 ? "xs is constant" : "ys is constant");
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

struct GroupStat {
    std::size_t count = 0;
    double mean_m = 0.0;
    double std_m = 0.0;
    double mean_h = 0.0;
    double std_h = 0.0;
};

namespace detail {

inline double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;  // singleton convention
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace detail

// Per-group mean and sample (n-1) standard deviation of M and H.
inline std::map<std::string, GroupStat> group_summary(
    const std::vector<std::pair<IndexTuple, std::string>>& tuples) {
    if (tuples.empty()) raise(errc::empty_panel, "no tuples to summarize");

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_group;
    for (const auto& [tuple, label] : tuples) {
        by_group[label].first.push_back(tuple.big_m);
        by_group[label].second.push_back(tuple.big_h);
    }

    std::map<std::string, GroupStat> out;
    for (const auto& [label, series] : by_group) {
        const auto& [ms, hs] = series;
        GroupStat g;
        g.count = ms.size();
        for (double m : ms) g.mean_m += m;
        g.mean_m /= static_cast<double>(ms.size());
        for (double h : hs) g.mean_h += h;
        g.mean_h /= static_cast<double>(hs.size());
        g.std_m = detail::sample_std(ms, g.mean_m);
        g.std_h = detail::sample_std(hs, g.mean_h);
        out.emplace(label, g);
    }
    return out;
}

struct PanelRow {
    std::string author_id;
    std::string group;
    int n_papers = 0;
    IndexTuple indices;
};

// A correlation that may be undefined (degenerate panel); `reason` is empty
// exactly when `value` is present.
struct Correlation {
    std::optional<double> value;
    std::string reason;
};

struct PanelReport {
    std::vector<PanelRow> rows;
    Correlation pearson_h_nj;
    Correlation pearson_big_h_m;
    std::map<std::string, GroupStat> groups;
};

// The computation behind both scatter views: per-author index tuples, the
// two Pearson coefficients, and group summaries. Authors absent from the
// group mapping get the label "ungrouped".
inline PanelReport build_panel_report(const std::vector<AuthorProfile>& profiles,
                                      const std::map<std::string, std::string>& groups,
                                      const AliasMap& aliases) {
    if (profiles.size() < 2)
        raise(errc::too_few_authors,
              "panel needs at least 2 authors, got " + std::to_string(profiles.size()));

    PanelReport report;
    report.rows.reserve(profiles.size());
    for (const auto& profile : profiles) {
        PanelRow row;
        row.author_id = profile.author_id();
        auto it = groups.find(row.author_id);
        row.group = (it == groups.end()) ? "ungrouped" : it->second;
        row.n_papers = profile.n_papers();
        try {
            row.indices = compute_profile_indices(profile, aliases);
        } catch (const Error& e) {
            raise(e.code(), "author '" + row.author_id + "': " + e.what());
        }
        report.rows.push_back(std::move(row));
    }

    std::sort(report.rows.begin(), report.rows.end(), [](const PanelRow& a, const PanelRow& b) {
        if (a.indices.big_h != b.indices.big_h) return a.indices.big_h > b.indices.big_h;
        if (a.indices.h != b.indices.h) return a.indices.h > b.indices.h;
        return a.author_id < b.author_id;
    });

    std::vector<double> hs, njs, big_hs, ms;
    std::vector<std::pair<IndexTuple, std::string>> tuples;
    for (const auto& row : report.rows) {
        hs.push_back(static_cast<double>(row.indices.h));
        njs.push_back(static_cast<double>(row.indices.n_j));
        big_hs.push_back(row.indices.big_h);
        ms.push_back(row.indices.big_m);
        tuples.emplace_back(row.indices, row.group);
    }

    auto correlate = [](const std::vector<double>& xs, const std::vector<double>& ys) {
        Correlation c;
        try {
            c.value = pearson(xs, ys);
        } catch (const Error& e) {
            if (e.code() != errc::zero_variance) throw;
            c.reason = "undefined (zero variance)";
        }
        return c;
    };
    report.pearson_h_nj = correlate(hs, njs);
    report.pearson_big_h_m = correlate(big_hs, ms);
    report.groups = group_summary(tuples);
    return report;
}

enum class RankKey { by_big_h, by_h, by_m_distance_half };

// Total, deterministic orderings over report rows. The M-distance key favors
// authors closest to the balanced M = 1/2 point, breaking ties toward higher
// output volume.
inline std::vector<std::string> rank_authors(const PanelReport& report, RankKey key) {
    std::vector<const PanelRow*> rows;
    rows.reserve(report.rows.size());
    for (const auto& row : report.rows) rows.push_back(&row);

    auto by = [key](const PanelRow* a, const PanelRow* b) {
        const IndexTuple& ia = a->indices;
        const IndexTuple& ib = b->indices;
        switch (key) {
            case RankKey::by_h:
                if (ia.h != ib.h) return ia.h > ib.h;
                if (ia.big_h != ib.big_h) return ia.big_h > ib.big_h;
                return a->author_id < b->author_id;
            case RankKey::by_m_distance_half: {
                double da = std::abs(ia.big_m - 0.5);
                double db = std::abs(ib.big_m - 0.5);
                if (da != db) return da < db;
                if (ia.big_h != ib.big_h) return ia.big_h > ib.big_h;
                return a->author_id < b->author_id;
            }
            case RankKey::by_big_h:
            default:
                if (ia.big_h != ib.big_h) return ia.big_h > ib.big_h;
                if (ia.h != ib.h) return ia.h > ib.h;
                return a->author_id < b->author_id;
        }
    };
    std::sort(rows.begin(), rows.end(), by);

    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (const auto* row : rows) ids.push_back(row->author_id);
    return ids;
}

}  // namespace scopemeter
