#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "scopemeter/journal.hpp"
#include "test_support.hpp"

using scopemeter::AliasMap;
using scopemeter::JournalKey;
using scopemeter::errc;
using support::err_code;

TEST_CASE("normalize_journal folds case, punctuation, and spacing") {
    CHECK(scopemeter::normalize_journal("Physical Review Letters ") == "physical review letters");
    CHECK(scopemeter::normalize_journal("Phys. Rev. Lett.") == "phys rev lett");
    CHECK(scopemeter::normalize_journal("  J.\tStat.\nMech. ") == "j stat mech");
    CHECK(scopemeter::normalize_journal("IEEE Trans. (Part B)") == "ieee trans part b");
    CHECK(scopemeter::normalize_journal("2D Materials") == "2d materials");
}

TEST_CASE("normalize_journal rejects content-free input") {
    CHECK(err_code([] { scopemeter::normalize_journal("!!!"); }) ==
          errc::empty_after_normalization);
    CHECK(err_code([] { scopemeter::normalize_journal(""); }) == errc::empty_after_normalization);
    CHECK(err_code([] { scopemeter::normalize_journal(" .,-  "); }) ==
          errc::empty_after_normalization);
}

TEST_CASE("normalize_journal lowercases without folding diacritics") {
    CHECK(scopemeter::normalize_journal("École Polytechnique") == "école polytechnique");
    CHECK(scopemeter::normalize_journal("Journal FÜR Physik") == "journal für physik");
    CHECK(scopemeter::normalize_journal("Łódź Studies") == "łódź studies");
    CHECK(scopemeter::normalize_journal("ΦΥΣΙΚΗ Review") == "φυσικη review");
    CHECK(scopemeter::normalize_journal("НАУКА и Жизнь") == "наука и жизнь");
}

TEST_CASE("normalize_journal treats unicode punctuation as separators") {
    // en dash (U+2013) and typographic quotes (U+201C/U+201D)
    CHECK(scopemeter::normalize_journal("Physics\xE2\x80\x93Uspekhi") == "physics uspekhi");
    CHECK(scopemeter::normalize_journal("\xE2\x80\x9CModern\xE2\x80\x9D Review") ==
          "modern review");
    CHECK(scopemeter::normalize_journal("A\xC3\x97J") == "a j");  // multiplication sign
}

TEST_CASE("normalize_journal survives invalid utf-8") {
    CHECK(scopemeter::normalize_journal("Bad\xFF\xFE bytes") == "bad bytes");
    CHECK(scopemeter::normalize_journal("Trunc\xC3") == "trunc");
}

TEST_CASE("normalize_journal is idempotent on fuzzed input") {
    std::mt19937 rng(77531);
    std::uniform_int_distribution<int> len(0, 60);
    std::uniform_int_distribution<int> byte(0, 255);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string raw;
        int n = len(rng);
        for (int k = 0; k < n; ++k) raw += static_cast<char>(byte(rng));
        std::string once;
        try {
            once = scopemeter::normalize_journal(raw);
        } catch (const scopemeter::Error&) {
            continue;  // nothing survives normalization: idempotence is vacuous
        }
        ++checked;
        REQUIRE(scopemeter::normalize_journal(once) == once);
    }
    CHECK(checked > 1000);  // the fuzz corpus must actually exercise the property
}

TEST_CASE("journal_key prefers the issn outright") {
    scopemeter::PaperRecord rec;
    rec.author_id = "a1";
    rec.journal_name = "PRL";
    rec.issn = "0031-9007";
    rec = scopemeter::validate_record(rec);
    CHECK(scopemeter::journal_key(rec, {}) == JournalKey::issn("0031-9007"));

    // with an ISSN the name never matters
    rec.journal_name = "Something Entirely Different";
    CHECK(scopemeter::journal_key(rec, {}) == JournalKey::issn("0031-9007"));
}

TEST_CASE("journal_key falls back to the normalized title") {
    scopemeter::PaperRecord rec;
    rec.author_id = "a1";
    rec.journal_name = "Journal of Things";
    CHECK(scopemeter::journal_key(rec, {}) == JournalKey::title("journal of things"));
}

TEST_CASE("journal_key applies the alias map to titles") {
    AliasMap aliases = scopemeter::load_alias_map(
        "alias,canonical_kind,canonical_key\nPhys. Rev. Lett.,issn,0031-9007\n");
    scopemeter::PaperRecord rec;
    rec.author_id = "a1";
    rec.journal_name = "Phys. Rev. Lett.";
    CHECK(scopemeter::journal_key(rec, aliases) == JournalKey::issn("0031-9007"));
    // determinism: same inputs, same key
    CHECK(scopemeter::journal_key(rec, aliases) == JournalKey::issn("0031-9007"));
}

TEST_CASE("journal_key requires some identity") {
    scopemeter::PaperRecord rec;
    rec.author_id = "a1";
    rec.journal_name = "???";
    CHECK(err_code([&] { scopemeter::journal_key(rec, {}); }) == errc::no_journal_identity);
}

TEST_CASE("load_alias_map normalizes aliases on load") {
    AliasMap aliases = scopemeter::load_alias_map(
        "alias,canonical_kind,canonical_key\nPhys. Rev. Lett.,issn,0031-9007\n");
    REQUIRE(aliases.size() == 1);
    auto hit = aliases.lookup("phys rev lett");
    REQUIRE(hit.has_value());
    CHECK(*hit == JournalKey::issn("0031-9007"));
    CHECK_FALSE(aliases.lookup("Phys. Rev. Lett.").has_value());
}

TEST_CASE("load_alias_map accepts an empty file with header") {
    AliasMap aliases = scopemeter::load_alias_map("alias,canonical_kind,canonical_key\n");
    CHECK(aliases.empty());
}

TEST_CASE("load_alias_map rejects conflicting duplicates but tolerates repeats") {
    std::string conflicting =
        "alias,canonical_kind,canonical_key\n"
        "Phys. Rev. Lett.,issn,0031-9007\n"
        "phys rev lett,issn,0028-0836\n";
    CHECK(err_code([&] { scopemeter::load_alias_map(conflicting); }) == errc::conflicting_alias);

    std::string repeated =
        "alias,canonical_kind,canonical_key\n"
        "Phys. Rev. Lett.,issn,0031-9007\n"
        "phys rev lett,issn,0031-9007\n";
    CHECK(scopemeter::load_alias_map(repeated).size() == 1);
}

TEST_CASE("load_alias_map rejects chains") {
    std::string chained =
        "alias,canonical_kind,canonical_key\n"
        "Ann Phys,title,annalen der physik\n"
        "Annalen der Physik,title,ann phys journal\n";
    CHECK(err_code([&] { scopemeter::load_alias_map(chained); }) == errc::conflicting_alias);

    // a self-map marks a spelling canonical; routing other aliases to it is fine
    std::string funneled =
        "alias,canonical_kind,canonical_key\n"
        "Annalen der Physik,title,annalen der physik\n"
        "Ann. Phys.,title,annalen der physik\n";
    AliasMap aliases = scopemeter::load_alias_map(funneled);
    CHECK(aliases.size() == 2);
    CHECK(*aliases.lookup("ann phys") == JournalKey::title("annalen der physik"));
}

TEST_CASE("load_alias_map flags malformed rows") {
    CHECK(err_code([] {
              scopemeter::load_alias_map("alias,canonical_kind,canonical_key\nA,venue,X\n");
          }) == errc::malformed_row);
    CHECK(err_code([] {
              scopemeter::load_alias_map("alias,canonical_kind,canonical_key\nA,issn,notissn\n");
          }) == errc::malformed_row);
    CHECK(err_code([] {
              scopemeter::load_alias_map("alias,canonical_kind,canonical_key\n!!!,issn,0031-9007\n");
          }) == errc::malformed_row);
    CHECK(err_code([] {
              scopemeter::load_alias_map("alias,canonical_kind,canonical_key\nA,title\n");
          }) == errc::malformed_row);
}

TEST_CASE("the alias fixture loads") {
    AliasMap aliases =
        scopemeter::load_alias_map(support::read_file(support::data_file("alias.csv")));
    CHECK(aliases.size() == 4);
    CHECK(*aliases.lookup("p r l") == JournalKey::issn("0031-9007"));
    CHECK(*aliases.lookup("ann phys") == JournalKey::title("annalen der physik"));
}
