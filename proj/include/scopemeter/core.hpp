#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "scopemeter/error.hpp"

namespace scopemeter {

namespace detail {

inline std::string trim_copy(std::string_view s) {
    const auto* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

inline std::string lower_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline std::string upper_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

}  // namespace detail

// One publication as found in a bibliographic source. Construct via
// validate_record() to get canonical field values.
struct PaperRecord {
    std::string author_id;
    std::string title;
    std::string journal_name;
    std::optional<std::string> issn;
    std::optional<int> year;
    std::optional<int> citations;  // absent = unknown, not zero
    std::optional<std::string> doi;

    bool operator==(const PaperRecord&) const = default;
};

// True for the hyphenated 9-character form NNNN-NNNC (C digit or X).
// The checksum digit is deliberately not verified.
inline bool is_valid_issn(std::string_view s) {
    if (s.size() != 9 || s[4] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 7u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    char c = s[8];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'X' || c == 'x';
}

// Canonicalizes a raw record: trims strings, uppercases the ISSN, lowercases
// the DOI, and drops optional fields that are empty after trimming.
// Idempotent on its own output.
inline PaperRecord validate_record(PaperRecord raw) {
    PaperRecord rec = std::move(raw);
    rec.author_id = detail::trim_copy(rec.author_id);
    if (rec.author_id.empty()) raise(errc::empty_author_id, "author_id is empty");
    rec.title = detail::trim_copy(rec.title);
    rec.journal_name = detail::trim_copy(rec.journal_name);

    if (rec.issn) {
        std::string issn = detail::trim_copy(*rec.issn);
        if (issn.empty()) {
            rec.issn.reset();
        } else {
            if (!is_valid_issn(issn))
                raise(errc::malformed_issn, "'" + issn + "' does not match NNNN-NNNC");
            rec.issn = detail::upper_ascii(std::move(issn));
        }
    }
    if (rec.year && (*rec.year < 1500 || *rec.year > 2100))
        raise(errc::year_out_of_range,
              "year " + std::to_string(*rec.year) + " outside [1500, 2100]");
    if (rec.citations && *rec.citations < 0)
        raise(errc::negative_citations,
              "citation count " + std::to_string(*rec.citations) + " is negative");
    if (rec.doi) {
        std::string doi = detail::trim_copy(*rec.doi);
        if (doi.empty()) {
            rec.doi.reset();
        } else {
            rec.doi = detail::lower_ascii(std::move(doi));  // DOIs compare case-insensitively
        }
    }
    return rec;
}

// An author's deduplicated publication list. Always non-empty; duplicate
// DOIs are removed at construction (first occurrence wins), records without
// a DOI are never merged.
class AuthorProfile {
public:
    const std::string& author_id() const noexcept { return author_id_; }
    const std::vector<PaperRecord>& records() const noexcept { return records_; }
    int n_papers() const noexcept { return static_cast<int>(records_.size()); }

private:
    AuthorProfile(std::string author_id, std::vector<PaperRecord> records)
        : author_id_(std::move(author_id)), records_(std::move(records)) {}

    friend AuthorProfile build_profile(std::vector<PaperRecord> records,
                                       const std::string& author_id);

    std::string author_id_;
    std::vector<PaperRecord> records_;
};

inline AuthorProfile build_profile(std::vector<PaperRecord> records,
                                   const std::string& author_id) {
    for (const auto& rec : records) {
        if (rec.author_id != author_id)
            raise(errc::mixed_author_ids,
                  "record for '" + rec.author_id + "' while building profile of '" +
                      author_id + "'");
    }
    std::vector<PaperRecord> kept;
    kept.reserve(records.size());
    std::unordered_set<std::string> seen_dois;
    for (auto& rec : records) {
        if (rec.doi && !seen_dois.insert(*rec.doi).second) continue;
        kept.push_back(std::move(rec));
    }
    if (kept.empty()) raise(errc::empty_profile, "no records for author '" + author_id + "'");
    return AuthorProfile(author_id, std::move(kept));
}

// Splits a mixed record list into one profile per author, ordered by
// ascending author_id.
inline std::vector<AuthorProfile> build_profiles(std::vector<PaperRecord> records) {
    std::map<std::string, std::vector<PaperRecord>> by_author;
    for (auto& rec : records) {
        std::string id = rec.author_id;
        by_author[std::move(id)].push_back(std::move(rec));
    }
    std::vector<AuthorProfile> profiles;
    profiles.reserve(by_author.size());
    for (auto& [id, recs] : by_author) profiles.push_back(build_profile(std::move(recs), id));
    return profiles;
}

// The four per-author scores: the raw pair (h, n_j) and its polar form
// (big_h, big_m) with big_h = sqrt((h^2 + n_j^2) / 2) and
// big_m = (2/pi) * arctan(n_j / h).
struct IndexTuple {
    int h = 0;
    int n_j = 1;
    double big_h = 0.0;
    double big_m = 1.0;

    bool operator==(const IndexTuple&) const = default;
};

}  // namespace scopemeter
