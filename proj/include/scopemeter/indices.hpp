#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scopemeter/core.hpp"
#include "scopemeter/error.hpp"
#include "scopemeter/journal.hpp"

namespace scopemeter {

// Largest h such that at least h entries are >= h. Sorts a descending copy
// and scans; O(n log n), tie-free by construction.
inline int compute_h(std::vector<int> citations) {
    if (citations.empty()) raise(errc::empty_list, "citation list is empty");
    std::sort(citations.begin(), citations.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < citations.size(); ++i) {
        if (citations[i] >= static_cast<int>(i) + 1)
            h = static_cast<int>(i) + 1;
        else
            break;
    }
    return h;
}

// Overload for per-record optional counts: absent entries are an error, not
// an implicit zero — h computed on partial data would silently understate.
inline int compute_h(const std::vector<std::optional<int>>& citations) {
    if (citations.empty()) raise(errc::empty_list, "citation list is empty");
    std::vector<int> known;
    known.reserve(citations.size());
    std::size_t absent = 0;
    for (const auto& c : citations) {
        if (c)
            known.push_back(*c);
        else
            ++absent;
    }
    if (absent > 0)
        raise(errc::unknown_citations,
              std::to_string(absent) + " of " + std::to_string(citations.size()) +
                  " records have no citation count");
    return compute_h(std::move(known));
}

// Number of different journals across the profile, with "different" defined
// by journal_key (ISSN first, alias-canonicalized title fallback).
inline int compute_nj(const AuthorProfile& profile, const AliasMap& aliases) {
    std::set<JournalKey> keys;
    const auto& records = profile.records();
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            keys.insert(journal_key(records[i], aliases));
        } catch (const Error&) {
            raise(errc::no_journal_identity,
                  "record " + std::to_string(i + 1) + " of author '" + profile.author_id() +
                      "' has no journal identity");
        }
    }
    return static_cast<int>(keys.size());
}

struct PolarPoint {
    double big_h = 0.0;
    double big_m = 1.0;
};

// Real-relaxed polar transform: H = sqrt((h^2 + n_j^2)/2) and
// M = (2/pi) * arctan(n_j / h), with M = 1 exactly at h = 0 (the arctan
// limit). Keeps the transform total for profiles whose papers are all uncited.
inline PolarPoint to_polar_real(double h, double n_j) {
    PolarPoint p;
    p.big_h = std::sqrt((h * h + n_j * n_j) / 2.0);
    p.big_m = (h == 0.0) ? 1.0 : 2.0 * std::atan2(n_j, h) / std::numbers::pi;
    return p;
}

inline PolarPoint to_polar(int h, int n_j) {
    if (n_j < 1) raise(errc::invalid_nj, "n_j must be >= 1, got " + std::to_string(n_j));
    if (h < 0) raise(errc::out_of_range, "h must be >= 0, got " + std::to_string(h));
    return to_polar_real(static_cast<double>(h), static_cast<double>(n_j));
}

struct CartesianPoint {
    double h = 0.0;
    double n_j = 0.0;
};

// Inverse transform: h = sqrt(2)*H*cos(pi*M/2), n_j = sqrt(2)*H*sin(pi*M/2).
// Returns reals; exists for round-trip verification, not paper counting.
inline CartesianPoint from_polar(double big_h, double big_m) {
    if (!(big_h > 0.0))
        raise(errc::out_of_range, "H must be > 0, got " + std::to_string(big_h));
    if (!(big_m > 0.0) || !(big_m <= 1.0))
        raise(errc::out_of_range, "M must be in (0, 1], got " + std::to_string(big_m));
    double angle = std::numbers::pi * big_m / 2.0;
    CartesianPoint c;
    c.h = std::numbers::sqrt2 * big_h * std::cos(angle);
    c.n_j = std::numbers::sqrt2 * big_h * std::sin(angle);
    return c;
}

// The full per-author computation: h, N_j, and their polar form.
inline IndexTuple compute_profile_indices(const AuthorProfile& profile, const AliasMap& aliases) {
    std::vector<std::optional<int>> citations;
    citations.reserve(profile.n_papers());
    for (const auto& rec : profile.records()) citations.push_back(rec.citations);

    IndexTuple t;
    t.h = compute_h(citations);
    t.n_j = compute_nj(profile, aliases);
    PolarPoint p = to_polar(t.h, t.n_j);
    t.big_h = p.big_h;
    t.big_m = p.big_m;
    return t;
}

}  // namespace scopemeter
