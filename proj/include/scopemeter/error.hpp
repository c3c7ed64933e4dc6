#pragma once

#include <stdexcept>
#include <string>

namespace scopemeter {

// Every failure the library reports, one code per condition.
enum class errc {
    // record validation
    empty_author_id,
    malformed_issn,
    negative_citations,
    year_out_of_range,
    // profile construction
    empty_profile,
    mixed_author_ids,
    // file parsing
    missing_header,
    unknown_column,
    row_error,
    syntax_error,
    missing_author_id,
    empty_after_normalization,
    conflicting_alias,
    malformed_row,
    no_journal_identity,
    // index computation
    empty_list,
    unknown_citations,
    invalid_nj,
    out_of_range,
    // panel statistics
    length_mismatch,
    too_few_points,
    zero_variance,
    empty_panel,
    too_few_authors,
    // works client
    invalid_config,
    http_error,
    decode_error,
    rate_limit_exhausted,
    timeout,
    io_error,
};

inline const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::empty_author_id: return "EmptyAuthorId";
        case errc::malformed_issn: return "MalformedIssn";
        case errc::negative_citations: return "NegativeCitations";
        case errc::year_out_of_range: return "YearOutOfRange";
        case errc::empty_profile: return "EmptyProfile";
        case errc::mixed_author_ids: return "MixedAuthorIds";
        case errc::missing_header: return "MissingHeader";
        case errc::unknown_column: return "UnknownColumn";
        case errc::row_error: return "RowError";
        case errc::syntax_error: return "SyntaxError";
        case errc::missing_author_id: return "MissingAuthorId";
        case errc::empty_after_normalization: return "EmptyAfterNormalization";
        case errc::conflicting_alias: return "ConflictingAlias";
        case errc::malformed_row: return "MalformedRow";
        case errc::no_journal_identity: return "NoJournalIdentity";
        case errc::empty_list: return "EmptyList";
        case errc::unknown_citations: return "UnknownCitations";
        case errc::invalid_nj: return "InvalidNj";
        case errc::out_of_range: return "OutOfRange";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::too_few_points: return "TooFewPoints";
        case errc::zero_variance: return "ZeroVariance";
        case errc::empty_panel: return "EmptyPanel";
        case errc::too_few_authors: return "TooFewAuthors";
        case errc::invalid_config: return "InvalidConfig";
        case errc::http_error: return "HttpError";
        case errc::decode_error: return "DecodeError";
        case errc::rate_limit_exhausted: return "RateLimitExhausted";
        case errc::timeout: return "Timeout";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace scopemeter
