#pragma once

#include <charconv>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scopemeter/core.hpp"
#include "scopemeter/error.hpp"

namespace scopemeter {

// Incremental RFC-4180-style row reader. Accepts LF and CRLF line endings,
// double-quote escaping inside quoted fields, and skips blank lines.
class CsvReader {
public:
    explicit CsvReader(std::string_view text) : text_(text) {
        // tolerate a UTF-8 BOM from spreadsheet exports
        if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    }

    // Line (1-based) on which the most recently returned row started.
    std::size_t row_line() const noexcept { return row_line_; }

    std::optional<std::vector<std::string>> next_row() {
        skip_blank_lines();
        if (pos_ >= text_.size()) return std::nullopt;
        row_line_ = line_;

        std::vector<std::string> fields;
        std::string field;
        bool in_quotes = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        field += '"';
                        pos_ += 2;
                    } else {
                        in_quotes = false;
                        ++pos_;
                    }
                } else {
                    if (c == '\n') ++line_;
                    field += c;
                    ++pos_;
                }
                continue;
            }
            if (c == '"' && field.empty()) {
                in_quotes = true;
                ++pos_;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                ++pos_;
            } else if (c == '\n' || c == '\r') {
                consume_eol();
                break;
            } else {
                field += c;
                ++pos_;
            }
        }
        if (in_quotes)
            raise(errc::syntax_error,
                  "line " + std::to_string(row_line_) + ": unterminated quoted field");
        fields.push_back(std::move(field));
        return fields;
    }

private:
    void consume_eol() {
        if (pos_ < text_.size() && text_[pos_] == '\r') ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        ++line_;
    }

    void skip_blank_lines() {
        while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r'))
            consume_eol();
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t row_line_ = 1;
};

inline std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace detail {

inline const std::vector<std::string>& record_csv_header() {
    static const std::vector<std::string> header = {"author_id", "title",     "journal", "issn",
                                                    "year",      "citations", "doi"};
    return header;
}

inline std::optional<int> parse_int_cell(const std::string& cell, const char* what,
                                         std::size_t line) {
    if (cell.empty()) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        raise(errc::row_error, "line " + std::to_string(line) + ": " + what + " cell '" + cell +
                                   "' is not an integer");
    return value;
}

}  // namespace detail

// Parses the record CSV schema:
//   author_id,title,journal,issn,year,citations,doi
// Empty cells become absent optional fields. Rows that fail validation are
// reported with their line number.
inline std::vector<PaperRecord> parse_csv(std::string_view text) {
    CsvReader reader(text);
    auto header = reader.next_row();
    if (!header) raise(errc::missing_header, "input is empty");
    const auto& expected = detail::record_csv_header();
    if (*header != expected) {
        for (std::size_t i = 0; i < header->size(); ++i) {
            if (i >= expected.size() || (*header)[i] != expected[i])
                raise(errc::unknown_column, "header column " + std::to_string(i + 1) + " '" +
                                                (*header)[i] + "' (expected '" +
                                                (i < expected.size() ? expected[i] : "<none>") +
                                                "')");
        }
        raise(errc::unknown_column,
              "header has " + std::to_string(header->size()) + " columns, expected 7");
    }

    std::vector<PaperRecord> records;
    while (auto row = reader.next_row()) {
        std::size_t line = reader.row_line();
        if (row->size() != expected.size())
            raise(errc::row_error, "line " + std::to_string(line) + ": " +
                                       std::to_string(row->size()) + " cells, expected 7");
        PaperRecord raw;
        raw.author_id = (*row)[0];
        raw.title = (*row)[1];
        raw.journal_name = (*row)[2];
        if (!(*row)[3].empty()) raw.issn = (*row)[3];
        raw.year = detail::parse_int_cell((*row)[4], "year", line);
        raw.citations = detail::parse_int_cell((*row)[5], "citations", line);
        if (!(*row)[6].empty()) raw.doi = (*row)[6];
        try {
            records.push_back(validate_record(std::move(raw)));
        } catch (const Error& e) {
            raise(errc::row_error, "line " + std::to_string(line) + ": " + e.what());
        }
    }
    return records;
}

// Serializes records back to the same CSV schema; parse_csv(write_csv(r)) is
// field-identical to r.
inline std::string write_csv(std::span<const PaperRecord> records) {
    std::string out = "author_id,title,journal,issn,year,citations,doi\n";
    for (const auto& rec : records) {
        out += csv_escape(rec.author_id);
        out += ',';
        out += csv_escape(rec.title);
        out += ',';
        out += csv_escape(rec.journal_name);
        out += ',';
        if (rec.issn) out += csv_escape(*rec.issn);
        out += ',';
        if (rec.year) out += std::to_string(*rec.year);
        out += ',';
        if (rec.citations) out += std::to_string(*rec.citations);
        out += ',';
        if (rec.doi) out += csv_escape(*rec.doi);
        out += '\n';
    }
    return out;
}

}  // namespace scopemeter
