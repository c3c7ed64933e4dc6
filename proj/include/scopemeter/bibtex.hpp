#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scopemeter/core.hpp"
#include "scopemeter/error.hpp"

namespace scopemeter {

namespace detail {

// Recursive-descent reader for the supported BibTeX subset. Offsets in error
// messages are byte positions into the input.
class BibtexParser {
public:
    explicit BibtexParser(std::string_view text) : text_(text) {}

    std::vector<PaperRecord> parse() {
        std::vector<PaperRecord> records;
        while (skip_to_entry()) {
            std::size_t at = pos_;
            ++pos_;  // '@'
            std::string type = lower_ascii(read_name());
            if (type.empty())
                fail(at, "'@' not followed by an entry type");
            if (type == "comment" || type == "string" || type == "preamble") {
                skip_group(at);
                continue;
            }
            if (type != "article" && type != "inproceedings" && type != "misc")
                fail(at, "unsupported entry type '@" + type + "'");
            records.push_back(read_entry(at));
        }
        return records;
    }

private:
    [[noreturn]] void fail(std::size_t offset, const std::string& cause) {
        raise(errc::syntax_error, "offset " + std::to_string(offset) + ": " + cause);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
            ++pos_;
    }

    // Text between entries is commentary; position at the next '@' if any.
    bool skip_to_entry() {
        while (!at_end() && peek() != '@') ++pos_;
        return !at_end();
    }

    std::string read_name() {
        std::string name;
        while (!at_end() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            name += text_[pos_++];
        return name;
    }

    void expect(char c) {
        skip_ws();
        if (at_end() || peek() != c)
            fail(pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    // Discards one balanced { ... } group (used for @comment and friends).
    void skip_group(std::size_t entry_at) {
        expect('{');
        int depth = 1;
        while (!at_end() && depth > 0) {
            if (peek() == '{') ++depth;
            if (peek() == '}') --depth;
            ++pos_;
        }
        if (depth != 0) fail(entry_at, "unterminated entry");
    }

    // Braced values keep their text but drop the braces themselves (they only
    // protect grouping); internal whitespace runs collapse to single spaces.
    std::string read_braced(std::size_t at) {
        ++pos_;  // '{'
        std::string value;
        int depth = 1;
        while (!at_end()) {
            char c = text_[pos_];
            if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    ++pos_;
                    return value;
                }
            } else {
                append_collapsed(value, c);
            }
            ++pos_;
        }
        fail(at, "unterminated braced value");
    }

    std::string read_quoted(std::size_t at) {
        ++pos_;  // '"'
        std::string value;
        int depth = 0;
        while (!at_end()) {
            char c = text_[pos_];
            if (c == '{') {
                ++depth;
                ++pos_;
                continue;
            }
            if (c == '}') {
                --depth;
                ++pos_;
                continue;
            }
            if (c == '"' && depth == 0) {
                ++pos_;
                return value;
            }
            append_collapsed(value, c);
            ++pos_;
        }
        fail(at, "unterminated quoted value");
    }

    std::string read_bare() {
        std::string value;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' ||
                             peek() == '-' || peek() == '_' || peek() == '/' || peek() == ':'))
            value += text_[pos_++];
        return value;
    }

    static void append_collapsed(std::string& value, char c) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
        if (c == ' ' && (value.empty() || value.back() == ' ')) return;
        value += c;
    }

    std::string read_value() {
        skip_ws();
        if (at_end()) fail(pos_, "missing field value");
        if (peek() == '{') return read_braced(pos_);
        if (peek() == '"') return read_quoted(pos_);
        std::string bare = read_bare();
        if (bare.empty()) fail(pos_, "missing field value");
        return bare;
    }

    PaperRecord read_entry(std::size_t entry_at) {
        expect('{');
        skip_ws();
        std::string key = read_name();
        if (key.empty()) fail(pos_, "missing entry key");
        expect(',');

        std::map<std::string, std::string> fields;
        std::map<std::string, std::size_t> field_at;
        while (true) {
            skip_ws();
            if (at_end()) fail(entry_at, "unterminated entry");
            if (peek() == '}') {
                ++pos_;
                break;
            }
            std::size_t at = pos_;
            std::string name = lower_ascii(read_name());
            if (name.empty()) fail(at, "expected a field name");
            expect('=');
            std::string value = read_value();
            fields.emplace(name, trim_copy(value));  // first occurrence wins
            field_at.emplace(name, at);
            skip_ws();
            if (!at_end() && peek() == ',') {
                ++pos_;
                continue;
            }
            skip_ws();
            if (at_end() || peek() != '}') fail(entry_at, "unterminated entry");
        }

        auto get = [&](const char* name) -> const std::string* {
            auto it = fields.find(name);
            return it == fields.end() ? nullptr : &it->second;
        };

        const std::string* authorid = get("authorid");
        if (!authorid || trim_copy(*authorid).empty())
            raise(errc::missing_author_id, "entry '" + key + "' has no authorid field");

        PaperRecord raw;
        raw.author_id = *authorid;
        if (const auto* title = get("title")) raw.title = *title;
        if (const auto* journal = get("journal"))
            raw.journal_name = *journal;
        else if (const auto* booktitle = get("booktitle"))
            raw.journal_name = *booktitle;
        if (const auto* issn = get("issn"); issn && !trim_copy(*issn).empty()) raw.issn = *issn;
        if (const auto* doi = get("doi"); doi && !trim_copy(*doi).empty()) raw.doi = *doi;
        if (const auto* year = get("year"); year && !trim_copy(*year).empty())
            raw.year = parse_number(*year, "year", field_at["year"]);
        if (const auto* cites = get("citations"); cites && !trim_copy(*cites).empty())
            raw.citations = parse_number(*cites, "citations", field_at["citations"]);
        return validate_record(std::move(raw));
    }

    int parse_number(const std::string& value, const char* what, std::size_t at) {
        std::string t = trim_copy(value);
        int out = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
        if (ec != std::errc{} || ptr != t.data() + t.size())
            fail(at, std::string(what) + " value '" + value + "' is not an integer");
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parses @article / @inproceedings / @misc entries. Journal identity comes
// from `journal` with `booktitle` as fallback; the nonstandard `authorid`
// field is required and `citations` is honored when present. Unknown fields
// are ignored.
inline std::vector<PaperRecord> parse_bibtex(std::string_view text) {
    return detail::BibtexParser(text).parse();
}

}  // namespace scopemeter
