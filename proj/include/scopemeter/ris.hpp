#pragma once

#include <charconv>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "scopemeter/core.hpp"
#include "scopemeter/error.hpp"

namespace scopemeter {

namespace detail {

struct RisTag {
    std::string tag;
    std::string value;
    std::size_t line;
};

inline bool is_ris_tag_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// A tag line is `XX  - value`; the value may be empty (`ER  -`).
inline bool parse_ris_tag_line(std::string_view line, RisTag& out) {
    if (line.size() < 5) return false;
    if (!is_ris_tag_char(line[0]) || !is_ris_tag_char(line[1])) return false;
    if (line[2] != ' ' || line[3] != ' ' || line[4] != '-') return false;
    out.tag.assign(line.substr(0, 2));
    std::string_view rest = line.substr(5);
    if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    out.value = trim_copy(std::string(rest));
    return true;
}

inline PaperRecord ris_record_from_tags(const std::vector<RisTag>& tags, std::size_t index) {
    auto first = [&](std::string_view tag) -> const RisTag* {
        for (const auto& t : tags)
            if (t.tag == tag && !t.value.empty()) return &t;
        return nullptr;
    };
    auto parse_leading_int = [](const RisTag& t, const char* what) {
        std::size_t digits = 0;
        while (digits < t.value.size() && std::isdigit(static_cast<unsigned char>(t.value[digits])))
            ++digits;
        int out = 0;
        auto [ptr, ec] = std::from_chars(t.value.data(), t.value.data() + digits, out);
        if (digits == 0 || ec != std::errc{})
            raise(errc::syntax_error, "line " + std::to_string(t.line) + ": " + what + " value '" +
                                          t.value + "' is not numeric");
        return out;
    };

    const RisTag* author = first("C1");
    if (!author)
        raise(errc::missing_author_id,
              "record " + std::to_string(index) + " has no C1 author id");

    PaperRecord raw;
    raw.author_id = author->value;
    if (const auto* t = first("T1"))
        raw.title = t->value;
    else if (const auto* ti = first("TI"))
        raw.title = ti->value;
    // journal precedence: JO, then JF, then T2
    if (const auto* jo = first("JO"))
        raw.journal_name = jo->value;
    else if (const auto* jf = first("JF"))
        raw.journal_name = jf->value;
    else if (const auto* t2 = first("T2"))
        raw.journal_name = t2->value;
    if (const auto* sn = first("SN")) raw.issn = sn->value;
    if (const auto* py = first("PY")) raw.year = parse_leading_int(*py, "PY");
    if (const auto* doi = first("DO")) raw.doi = doi->value;
    if (const auto* c8 = first("C8")) raw.citations = parse_leading_int(*c8, "C8");
    return validate_record(std::move(raw));
}

}  // namespace detail

// Parses RIS text: records are runs of `XX  - value` tag lines ended by
// `ER  -`. Journal comes from JO, then JF, then T2; author id from the
// custom C1 tag; citations from C8. Long values may wrap onto indented
// continuation lines. Unknown tags are ignored.
inline std::vector<PaperRecord> parse_ris(std::string_view text) {
    std::vector<PaperRecord> records;
    std::vector<detail::RisTag> tags;
    std::size_t line_no = 0;
    std::size_t last_line = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos && pos >= text.size()) break;
        std::string_view line = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find("\xEF\xBB\xBF") == 0 && line_no == 1) line.remove_prefix(3);
        if (detail::trim_copy(std::string(line)).empty()) continue;
        last_line = line_no;

        detail::RisTag tag;
        if (detail::parse_ris_tag_line(line, tag)) {
            tag.line = line_no;
            if (tag.tag == "ER") {
                records.push_back(detail::ris_record_from_tags(tags, records.size() + 1));
                tags.clear();
            } else {
                tags.push_back(std::move(tag));
            }
            continue;
        }
        // continuation of the previous tag's value
        if (tags.empty())
            raise(errc::syntax_error,
                  "line " + std::to_string(line_no) + ": expected a 'XX  - ' tag line");
        std::string cont = detail::trim_copy(std::string(line));
        if (!tags.back().value.empty()) tags.back().value += ' ';
        tags.back().value += cont;
    }

    if (!tags.empty())
        raise(errc::syntax_error,
              "line " + std::to_string(last_line) + ": record not terminated by 'ER  -'");
    return records;
}

}  // namespace scopemeter
