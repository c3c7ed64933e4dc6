#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "scopemeter/core.hpp"
#include "scopemeter/csv.hpp"
#include "scopemeter/error.hpp"

namespace scopemeter {

namespace detail {

// Lowercases one code point for the scripts we classify (ASCII, Latin-1,
// Latin Extended-A, Greek, Cyrillic). Unknown code points pass through.
inline std::uint32_t lower_codepoint(std::uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;  // À..Þ → à..þ
    if (cp >= 0x0100 && cp <= 0x0137) return cp | 1;                     // Ā..ķ pairs
    if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;  // Ĺ..ň pairs
    if (cp >= 0x014A && cp <= 0x0177) return cp | 1;                       // Ŋ..ŷ pairs
    if (cp == 0x0178) return 0x00FF;                                       // Ÿ → ÿ
    if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;  // Ź..ž pairs
    if (cp == 0x0130) return 'i';                                          // İ → i
    if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 0x20;    // Α..Ϋ
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;                    // А..Я
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;                    // Ѐ..Џ
    return cp;
}

// True when the code point should survive normalization as-is (after
// lowercasing). Everything else becomes a space.
inline bool keep_codepoint(std::uint32_t cp) {
    if (cp < 0x80)
        return (cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9');
    if (cp >= 0x00A0 && cp <= 0x00BF)
        return cp == 0x00AA || cp == 0x00B5 || cp == 0x00BA;  // ª µ º are letters
    if (cp == 0x00D7 || cp == 0x00F7) return false;           // × ÷
    if (cp >= 0x2000 && cp <= 0x206F) return false;           // general punctuation
    if (cp >= 0x0080 && cp <= 0x009F) return false;           // C1 controls
    return true;  // unknown scripts: assume letter, do not fold
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Decodes the next UTF-8 code point; invalid sequences yield one replacement
// per bad byte so normalization is total on arbitrary bytes.
inline std::uint32_t next_codepoint(std::string_view s, std::size_t& pos) {
    auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len = (b0 >= 0xF0) ? 4 : (b0 >= 0xE0) ? 3 : (b0 >= 0xC0) ? 2 : 0;
    if (len == 0 || pos + len > s.size()) {
        ++pos;
        return 0xFFFD;
    }
    std::uint32_t cp = b0 & (0x7F >> len);
    for (int i = 1; i < len; ++i) {
        if ((byte(pos + i) & 0xC0) != 0x80) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | (byte(pos + i) & 0x3F);
    }
    pos += len;
    return cp;
}

inline std::string normalize_journal_impl(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        std::uint32_t cp = lower_codepoint(next_codepoint(raw, pos));
        if (cp == 0xFFFD || !keep_codepoint(cp)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        append_utf8(out, cp);
    }
    return out;
}

}  // namespace detail

// Canonical form of a journal title used for identity comparisons: lowercase,
// punctuation-free, single-spaced, trimmed. Total on arbitrary byte content.
inline std::string normalize_journal(std::string_view raw) {
    std::string out = detail::normalize_journal_impl(raw);
    if (out.empty())
        raise(errc::empty_after_normalization,
              "journal name '" + std::string(raw) + "' has no letters or digits");
    return out;
}

// The unit of "different journals": an ISSN when the record has one, otherwise
// the normalized title.
struct JournalKey {
    enum class Kind { by_issn, by_title };

    Kind kind = Kind::by_title;
    std::string key;

    static JournalKey issn(std::string value) { return {Kind::by_issn, std::move(value)}; }
    static JournalKey title(std::string value) { return {Kind::by_title, std::move(value)}; }

    bool operator==(const JournalKey&) const = default;
    auto operator<=>(const JournalKey&) const = default;
};

inline std::string to_string(const JournalKey& k) {
    return (k.kind == JournalKey::Kind::by_issn ? "issn:" : "title:") + k.key;
}

// Immutable lookup table from normalized journal titles to canonical keys.
// Resolution is a single lookup: canonical targets are never themselves
// aliased (enforced at load), so no chain walking happens at query time.
class AliasMap {
public:
    AliasMap() = default;

    std::optional<JournalKey> lookup(const std::string& normalized_title) const {
        auto it = entries_.find(normalized_title);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const std::map<std::string, JournalKey>& entries() const noexcept { return entries_; }

private:
    friend AliasMap load_alias_map(std::string_view);
    std::map<std::string, JournalKey> entries_;
};

// Loads `alias,canonical_kind,canonical_key` rows (canonical_kind is "issn"
// or "title"). Aliases and title-kind targets are normalized on load;
// repeated rows must agree on their target.
inline AliasMap load_alias_map(std::string_view text) {
    CsvReader reader(text);
    auto header = reader.next_row();
    if (!header) raise(errc::missing_header, "alias file is empty");
    static const std::vector<std::string> expected = {"alias", "canonical_kind", "canonical_key"};
    if (*header != expected)
        raise(errc::missing_header, "alias header must be 'alias,canonical_kind,canonical_key'");

    AliasMap map;
    while (auto row = reader.next_row()) {
        std::size_t line = reader.row_line();
        auto malformed = [line](const std::string& cause) {
            raise(errc::malformed_row, "line " + std::to_string(line) + ": " + cause);
        };
        if (row->size() != 3)
            malformed(std::to_string(row->size()) + " cells, expected 3");

        std::string alias = detail::normalize_journal_impl((*row)[0]);
        if (alias.empty()) malformed("alias '" + (*row)[0] + "' has no letters or digits");

        const std::string& kind = (*row)[1];
        JournalKey canonical;
        if (kind == "issn") {
            std::string issn = detail::upper_ascii(detail::trim_copy((*row)[2]));
            if (!is_valid_issn(issn)) malformed("canonical_key '" + (*row)[2] + "' is not an ISSN");
            canonical = JournalKey::issn(std::move(issn));
        } else if (kind == "title") {
            std::string title = detail::normalize_journal_impl((*row)[2]);
            if (title.empty())
                malformed("canonical_key '" + (*row)[2] + "' has no letters or digits");
            canonical = JournalKey::title(std::move(title));
        } else {
            malformed("canonical_kind '" + kind + "' must be 'issn' or 'title'");
        }

        auto [it, inserted] = map.entries_.emplace(alias, canonical);
        if (!inserted && it->second != canonical)
            raise(errc::conflicting_alias, "alias '" + alias + "' maps to both " +
                                               to_string(it->second) + " and " +
                                               to_string(canonical));
    }

    // Reject chains: a title-kind target may not itself be an alias (mapping
    // an alias to itself is allowed and means "this spelling is canonical").
    for (const auto& [alias, canonical] : map.entries_) {
        if (canonical.kind != JournalKey::Kind::by_title || canonical.key == alias) continue;
        auto it = map.entries_.find(canonical.key);
        if (it != map.entries_.end() && it->second != canonical)
            raise(errc::conflicting_alias, "alias '" + alias + "' targets '" + canonical.key +
                                               "', which is itself aliased");
    }
    return map;
}

// Identity resolution for one record: ISSN wins outright; otherwise the
// normalized title, routed through the alias map when matched.
inline JournalKey journal_key(const PaperRecord& record, const AliasMap& aliases) {
    if (record.issn) return JournalKey::issn(*record.issn);
    std::string normalized = detail::normalize_journal_impl(record.journal_name);
    if (normalized.empty())
        raise(errc::no_journal_identity, "record '" + record.title +
                                             "' has no ISSN and journal name '" +
                                             record.journal_name + "' normalizes to empty");
    if (auto canonical = aliases.lookup(normalized)) return *canonical;
    return JournalKey::title(std::move(normalized));
}

}  // namespace scopemeter
