#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "scopemeter/csv.hpp"
#include "scopemeter/panel.hpp"
#include "scopemeter/svg.hpp"
#include "scopemeter/version.hpp"

namespace scopemeter {

namespace detail {

// Reports pin their own numeric formatting (6-decimal fixed for reals) so
// output bytes are stable run to run; a generic serializer's shortest-float
// rendering would not be.
inline std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

inline std::string json_str(const std::string& text) { return "\"" + json_escape(text) + "\""; }

inline void append_correlation(std::string& out, const char* name, const Correlation& c,
                               const char* indent) {
    out += indent;
    out += "\"";
    out += name;
    out += "\": ";
    if (c.value) {
        out += fmt6(*c.value);
    } else {
        out += "null,\n";
        out += indent;
        out += "\"";
        out += name;
        out += "_reason\": " + json_str(c.reason);
    }
}

}  // namespace detail

// Single-author result as printed by the compute command. Key order and
// numeric formatting are fixed so identical inputs give identical bytes.
inline std::string compute_to_json(const std::string& author_id, int n_papers,
                                   const IndexTuple& t) {
    std::string out = "{";
    out += "\"author_id\": " + detail::json_str(author_id);
    out += ", \"n_papers\": " + std::to_string(n_papers);
    out += ", \"h\": " + std::to_string(t.h);
    out += ", \"n_j\": " + std::to_string(t.n_j);
    out += ", \"H\": " + detail::fmt6(t.big_h);
    out += ", \"M\": " + detail::fmt6(t.big_m);
    out += "}\n";
    return out;
}

// Full panel report. Undefined correlations serialize as null plus a
// sibling `<name>_reason` string.
inline std::string report_to_json(const PanelReport& report, const std::string& source) {
    std::string out = "{\n";
    out += "  \"meta\": {\n";
    out += "    \"version\": " + detail::json_str(version) + ",\n";
    out += "    \"stddev_convention\": \"sample (n-1)\",\n";
    out += "    \"source\": " + detail::json_str(source) + "\n";
    out += "  },\n";

    out += "  \"rows\": [\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const PanelRow& row = report.rows[i];
        out += "    {\"author_id\": " + detail::json_str(row.author_id) +
               ", \"group\": " + detail::json_str(row.group) +
               ", \"n_papers\": " + std::to_string(row.n_papers) +
               ", \"h\": " + std::to_string(row.indices.h) +
               ", \"n_j\": " + std::to_string(row.indices.n_j) +
               ", \"H\": " + detail::fmt6(row.indices.big_h) +
               ", \"M\": " + detail::fmt6(row.indices.big_m) + "}";
        out += (i + 1 < report.rows.size()) ? ",\n" : "\n";
    }
    out += "  ],\n";

    out += "  \"pearson\": {\n";
    detail::append_correlation(out, "h_nj", report.pearson_h_nj, "    ");
    out += ",\n";
    detail::append_correlation(out, "H_M", report.pearson_big_h_m, "    ");
    out += "\n  },\n";

    out += "  \"groups\": {\n";
    std::size_t gi = 0;
    for (const auto& [label, g] : report.groups) {
        out += "    " + detail::json_str(label) + ": {\"count\": " + std::to_string(g.count) +
               ", \"mean_M\": " + detail::fmt6(g.mean_m) +
               ", \"std_M\": " + detail::fmt6(g.std_m) +
               ", \"mean_H\": " + detail::fmt6(g.mean_h) +
               ", \"std_H\": " + detail::fmt6(g.std_h) + "}";
        out += (++gi < report.groups.size()) ? ",\n" : "\n";
    }
    out += "  }\n";
    out += "}\n";
    return out;
}

// Scatter CSVs: one row per author, `author_id,group,x,y`, in report order.
inline std::string scatter_h_nj_csv(const PanelReport& report) {
    std::string out = "author_id,group,x,y\n";
    for (const PanelRow& row : report.rows) {
        out += csv_escape(row.author_id) + ',' + csv_escape(row.group) + ',' +
               std::to_string(row.indices.h) + ',' + std::to_string(row.indices.n_j) + '\n';
    }
    return out;
}

inline std::string scatter_big_h_m_csv(const PanelReport& report) {
    std::string out = "author_id,group,x,y\n";
    for (const PanelRow& row : report.rows) {
        out += csv_escape(row.author_id) + ',' + csv_escape(row.group) + ',' +
               detail::fmt6(row.indices.big_h) + ',' + detail::fmt6(row.indices.big_m) + '\n';
    }
    return out;
}

namespace detail {

inline std::vector<ScatterSeries> panel_series(const PanelReport& report, bool polar) {
    std::vector<ScatterSeries> series;
    for (const auto& [label, stat] : report.groups) {  // sorted label order
        ScatterSeries s;
        s.label = label;
        if (polar) s.mean_y = stat.mean_m;
        series.push_back(std::move(s));
    }
    auto find = [&series](const std::string& label) -> ScatterSeries& {
        for (auto& s : series)
            if (s.label == label) return s;
        return series.front();  // unreachable: groups cover every row
    };
    for (const PanelRow& row : report.rows) {
        if (polar)
            find(row.group).points.emplace_back(row.indices.big_h, row.indices.big_m);
        else
            find(row.group).points.emplace_back(row.indices.h, row.indices.n_j);
    }
    return series;
}

}  // namespace detail

// The two scatter views: N_j against h (raw counts) and M against H (polar),
// the latter with a horizontal mean-M line per group.
inline std::string panel_svg_h_nj(const PanelReport& report) {
    return render_scatter_svg("N_j as a function of h", "h", "N_j",
                              detail::panel_series(report, false));
}

inline std::string panel_svg_big_h_m(const PanelReport& report) {
    return render_scatter_svg("M as a function of H", "H", "M",
                              detail::panel_series(report, true));
}

}  // namespace scopemeter
