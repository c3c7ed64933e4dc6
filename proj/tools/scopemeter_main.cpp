// scopemeter: author-level research indices (h, N_j, H, M), panel analysis,
// and record fetching from a scholarly-works API.
//
// Exit codes: 0 success, 1 data error, 2 usage error, 3 network error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scopemeter/scopemeter.hpp"

namespace {

int exit_code_for(scopemeter::errc code) {
    switch (code) {
        case scopemeter::errc::http_error:
        case scopemeter::errc::timeout:
        case scopemeter::errc::rate_limit_exhausted:
        case scopemeter::errc::decode_error:
            return 3;
        case scopemeter::errc::invalid_config:
            return 2;
        default:
            return 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        scopemeter::raise(scopemeter::errc::io_error, "cannot read '" + path + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        scopemeter::raise(scopemeter::errc::io_error, "cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        scopemeter::raise(scopemeter::errc::io_error, "short write to '" + path + "'");
}

// Parse failures get the offending file's name prepended so the one-line
// diagnostic names both file and line.
template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const scopemeter::Error& e) {
        scopemeter::raise(e.code(), path + ": " + e.what());
    }
}

std::vector<scopemeter::PaperRecord> parse_records(const std::string& path,
                                                   const std::string& format) {
    std::string text = read_file(path);
    return with_path(path, [&] {
        if (format == "bibtex") return scopemeter::parse_bibtex(text);
        if (format == "ris") return scopemeter::parse_ris(text);
        return scopemeter::parse_csv(text);
    });
}

scopemeter::AliasMap load_aliases(const std::string& path) {
    if (path.empty()) return {};
    std::string text = read_file(path);
    return with_path(path, [&] { return scopemeter::load_alias_map(text); });
}

std::map<std::string, std::string> load_groups(const std::string& path) {
    std::string text = read_file(path);
    return with_path(path, [&]() -> std::map<std::string, std::string> {
        scopemeter::CsvReader reader(text);
        auto header = reader.next_row();
        if (!header)
            scopemeter::raise(scopemeter::errc::missing_header, "groups file is empty");
        if (*header != std::vector<std::string>{"author_id", "group"})
            scopemeter::raise(scopemeter::errc::missing_header,
                              "groups header must be 'author_id,group'");
        std::map<std::string, std::string> groups;
        while (auto row = reader.next_row()) {
            if (row->size() != 2)
                scopemeter::raise(scopemeter::errc::malformed_row,
                                  "line " + std::to_string(reader.row_line()) + ": " +
                                      std::to_string(row->size()) + " cells, expected 2");
            groups[(*row)[0]] = (*row)[1];
        }
        return groups;
    });
}

struct ComputeArgs {
    std::string input;
    std::string format = "csv";
    std::string alias;
    std::string author;
};

int cmd_compute(const ComputeArgs& args) {
    auto records = parse_records(args.input, args.format);
    scopemeter::AliasMap aliases = load_aliases(args.alias);

    std::set<std::string> ids;
    for (const auto& rec : records) ids.insert(rec.author_id);
    if (ids.empty())
        scopemeter::raise(scopemeter::errc::empty_profile,
                          args.input + ": input contains no records");

    std::string author = args.author;
    if (author.empty()) {
        if (ids.size() > 1) {
            std::cerr << "scopemeter: " << args.input << " contains " << ids.size()
                      << " authors; pick one with --author. Candidates:";
            for (const auto& id : ids) std::cerr << " " << id;
            std::cerr << "\n";
            return 2;
        }
        author = *ids.begin();
    } else if (!ids.contains(author)) {
        scopemeter::raise(scopemeter::errc::empty_profile,
                          args.input + ": no records for author '" + author + "'");
    }

    std::vector<scopemeter::PaperRecord> own;
    for (auto& rec : records)
        if (rec.author_id == author) own.push_back(std::move(rec));
    scopemeter::AuthorProfile profile = scopemeter::build_profile(own, author);
    scopemeter::IndexTuple tuple = scopemeter::compute_profile_indices(profile, aliases);
    std::cout << scopemeter::compute_to_json(author, profile.n_papers(), tuple);
    return 0;
}

struct PanelArgs {
    std::string input;
    std::string groups;
    std::string output;
    std::string alias;
    std::string scatter;
    std::string svg;
    bool quiet = false;
};

int cmd_panel(const PanelArgs& args) {
    auto records = parse_records(args.input, "csv");
    auto groups = load_groups(args.groups);
    scopemeter::AliasMap aliases = load_aliases(args.alias);

    auto profiles = scopemeter::build_profiles(records);
    scopemeter::PanelReport report = scopemeter::build_panel_report(profiles, groups, aliases);

    bool any_grouped = false;
    for (const auto& row : report.rows) any_grouped |= row.group != "ungrouped";
    if (!any_grouped && !args.quiet)
        std::cerr << "scopemeter: warning: " << args.groups
                  << " matches no author in the input; all rows labeled 'ungrouped'\n";

    write_file(args.output, scopemeter::report_to_json(report, "csv:" + args.input));
    if (!args.scatter.empty()) {
        write_file(args.scatter + "_h_nj.csv", scopemeter::scatter_h_nj_csv(report));
        write_file(args.scatter + "_H_M.csv", scopemeter::scatter_big_h_m_csv(report));
    }
    if (!args.svg.empty()) {
        write_file(args.svg + "_h_nj.svg", scopemeter::panel_svg_h_nj(report));
        write_file(args.svg + "_H_M.svg", scopemeter::panel_svg_big_h_m(report));
    }
    return 0;
}

struct FetchArgs {
    std::string author;
    std::string output;
    std::string base_url = "https://api.openalex.org/works";
    std::string cache;
    std::string contact;
    long ttl = 86400;
    double rps = 5.0;
    double timeout = 30.0;
    bool quiet = false;
};

std::string default_cache_dir() {
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
        return std::string(xdg) + "/scopemeter";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::string(home) + "/.cache/scopemeter";
    return ".scopemeter-cache";
}

int cmd_fetch(const FetchArgs& args) {
    scopemeter::FetchConfig config;
    config.base_url = args.base_url;
    config.author_id = args.author;
    if (!args.contact.empty()) config.polite_contact = args.contact;
    config.cache_dir = args.cache.empty() ? default_cache_dir() : args.cache;
    config.cache_ttl = args.ttl;
    config.max_rps = args.rps;
    config.timeout = args.timeout;

    scopemeter::FetchOutcome outcome = scopemeter::fetch_author_works(config);
    write_file(args.output, scopemeter::write_csv(outcome.records));
    if (!args.quiet) {
        for (const auto& reason : outcome.skip_reasons)
            std::cerr << "scopemeter: skipped a work: " << reason << "\n";
        std::cerr << "fetched=" << outcome.records.size() << " skipped=" << outcome.skipped
                  << "\n";
    }
    return 0;
}

struct CacheClearArgs {
    std::string cache;
    long older_than = 0;
    bool quiet = false;
};

int cmd_cache_clear(const CacheClearArgs& args) {
    std::size_t removed = scopemeter::clear_cache(
        args.cache.empty() ? default_cache_dir() : args.cache, args.older_than);
    if (!args.quiet) std::cout << "removed=" << removed << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Research-scope indices: h, N_j, and the polar pair (H, M)"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress warnings and summary lines");
    app.set_version_flag("--version", std::string("scopemeter ") + scopemeter::version);

    ComputeArgs compute_args;
    CLI::App* compute = app.add_subcommand("compute", "compute one author's indices");
    compute->add_option("--input", compute_args.input, "records file")
        ->required()
        ->check(CLI::ExistingFile);
    compute->add_option("--format", compute_args.format, "input format (default csv)")
        ->check(CLI::IsMember({"csv", "bibtex", "ris"}));
    compute->add_option("--alias", compute_args.alias, "journal alias CSV")
        ->check(CLI::ExistingFile);
    compute->add_option("--author", compute_args.author,
                        "author id (required for multi-author files)");

    PanelArgs panel_args;
    CLI::App* panel = app.add_subcommand("panel", "analyze a panel of authors");
    panel->add_option("--input", panel_args.input, "records CSV")
        ->required()
        ->check(CLI::ExistingFile);
    panel->add_option("--groups", panel_args.groups, "author_id,group CSV")
        ->required()
        ->check(CLI::ExistingFile);
    panel->add_option("--output", panel_args.output, "report JSON path")->required();
    panel->add_option("--alias", panel_args.alias, "journal alias CSV")
        ->check(CLI::ExistingFile);
    panel->add_option("--scatter", panel_args.scatter, "prefix for scatter CSVs");
    panel->add_option("--svg", panel_args.svg, "prefix for SVG plots");

    FetchArgs fetch_args;
    CLI::App* fetch = app.add_subcommand("fetch", "fetch an author's records over HTTP");
    fetch->add_option("--author", fetch_args.author, "provider-scoped author id")->required();
    fetch->add_option("--output", fetch_args.output, "CSV output path")->required();
    fetch->add_option("--base-url", fetch_args.base_url, "works endpoint");
    fetch->add_option("--cache", fetch_args.cache, "cache directory");
    fetch->add_option("--contact", fetch_args.contact,
                      "polite-pool email (default $SCOPEMETER_CONTACT)");
    fetch->add_option("--ttl", fetch_args.ttl, "cache TTL in seconds");
    fetch->add_option("--rps", fetch_args.rps, "max requests per second");
    fetch->add_option("--timeout", fetch_args.timeout, "per-request timeout in seconds");

    CacheClearArgs clear_args;
    CLI::App* cache_clear = app.add_subcommand("cache-clear", "drop cached HTTP responses");
    cache_clear->add_option("--cache", clear_args.cache, "cache directory");
    cache_clear->add_option("--older-than", clear_args.older_than,
                            "only remove entries at least this many seconds old");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    panel_args.quiet = fetch_args.quiet = clear_args.quiet = quiet;

    try {
        if (compute->parsed()) return cmd_compute(compute_args);
        if (panel->parsed()) return cmd_panel(panel_args);
        if (fetch->parsed()) return cmd_fetch(fetch_args);
        if (cache_clear->parsed()) return cmd_cache_clear(clear_args);
    } catch (const scopemeter::Error& e) {
        std::cerr << "scopemeter: " << scopemeter::errc_name(e.code()) << ": " << e.what()
                  << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "scopemeter: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
