#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "scopemeter/core.hpp"
#include "scopemeter/error.hpp"

namespace scopemeter {

struct FetchConfig {
    std::string base_url;
    std::string author_id;
    std::optional<std::string> polite_contact;  // falls back to $SCOPEMETER_CONTACT
    std::string cache_dir;
    long cache_ttl = 86400;  // seconds
    double max_rps = 5.0;
    double timeout = 30.0;  // seconds
};

struct FetchOutcome {
    std::vector<PaperRecord> records;
    std::size_t skipped = 0;
    std::vector<std::string> skip_reasons;
    std::size_t requests_made = 0;  // network requests actually sent (cache misses)
    std::size_t pages = 0;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0x0F];
    }
    return out;
}

namespace detail {

inline std::string url_encode(std::string_view value) {
    static const char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : value) {
        bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' || c == '~';
        if (unreserved) {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0x0F];
        }
    }
    return out;
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // leading '/', no query
};

inline SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos ||
        (url.substr(0, scheme_end) != "http" && url.substr(0, scheme_end) != "https"))
        raise(errc::invalid_config, "base_url '" + url + "' must start with http:// or https://");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

// Paces requests so the observed rate never exceeds max_rps: consecutive
// sends are at least 1/max_rps apart.
class RateLimiter {
public:
    explicit RateLimiter(double max_rps)
        : interval_(std::chrono::duration<double>(1.0 / max_rps)) {}

    void acquire() {
        auto now = std::chrono::steady_clock::now();
        if (armed_ && now < last_ + interval_) {
            std::this_thread::sleep_for(last_ + interval_ - now);
            now = std::chrono::steady_clock::now();
        }
        last_ = now;
        armed_ = true;
    }

private:
    std::chrono::duration<double> interval_;
    std::chrono::steady_clock::time_point last_{};
    bool armed_ = false;
};

// On-disk response cache: `<dir>/<sha256(url)>.json` holds the raw body and
// `<same>.meta` the fetch timestamp. Writes go to a temp file first and are
// renamed into place, so concurrent readers never see partial bodies.
class ResponseCache {
public:
    ResponseCache(std::string dir, long ttl_seconds) : dir_(std::move(dir)), ttl_(ttl_seconds) {}

    std::optional<std::string> load(const std::string& url) const {
        namespace fs = std::filesystem;
        fs::path body = body_path(url);
        fs::path meta = meta_path(url);
        std::error_code ec;
        if (!fs::exists(body, ec) || !fs::exists(meta, ec)) return std::nullopt;
        try {
            nlohmann::json m = nlohmann::json::parse(read_file(meta));
            long fetched_at = m.at("fetched_at").get<long>();
            long now = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
            if (now - fetched_at > ttl_) return std::nullopt;
            return read_file(body);
        } catch (...) {
            return std::nullopt;  // corrupt entry: treat as a miss, refetch overwrites
        }
    }

    void store(const std::string& url, const std::string& body) const {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        long now = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
        nlohmann::json meta = {{"url", url}, {"fetched_at", now}};
        atomic_write(body_path(url), body);
        atomic_write(meta_path(url), meta.dump() + "\n");
    }

private:
    std::filesystem::path body_path(const std::string& url) const {
        return std::filesystem::path(dir_) / (sha256_hex(url) + ".json");
    }
    std::filesystem::path meta_path(const std::string& url) const {
        return std::filesystem::path(dir_) / (sha256_hex(url) + ".meta");
    }

    static std::string read_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) raise(errc::io_error, "cannot read " + path.string());
        std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return data;
    }

    static void atomic_write(const std::filesystem::path& path, const std::string& data) {
        static std::atomic<unsigned> counter{0};
        std::filesystem::path tmp =
            path.string() + ".tmp" + std::to_string(counter.fetch_add(1));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) raise(errc::io_error, "cannot write " + tmp.string());
            out.write(data.data(), static_cast<std::streamsize>(data.size()));
            if (!out) raise(errc::io_error, "short write to " + tmp.string());
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec) raise(errc::io_error, "cannot rename " + tmp.string() + ": " + ec.message());
    }

    std::string dir_;
    long ttl_;
};

// Translates one provider work item into a PaperRecord, or explains why it
// cannot (the only place that knows the provider's field names). Items
// without any venue identity are skipped rather than fabricated.
inline std::optional<PaperRecord> map_work(const nlohmann::json& work,
                                           const std::string& author_id, std::string& why_not) {
    auto venue_of = [](const nlohmann::json& w) -> const nlohmann::json* {
        if (w.contains("primary_location") && w["primary_location"].is_object() &&
            w["primary_location"].contains("source") && w["primary_location"]["source"].is_object())
            return &w["primary_location"]["source"];
        if (w.contains("host_venue") && w["host_venue"].is_object()) return &w["host_venue"];
        return nullptr;
    };
    auto str_or_empty = [](const nlohmann::json& obj, const char* key) -> std::string {
        if (obj.contains(key) && obj[key].is_string()) return obj[key].get<std::string>();
        return "";
    };

    PaperRecord raw;
    raw.author_id = author_id;
    raw.title = str_or_empty(work, "title");
    if (raw.title.empty()) raw.title = str_or_empty(work, "display_name");

    const nlohmann::json* venue = venue_of(work);
    std::string issn = venue ? str_or_empty(*venue, "issn_l") : "";
    raw.journal_name = venue ? str_or_empty(*venue, "display_name") : "";
    if (raw.journal_name.empty() && issn.empty()) {
        why_not = "missing venue";
        return std::nullopt;
    }
    if (!issn.empty()) raw.issn = issn;

    std::string doi = str_or_empty(work, "doi");
    if (auto at = doi.find("doi.org/"); at != std::string::npos) doi = doi.substr(at + 8);
    if (!doi.empty()) raw.doi = doi;

    if (work.contains("publication_year") && work["publication_year"].is_number_integer())
        raw.year = work["publication_year"].get<int>();
    if (work.contains("cited_by_count") && work["cited_by_count"].is_number_integer())
        raw.citations = work["cited_by_count"].get<int>();

    try {
        return validate_record(std::move(raw));
    } catch (const Error& e) {
        why_not = e.what();
        return std::nullopt;
    }
}

}  // namespace detail

// Pages through the provider's works listing for one author (cursor
// pagination) and maps each work item to a PaperRecord. Responses are cached
// on disk keyed by full request URL; entries within the TTL are served
// without touching the network. At most 5 attempts per URL with exponential
// backoff (base 1 s, factor 2, full jitter); only 429 and 5xx responses are
// retried.
inline FetchOutcome fetch_author_works(const FetchConfig& config) {
    if (!(config.max_rps > 0.0))
        raise(errc::invalid_config, "max_rps must be > 0");
    if (config.cache_ttl < 0)
        raise(errc::invalid_config, "cache_ttl must be >= 0");
    if (!(config.timeout > 0.0))
        raise(errc::invalid_config, "timeout must be > 0");

    std::optional<std::string> contact = config.polite_contact;
    if (!contact) {
        if (const char* env = std::getenv("SCOPEMETER_CONTACT"); env && *env) contact = env;
    }

    detail::SplitUrl url = detail::split_url(config.base_url);
    detail::ResponseCache cache(config.cache_dir, config.cache_ttl);
    detail::RateLimiter limiter(config.max_rps);
    std::mt19937 jitter_rng(std::random_device{}());

    httplib::Client client(url.origin);
    auto timeout_ms =
        std::chrono::milliseconds(static_cast<long long>(config.timeout * 1000.0));
    client.set_connection_timeout(timeout_ms);
    client.set_read_timeout(timeout_ms);
    client.set_write_timeout(timeout_ms);
    client.set_follow_location(true);

    auto get_body = [&](const std::string& full_url, const std::string& path_query,
                        FetchOutcome& outcome) -> std::string {
        if (auto cached = cache.load(full_url)) return *cached;
        for (int attempt = 1;; ++attempt) {
            limiter.acquire();
            ++outcome.requests_made;
            httplib::Result res = client.Get(path_query);
            if (!res) {
                if (res.error() == httplib::Error::ConnectionTimeout ||
                    res.error() == httplib::Error::Read || res.error() == httplib::Error::Write)
                    raise(errc::timeout, full_url);
                raise(errc::http_error,
                      full_url + ": " + httplib::to_string(res.error()));
            }
            if (res->status / 100 == 2) {
                cache.store(full_url, res->body);
                return res->body;
            }
            bool retryable = res->status == 429 || res->status >= 500;
            if (!retryable)
                raise(errc::http_error,
                      "HTTP " + std::to_string(res->status) + " from " + full_url);
            if (attempt >= 5)
                raise(errc::rate_limit_exhausted, "5 attempts spent on " + full_url +
                                                      ", last status HTTP " +
                                                      std::to_string(res->status));
            double cap = std::ldexp(1.0, attempt - 1);  // 1, 2, 4, 8 seconds
            std::uniform_real_distribution<double> dist(0.0, cap);
            std::this_thread::sleep_for(std::chrono::duration<double>(dist(jitter_rng)));
        }
    };

    FetchOutcome outcome;
    std::string cursor = "*";
    while (true) {
        std::string query = "filter=author.id:" + detail::url_encode(config.author_id) +
                            "&per-page=200&cursor=" + detail::url_encode(cursor);
        if (contact) query += "&mailto=" + detail::url_encode(*contact);
        std::string path_query = url.path + "?" + query;
        std::string full_url = url.origin + path_query;

        std::string body = get_body(full_url, path_query, outcome);
        nlohmann::json page;
        try {
            page = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            raise(errc::decode_error, full_url + ": " + e.what());
        }
        if (!page.contains("results") || !page["results"].is_array())
            raise(errc::decode_error, full_url + ": no results array");
        ++outcome.pages;

        const auto& results = page["results"];
        if (results.empty()) break;
        for (const auto& work : results) {
            std::string why_not;
            if (auto record = detail::map_work(work, config.author_id, why_not)) {
                outcome.records.push_back(std::move(*record));
            } else {
                ++outcome.skipped;
                outcome.skip_reasons.push_back(why_not);
            }
        }

        std::string next;
        if (page.contains("meta") && page["meta"].is_object() &&
            page["meta"].contains("next_cursor") && page["meta"]["next_cursor"].is_string())
            next = page["meta"]["next_cursor"].get<std::string>();
        if (next.empty()) break;
        cursor = next;
    }
    return outcome;
}

// Removes cache entries older than the threshold; the `.meta` sidecar goes
// with its body. Returns the number of entries (bodies) removed.
inline std::size_t clear_cache(const std::string& cache_dir, long older_than_seconds) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(cache_dir, ec))
        raise(errc::io_error, "cache dir '" + cache_dir + "' does not exist");

    auto now = fs::file_time_type::clock::now();
    std::size_t removed = 0;
    std::vector<fs::path> victims;
    for (const auto& entry : fs::directory_iterator(cache_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        auto age = std::chrono::duration_cast<std::chrono::seconds>(
                       now - fs::last_write_time(entry.path(), ec))
                       .count();
        if (ec || age < older_than_seconds) continue;
        victims.push_back(entry.path());
    }
    for (const auto& body : victims) {
        fs::path meta = body;
        meta.replace_extension(".meta");
        if (!fs::remove(body, ec) || ec)
            raise(errc::io_error, "cannot remove " + body.string());
        fs::remove(meta, ec);
        ++removed;
    }
    return removed;
}

}  // namespace scopemeter
