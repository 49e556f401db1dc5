#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "factcheck/date.hpp"
#include "factcheck/errors.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

struct SearchHit {
    std::string url;
    std::string title;
    std::optional<Date> published;
};

struct FetchedPage {
    std::string url;
    std::string content_type;
    std::string body;  // raw bytes
    std::string title;
    std::optional<Date> published;
};

// First-stage search plus page fetching. Implementations must be callable
// concurrently. `before`, when set, asks the engine itself to filter out
// results published on or after the date (engines that cannot are free to
// ignore it; the constraint layer re-checks every hit).
class SearchBackend {
public:
    virtual ~SearchBackend() = default;

    virtual std::vector<SearchHit> search(const std::string& query, int count, int offset,
                                          const std::optional<Date>& before) = 0;

    virtual std::optional<FetchedPage> fetch_page(const std::string& url) = 0;

    virtual std::string id() const = 0;
};

struct RetryPolicy {
    int attempts = 3;
    int base_delay_ms = 100;  // doubled per retry
};

// Runs fn up to `attempts` times with exponential backoff; rethrows the last
// failure.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
    int delay = policy.base_delay_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            return fn();
        } catch (const std::exception&) {
            if (attempt >= policy.attempts) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            delay *= 2;
        }
    }
}

// ----------------------------------------------------------------------------
// Offline fixture backend. Corpus layout:
//   <dir>/queries.jsonl   {"query": ..., "results": [{"url","title","published"}]}
//   <dir>/pages/<fnv1a64(url)>.bin         raw page bytes
//   <dir>/pages/<fnv1a64(url)>.json        {"url","content_type","title","published"}
// Identical fixture state always yields identical ranked results.
class FixtureSearchBackend : public SearchBackend {
public:
    explicit FixtureSearchBackend(std::filesystem::path dir) : dir_(std::move(dir)) {
        const auto index = dir_ / "queries.jsonl";
        if (!std::filesystem::exists(index)) {
            throw SearchBackendError("fixture corpus missing " + index.string());
        }
        for (const auto& line : split_lines(read_text_file(index))) {
            if (trim(line).empty()) continue;
            const auto j = nlohmann::json::parse(line);
            std::vector<SearchHit> hits;
            for (const auto& r : j.at("results")) {
                SearchHit h;
                h.url = r.at("url").get<std::string>();
                h.title = r.value("title", "");
                if (r.contains("published") && !r["published"].is_null()) {
                    h.published = parse_date(r["published"].get<std::string>());
                }
                hits.push_back(std::move(h));
            }
            queries_[j.at("query").get<std::string>()] = std::move(hits);
        }
    }

    std::vector<SearchHit> search(const std::string& query, int count, int offset,
                                  const std::optional<Date>& before) override {
        auto it = queries_.find(query);
        if (it == queries_.end()) return {};
        std::vector<SearchHit> out;
        int skipped = 0;
        for (const auto& hit : it->second) {
            // engine-side freshness filter: only dated results can be excluded
            if (before && hit.published && *hit.published >= *before) continue;
            if (skipped < offset) {
                ++skipped;
                continue;
            }
            out.push_back(hit);
            if (static_cast<int>(out.size()) >= count) break;
        }
        return out;
    }

    std::optional<FetchedPage> fetch_page(const std::string& url) override {
        const std::string key = content_hash(url);
        const auto body_path = dir_ / "pages" / (key + ".bin");
        if (!std::filesystem::exists(body_path)) return std::nullopt;
        FetchedPage page;
        page.url = url;
        page.body = read_text_file(body_path);
        const auto meta_path = dir_ / "pages" / (key + ".json");
        if (std::filesystem::exists(meta_path)) {
            const auto meta = nlohmann::json::parse(read_text_file(meta_path));
            page.content_type = meta.value("content_type", "text/html");
            page.title = meta.value("title", "");
            if (meta.contains("published") && !meta["published"].is_null()) {
                page.published = parse_date(meta["published"].get<std::string>());
            }
        } else {
            page.content_type = "text/html";
        }
        return page;
    }

    std::string id() const override { return "fixture"; }

    // All queries the corpus can answer; used by diagnostics.
    std::vector<std::string> known_queries() const {
        std::vector<std::string> out;
        out.reserve(queries_.size());
        for (const auto& [q, _] : queries_) out.push_back(q);
        return out;
    }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::vector<SearchHit>> queries_;
};

// ----------------------------------------------------------------------------
// Live backend speaking a Bing-style JSON search API over HTTP:
//   GET <endpoint>?q=<query>&count=..&offset=..[&before=YYYY-MM-DD]
//   -> {"webPages": {"value": [{"url","name","datePublished"}]}}
// The subscription key, when present, is sent as Ocp-Apim-Subscription-Key.
// Transient failures are retried with exponential backoff.
class HttpSearchBackend : public SearchBackend {
public:
    HttpSearchBackend(std::string host, std::string search_path, std::string api_key,
                      RetryPolicy retry = {})
        : host_(std::move(host)), search_path_(std::move(search_path)),
          api_key_(std::move(api_key)), retry_(retry) {}

    // Reads FACTCHECK_SEARCH_HOST / FACTCHECK_SEARCH_PATH / FACTCHECK_SEARCH_KEY.
    static HttpSearchBackend from_env() {
        const char* host = std::getenv("FACTCHECK_SEARCH_HOST");
        if (!host) {
            throw SearchBackendError(
                "live search requires FACTCHECK_SEARCH_HOST (e.g. http://host:port)");
        }
        const char* path = std::getenv("FACTCHECK_SEARCH_PATH");
        const char* key = std::getenv("FACTCHECK_SEARCH_KEY");
        return HttpSearchBackend(host, path ? path : "/v7.0/search", key ? key : "");
    }

    std::vector<SearchHit> search(const std::string& query, int count, int offset,
                                  const std::optional<Date>& before) override {
        httplib::Params params{{"q", query},
                               {"count", std::to_string(count)},
                               {"offset", std::to_string(offset)}};
        if (before) params.emplace("before", before->to_string());
        const std::string body = with_retries(retry_, [&] {
            httplib::Client client(host_);
            client.set_connection_timeout(10);
            client.set_read_timeout(30);
            auto res = client.Get(search_path_, params, headers());
            if (!res) {
                throw SearchBackendError("search request failed: " +
                                         httplib::to_string(res.error()));
            }
            if (res->status >= 400) {
                throw SearchBackendError("search returned HTTP " + std::to_string(res->status));
            }
            return res->body;
        });
        return parse_results(body);
    }

    std::optional<FetchedPage> fetch_page(const std::string& url) override {
        try {
            return with_retries(retry_, [&]() -> FetchedPage {
                const auto [origin, path] = split_url(url);
                httplib::Client client(origin);
                client.set_connection_timeout(10);
                client.set_read_timeout(30);
                client.set_follow_location(true);
                auto res = client.Get(path);
                if (!res) {
                    throw SearchBackendError("fetch failed: " + httplib::to_string(res.error()));
                }
                if (res->status >= 400) {
                    throw SearchBackendError("fetch returned HTTP " + std::to_string(res->status));
                }
                FetchedPage page;
                page.url = url;
                page.body = res->body;
                page.content_type = res->get_header_value("Content-Type");
                return page;
            });
        } catch (const std::exception&) {
            return std::nullopt;  // unscrapable page, recorded by the caller
        }
    }

    std::string id() const override { return "http:" + host_; }

private:
    httplib::Headers headers() const {
        httplib::Headers h;
        if (!api_key_.empty()) h.emplace("Ocp-Apim-Subscription-Key", api_key_);
        return h;
    }

    static std::pair<std::string, std::string> split_url(const std::string& url) {
        const std::size_t scheme = url.find("://");
        const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
        const std::size_t path_start = url.find('/', host_start);
        if (path_start == std::string::npos) return {url, "/"};
        return {url.substr(0, path_start), url.substr(path_start)};
    }

    static std::vector<SearchHit> parse_results(const std::string& body) {
        std::vector<SearchHit> hits;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw SearchBackendError(std::string("bad search response: ") + e.what());
        }
        if (!j.contains("webPages") || !j["webPages"].contains("value")) return hits;
        for (const auto& r : j["webPages"]["value"]) {
            SearchHit h;
            h.url = r.value("url", "");
            h.title = r.value("name", "");
            if (r.contains("datePublished") && r["datePublished"].is_string()) {
                h.published = try_parse_date(r["datePublished"].get<std::string>());
            }
            if (!h.url.empty()) hits.push_back(std::move(h));
        }
        return hits;
    }

    std::string host_;
    std::string search_path_;
    std::string api_key_;
    RetryPolicy retry_;
};

}  // namespace factcheck
