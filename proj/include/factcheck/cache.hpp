#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "factcheck/date.hpp"
#include "factcheck/model.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

// Content-addressed page store keyed by (url, fetch date). A cache hit never
// triggers a network fetch and entries are immutable once written; writes go
// through a single-writer temp-file-and-rename discipline so readers can run
// concurrently with writers. Layout matches the fixture corpus pages/ tree:
// <key>.bin (raw bytes) + <key>.json (metadata + extraction output).
class DocumentCache {
public:
    DocumentCache() = default;  // disabled cache: every lookup misses

    explicit DocumentCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }

    struct Entry {
        std::string url;
        std::string fetch_date;
        std::string content_type;
        std::string body;           // raw page bytes
        std::string text;           // extraction output, empty when extraction failed
        std::string title;
        std::optional<Date> published;
        bool scrape_failed = false;
    };

    std::optional<Entry> lookup(const std::string& url, const std::string& fetch_date) const {
        if (!enabled()) return std::nullopt;
        const auto meta_path = dir_ / (key(url, fetch_date) + ".json");
        if (!std::filesystem::exists(meta_path)) return std::nullopt;
        const auto meta = nlohmann::json::parse(read_text_file(meta_path));
        Entry e;
        e.url = meta.value("url", url);
        e.fetch_date = fetch_date;
        e.content_type = meta.value("content_type", "");
        e.text = meta.value("text", "");
        e.title = meta.value("title", "");
        if (meta.contains("published") && !meta["published"].is_null()) {
            e.published = parse_date(meta["published"].get<std::string>());
        }
        e.scrape_failed = meta.value("scrape_failed", false);
        const auto body_path = dir_ / (key(url, fetch_date) + ".bin");
        if (std::filesystem::exists(body_path)) e.body = read_text_file(body_path);
        return e;
    }

    void store(const Entry& entry) {
        if (!enabled()) return;
        std::lock_guard lock(write_mutex_);
        const std::string k = key(entry.url, entry.fetch_date);
        const auto meta_path = dir_ / (k + ".json");
        if (std::filesystem::exists(meta_path)) return;  // entries are immutable

        nlohmann::ordered_json meta;
        meta["url"] = entry.url;
        meta["fetch_date"] = entry.fetch_date;
        meta["content_type"] = entry.content_type;
        meta["title"] = entry.title;
        meta["published"] =
            entry.published ? nlohmann::ordered_json(entry.published->to_string())
                            : nlohmann::ordered_json(nullptr);
        meta["scrape_failed"] = entry.scrape_failed;
        meta["text"] = entry.text;

        if (!entry.body.empty()) {
            write_via_temp(dir_ / (k + ".bin"), entry.body);
        }
        write_via_temp(meta_path, meta.dump());
    }

private:
    static std::string key(const std::string& url, const std::string& fetch_date) {
        std::string date_part;
        for (char c : fetch_date) date_part += std::isalnum(static_cast<unsigned char>(c)) ? c : '-';
        return content_hash(url) + "-" + date_part;
    }

    void write_via_temp(const std::filesystem::path& path, std::string_view content) {
        const auto tmp = path.string() + ".tmp";
        write_text_file(tmp, content);
        std::filesystem::rename(tmp, path);
    }

    std::filesystem::path dir_;
    std::mutex write_mutex_;
};

}  // namespace factcheck
