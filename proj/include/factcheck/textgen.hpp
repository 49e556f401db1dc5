#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

// One text-generation call. `purpose` and `key` identify the pipeline stage
// and subject (claim id, claim/doc pair); live backends ignore them, scripted
// backends key their canned responses on them.
struct GenRequest {
    std::string purpose;  // "decompose" | "summarize" | "classify"
    std::string key;
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 256;
};

class TextGenClient {
public:
    virtual ~TextGenClient() = default;

    // Must tolerate concurrent calls.
    virtual std::string generate(const GenRequest& request) = 0;

    virtual std::string id() const = 0;
};

// Deterministic mock backend. Responses are keyed by purpose/key; repeated
// calls with the same key walk through the response list (one entry per
// sampling round) and stick on the last entry.
class ScriptedTextGenClient : public TextGenClient {
public:
    ScriptedTextGenClient() = default;

    void add_response(const std::string& purpose, const std::string& key, std::string response) {
        responses_[purpose + "/" + key].push_back(std::move(response));
    }

    void add_responses(const std::string& purpose, const std::string& key,
                       std::vector<std::string> responses) {
        auto& slot = responses_[purpose + "/" + key];
        for (auto& r : responses) slot.push_back(std::move(r));
    }

    // Loads line-delimited JSON: {"purpose": ..., "key": ..., "responses": [...]}
    void load_file(const std::filesystem::path& path) {
        for (const auto& line : split_lines(read_text_file(path))) {
            if (trim(line).empty()) continue;
            const auto j = nlohmann::json::parse(line);
            add_responses(j.at("purpose").get<std::string>(), j.at("key").get<std::string>(),
                          j.at("responses").get<std::vector<std::string>>());
        }
    }

    std::string generate(const GenRequest& request) override {
        std::lock_guard lock(mutex_);
        const std::string slot_key = request.purpose + "/" + request.key;
        auto it = responses_.find(slot_key);
        if (it == responses_.end() || it->second.empty()) {
            throw Error("no scripted response for " + slot_key);
        }
        auto& cursor = cursors_[slot_key];
        const auto& slot = it->second;
        const std::string& response = slot[std::min(cursor, slot.size() - 1)];
        ++cursor;
        return response;
    }

    std::string id() const override { return "scripted-textgen"; }

private:
    std::map<std::string, std::vector<std::string>> responses_;
    std::map<std::string, std::size_t> cursors_;
    std::mutex mutex_;
};

// Test helper that fails every call; used to exercise backend-error paths.
class FailingTextGenClient : public TextGenClient {
public:
    std::string generate(const GenRequest&) override { throw Error("text generation failed"); }
    std::string id() const override { return "failing-textgen"; }
};

}  // namespace factcheck
