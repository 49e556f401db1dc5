#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/date.hpp"
#include "factcheck/errors.hpp"
#include "factcheck/labels.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

using json = nlohmann::ordered_json;

struct SubQuestion {
    enum class Origin { Generated, Gold };

    std::string text;  // a yes/no question
    Origin origin = Origin::Generated;

    bool operator==(const SubQuestion&) const = default;
};

// One record of the claim dataset: the statement plus its fact-check metadata.
struct Claim {
    std::string id;
    std::string text;
    std::string speaker;
    std::string venue;
    Date stated_on;
    std::optional<VeracityLabel> gold_label;
    std::optional<std::string> justification;  // label-bearing sentence already removed
    std::optional<std::vector<std::string>> gold_subquestions;

    bool operator==(const Claim&) const = default;
};

enum class FetchStatus { Ok, ScrapeFailed, Filtered };

inline std::string_view fetch_status_name(FetchStatus s) {
    switch (s) {
        case FetchStatus::Ok: return "ok";
        case FetchStatus::ScrapeFailed: return "scrape-failed";
        case FetchStatus::Filtered: return "filtered";
    }
    return "unknown";
}

inline FetchStatus fetch_status_from_name(std::string_view s) {
    if (s == "ok") return FetchStatus::Ok;
    if (s == "scrape-failed") return FetchStatus::ScrapeFailed;
    if (s == "filtered") return FetchStatus::Filtered;
    throw IngestError("unknown fetch status: " + std::string(s));
}

// Provenance sentinel for documents retrieved by querying the claim itself
// instead of a generated subquestion.
inline constexpr std::string_view kClaimAsQuery = "claim-as-query";

struct RetrievedDocument {
    std::string url;
    std::string title;
    std::optional<Date> published;
    std::optional<std::string> raw_html;
    std::optional<std::string> text;   // extraction output, present iff status == Ok
    std::string source_query;          // subquestion text or kClaimAsQuery
    FetchStatus fetch_status = FetchStatus::ScrapeFailed;
    bool undated = false;              // kept despite missing publication date
};

// --- claim dataset ingestion (line-delimited JSON) ---

inline Claim claim_from_json(const json& j) {
    Claim c;
    c.id = j.at("id").get<std::string>();
    c.text = j.at("claim").get<std::string>();
    if (c.text.empty()) throw IngestError("claim text empty for id " + c.id);
    c.speaker = j.value("speaker", "");
    c.venue = j.value("venue", "");
    c.stated_on = parse_date(j.at("stated_on").get<std::string>());
    if (j.contains("label") && !j["label"].is_null()) {
        c.gold_label = label_from_name(j["label"].get<std::string>());
    }
    if (j.contains("justification") && !j["justification"].is_null()) {
        c.justification = j["justification"].get<std::string>();
    }
    if (j.contains("subquestions") && !j["subquestions"].is_null()) {
        c.gold_subquestions = j["subquestions"].get<std::vector<std::string>>();
    }
    return c;
}

inline json claim_to_json(const Claim& c) {
    json j;
    j["id"] = c.id;
    j["claim"] = c.text;
    j["speaker"] = c.speaker;
    j["venue"] = c.venue;
    j["stated_on"] = c.stated_on.to_string();
    if (c.gold_label) j["label"] = std::string(label_name(*c.gold_label));
    if (c.justification) j["justification"] = *c.justification;
    if (c.gold_subquestions) j["subquestions"] = *c.gold_subquestions;
    return j;
}

struct ClaimFile {
    std::vector<Claim> claims;
    std::vector<std::string> warnings;  // one per skipped malformed record
};

inline ClaimFile parse_claims(std::string_view text) {
    ClaimFile out;
    int line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            out.claims.push_back(claim_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            out.warnings.push_back("line " + std::to_string(line_no) + " skipped: " + e.what());
        }
    }
    return out;
}

inline ClaimFile load_claims(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw IngestError(e.what());
    }
    return parse_claims(text);
}

inline json document_to_json(const RetrievedDocument& d) {
    json j;
    j["url"] = d.url;
    j["title"] = d.title;
    j["published"] = d.published ? json(d.published->to_string()) : json(nullptr);
    j["source_query"] = d.source_query;
    j["fetch_status"] = std::string(fetch_status_name(d.fetch_status));
    j["undated"] = d.undated;
    if (d.text) j["text"] = *d.text;
    return j;
}

inline RetrievedDocument document_from_json(const json& j) {
    RetrievedDocument d;
    d.url = j.at("url").get<std::string>();
    d.title = j.value("title", "");
    if (j.contains("published") && !j["published"].is_null()) {
        d.published = parse_date(j["published"].get<std::string>());
    }
    d.source_query = j.value("source_query", "");
    d.fetch_status = fetch_status_from_name(j.value("fetch_status", "ok"));
    d.undated = j.value("undated", false);
    if (j.contains("text") && !j["text"].is_null()) d.text = j["text"].get<std::string>();
    return d;
}

}  // namespace factcheck
