#pragma once

#include <string>
#include <vector>

#include "factcheck/config.hpp"
#include "factcheck/model.hpp"
#include "factcheck/prompts.hpp"
#include "factcheck/span_retrieval.hpp"
#include "factcheck/textgen.hpp"

namespace factcheck {

// ============================================================================
// Claim-focused summarization: one summary per selected document, never a
// joint summary over all documents. A canonical sentinel sentence marks
// documents with nothing relevant to the claim.
// ============================================================================

inline constexpr std::string_view kIrrelevanceSentinel =
    "The document is not relevant to checking the claim.";

// Normalized-substring sentinel detection: case-insensitive and tolerant of
// surrounding punctuation or whitespace.
inline bool is_irrelevance_sentinel(std::string_view text) {
    return contains(to_lower(text), "not relevant to checking the claim");
}

struct ClaimSummary {
    std::string doc_id;
    std::string text;
    SummaryMode mode = SummaryMode::ZeroShot;
    bool is_irrelevant = false;
    std::string prompt_hash;  // provenance of the exact prompt used
};

inline json summary_to_json(const ClaimSummary& s) {
    json j;
    j["doc_id"] = s.doc_id;
    j["text"] = s.text;
    j["mode"] = std::string(to_string(s.mode));
    j["is_irrelevant"] = s.is_irrelevant;
    j["prompt_hash"] = s.prompt_hash;
    return j;
}

inline ClaimSummary summary_from_json(const json& j) {
    ClaimSummary s;
    s.doc_id = j.at("doc_id").get<std::string>();
    s.text = j.at("text").get<std::string>();
    s.mode = summary_mode_from_string(j.value("mode", "zero_shot"));
    s.is_irrelevant = j.value("is_irrelevant", false);
    s.prompt_hash = j.value("prompt_hash", "");
    return s;
}

struct SummaryExemplar {
    std::string claim;
    std::string document;
    std::string summary;
};

// Four curated document/summary pairs for the few-shot prompt; the last one
// demonstrates the irrelevant-document sentinel.
inline std::vector<SummaryExemplar> default_summary_exemplars() {
    return {
        {"The governor claims the state added 50,000 manufacturing jobs.",
         "state labor department figures released tuesday show manufacturing employment "
         "rose by 48 700 positions over the governor s term the gain was concentrated in "
         "the auto sector which benefited from a federal retooling grant",
         "State labor figures show manufacturing employment rose by about 48,700 over the "
         "governor's term, with most gains in the auto sector aided by a federal grant."},
        {"A senator says the new toll road was built entirely with private money.",
         "the authority financed the toll road through a mix of private activity bonds and "
         "a 120 million dollar state infrastructure loan officials said the loan must be "
         "repaid from toll revenue within 30 years",
         "The toll road was financed with private activity bonds plus a $120 million state "
         "infrastructure loan repayable from toll revenue, so public money was involved."},
        {"The mayor claims city parks spending doubled under her budget.",
         "the adopted budget lists parks and recreation appropriations of 41 million dollars "
         "up from 22 million dollars four years earlier after adjusting for a one time land "
         "purchase the recurring parks budget grew by roughly 60 percent",
         "Parks appropriations rose from $22 million to $41 million over four years, but "
         "excluding a one-time land purchase the recurring budget grew about 60 percent, "
         "short of doubling."},
        {"A candidate says the district's reading scores fell to last in the nation.",
         "the festival drew a record crowd this weekend with food stalls live music and a "
         "parade organizers credited the mild weather and free parking",
         std::string(kIrrelevanceSentinel)},
    };
}

inline std::string render_summary_exemplars(const std::vector<SummaryExemplar>& exemplars) {
    std::string out;
    for (const auto& ex : exemplars) {
        out += "Claim: " + ex.claim + "\n";
        out += "Document: " + ex.document + "\n";
        out += "Summary: " + ex.summary + "\n\n";
    }
    return out;
}

inline std::string truncate_words(std::string_view text, int budget) {
    if (budget < 1) return "";
    int words = 0;
    bool in_word = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const bool space = std::isspace(static_cast<unsigned char>(text[i]));
        if (!space && !in_word) {
            if (++words > budget) return trim(text.substr(0, i));
        }
        in_word = !space;
    }
    return std::string(text);
}

inline std::string build_summary_prompt(const Claim& claim, std::string_view evidence_text,
                                        SummaryMode mode,
                                        const PromptTemplates& templates = PromptTemplates::defaults()) {
    if (evidence_text.empty()) throw EmptyEvidence("no evidence text for claim " + claim.id);
    if (mode == SummaryMode::None) throw ConfigError("summary mode 'none' builds no prompt");
    const std::string& tpl =
        mode == SummaryMode::FewShot ? templates.summarize_few_shot : templates.summarize_zero_shot;
    std::map<std::string, std::string> vars = {{"claim", claim.text},
                                               {"document", std::string(evidence_text)}};
    if (mode == SummaryMode::FewShot) {
        vars["exemplars"] = render_summary_exemplars(default_summary_exemplars());
    }
    return render_template(tpl, vars);
}

inline ClaimSummary summarize_document(const Claim& claim, const std::string& doc_id,
                                       std::string_view evidence_text, TextGenClient& client,
                                       SummaryMode mode,
                                       const PromptTemplates& templates = PromptTemplates::defaults()) {
    if (evidence_text.empty()) throw EmptyEvidence("no evidence text for doc " + doc_id);
    const std::string prompt = build_summary_prompt(claim, evidence_text, mode, templates);
    std::string text;
    try {
        text = client.generate({"summarize", claim.id + "/" + doc_id, prompt, 0.0, 256});
    } catch (const std::exception& e) {
        throw SummarizationBackendError(e.what());
    }
    ClaimSummary s;
    s.doc_id = doc_id;
    s.text = trim(text);
    s.mode = mode;
    s.is_irrelevant = is_irrelevance_sentinel(s.text);
    s.prompt_hash = content_hash(prompt);
    return s;
}

struct SummarizeResult {
    std::vector<ClaimSummary> summaries;  // document rank order
    std::vector<std::string> failures;    // recorded per-document errors
};

struct DocEvidenceText {
    std::string doc_id;
    std::string text;
};

// One summary per selected document, rank order preserved. A failing
// document is recorded and skipped; the batch never aborts.
inline SummarizeResult summarize_evidence(const Claim& claim,
                                          const std::vector<DocEvidenceText>& selected,
                                          TextGenClient& client, SummaryMode mode,
                                          int word_budget,
                                          const PromptTemplates& templates = PromptTemplates::defaults()) {
    SummarizeResult out;
    for (const auto& doc : selected) {
        try {
            const std::string truncated = truncate_words(doc.text, word_budget);
            out.summaries.push_back(
                summarize_document(claim, doc.doc_id, truncated, client, mode, templates));
        } catch (const std::exception& e) {
            out.failures.push_back(doc.doc_id + ": " + e.what());
        }
    }
    return out;
}

}  // namespace factcheck
