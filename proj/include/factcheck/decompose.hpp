#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "factcheck/config.hpp"
#include "factcheck/model.hpp"
#include "factcheck/prompts.hpp"
#include "factcheck/textgen.hpp"

namespace factcheck {

// ============================================================================
// Claim decomposition: prompt a text-generation backend with a few worked
// claim -> questions exemplars, sample until enough distinct yes/no questions
// are collected, deduplicate by exact string match.
// ============================================================================

struct DecompositionExemplar {
    std::string claim;
    std::string speaker;
    std::string venue;
    std::string date;
    std::vector<std::string> questions;
};

// Four curated worked examples used by the default few-shot prompt.
inline std::vector<DecompositionExemplar> default_decomposition_exemplars() {
    return {
        {"Our administration cut the state deficit in half while adding jobs.",
         "Pat Morales", "a televised debate", "2013-10-02",
         {"Did the state deficit fall by half during the administration's term?",
          "Did the number of jobs in the state grow during the administration's term?",
          "Was the deficit reduction caused by the administration's own policies?",
          "Does the jobs figure count full-time positions only?",
          "Did the deficit fall in absolute dollars rather than as a share of the budget?"}},
        {"The county spends more on stadium subsidies than on school lunches.",
         "Lee Carter", "a radio interview", "2012-04-19",
         {"Does the county subsidize stadiums?",
          "Does the county fund school lunches?",
          "Is the annual stadium subsidy larger than the annual school lunch budget?",
          "Are the two figures measured over the same fiscal year?",
          "Do the stadium figures include one-time construction costs?"}},
        {"Violent crime has doubled in our city since the new policy took effect.",
         "Sam Idowu", "a town hall", "2014-08-30",
         {"Has violent crime in the city increased since the policy took effect?",
          "Did violent crime double over that period?",
          "Does the comparison use the same crime categories in both periods?",
          "Did the policy take effect before the increase began?",
          "Is the increase larger than in comparable cities without the policy?"}},
        {"Nine out of ten small businesses in the state saw taxes go down last year.",
         "Casey Lindholm", "a press release", "2015-02-11",
         {"Did small-business taxes in the state change last year?",
          "Did taxes go down for ninety percent of small businesses?",
          "Does the figure count all small businesses or only a sample?",
          "Were fees and surcharges included in the tax calculation?",
          "Is the claimed share based on official tax records?"}},
    };
}

inline std::string render_decomposition_exemplars(
    const std::vector<DecompositionExemplar>& exemplars) {
    std::string out;
    for (const auto& ex : exemplars) {
        out += "Claim: " + ex.claim + "\n";
        out += "Speaker: " + ex.speaker + "\n";
        out += "Venue: " + ex.venue + "\n";
        out += "Date: " + ex.date + "\n";
        out += "Questions:\n";
        for (std::size_t i = 0; i < ex.questions.size(); ++i) {
            out += std::to_string(i + 1) + ". " + ex.questions[i] + "\n";
        }
        out += "\n";
    }
    return out;
}

inline std::string build_decomposition_prompt(
    const Claim& claim, const std::vector<DecompositionExemplar>& exemplars,
    const PromptTemplates& templates = PromptTemplates::defaults()) {
    if (exemplars.empty()) throw ConfigError("decomposition prompt needs >= 1 exemplar");
    return render_template(
        templates.decompose,
        {{"exemplars", render_decomposition_exemplars(exemplars)},
         {"claim", claim.text},
         {"speaker", claim.speaker.empty() ? "unknown speaker" : claim.speaker},
         {"venue", claim.venue.empty() ? "unknown venue" : claim.venue},
         {"date", claim.stated_on.to_string()}});
}

// One generated question per line; enumeration prefixes ("1.", "Q3:", "-")
// are stripped and lines that do not end in "?" are dropped.
inline std::vector<std::string> parse_questions(std::string_view raw) {
    std::vector<std::string> questions;
    for (const auto& line : split_lines(raw)) {
        std::string q = trim(line);
        std::size_t i = 0;
        if (i < q.size() && (q[i] == 'Q' || q[i] == 'q')) {
            std::size_t j = i + 1;
            while (j < q.size() && std::isdigit(static_cast<unsigned char>(q[j]))) ++j;
            if (j > i + 1 && j < q.size() && (q[j] == '.' || q[j] == ':' || q[j] == ')')) i = j + 1;
        } else {
            std::size_t j = i;
            while (j < q.size() && std::isdigit(static_cast<unsigned char>(q[j]))) ++j;
            if (j > i && j < q.size() && (q[j] == '.' || q[j] == ':' || q[j] == ')')) i = j + 1;
        }
        while (i < q.size() && (q[i] == ' ' || q[i] == '-' || q[i] == '*')) ++i;
        q = trim(q.substr(i));
        if (q.size() < 2 || q.back() != '?') continue;
        questions.push_back(std::move(q));
    }
    return questions;
}

// First occurrence of each exact string kept, order preserved. Matching is
// exact: case or whitespace variants are distinct questions.
inline std::vector<std::string> dedupe_questions(const std::vector<std::string>& questions) {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& q : questions) {
        if (seen.insert(q).second) out.push_back(q);
    }
    return out;
}

struct Decomposition {
    std::vector<SubQuestion> questions;
    int rounds = 0;
    std::vector<std::string> warnings;
};

// Sample the backend until `question_target` distinct questions are collected
// or the round budget runs out; a short set is returned with a warning rather
// than failing the claim.
inline Decomposition decompose_claim(const Claim& claim, TextGenClient& client,
                                     const PipelineConfig& cfg,
                                     const PromptTemplates& templates = PromptTemplates::defaults()) {
    if (cfg.question_target < 1) throw ConfigError("question_target must be >= 1");
    const std::string prompt =
        build_decomposition_prompt(claim, default_decomposition_exemplars(), templates);

    Decomposition result;
    std::vector<std::string> collected;
    for (int round = 0; round < cfg.max_decomposition_rounds; ++round) {
        std::string raw;
        try {
            raw = client.generate({"decompose", claim.id, prompt, 0.7, 512});
        } catch (const std::exception& e) {
            throw DecompositionBackendError(e.what());
        }
        ++result.rounds;
        auto parsed = parse_questions(raw);
        collected.insert(collected.end(), parsed.begin(), parsed.end());
        collected = dedupe_questions(collected);
        if (static_cast<int>(collected.size()) >= cfg.question_target) break;
    }
    if (collected.empty()) {
        throw EmptyDecomposition("no questions generated for claim " + claim.id);
    }
    if (static_cast<int>(collected.size()) > cfg.question_target) {
        collected.resize(static_cast<std::size_t>(cfg.question_target));
    }
    if (static_cast<int>(collected.size()) < cfg.question_target) {
        result.warnings.push_back(
            "decomposition produced " + std::to_string(collected.size()) + " of " +
            std::to_string(cfg.question_target) + " questions after " +
            std::to_string(result.rounds) + " rounds");
    }
    for (auto& q : collected) {
        result.questions.push_back({std::move(q), SubQuestion::Origin::Generated});
    }
    return result;
}

}  // namespace factcheck
