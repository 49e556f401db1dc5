#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/model.hpp"

namespace factcheck {

// ============================================================================
// Human-study aggregation: summary faithfulness, subquestion
// comprehensiveness, and inter-annotator agreement.
// ============================================================================

// Numeric score of each faithfulness judgment is the enumerator value.
enum class FaithfulnessLabel {
    CompletelyWrong = 1,
    MajorError = 2,
    MinorError = 3,
    Faithful = 4,
};

inline int faithfulness_score(FaithfulnessLabel l) { return static_cast<int>(l); }

inline std::string_view faithfulness_name(FaithfulnessLabel l) {
    switch (l) {
        case FaithfulnessLabel::CompletelyWrong: return "completely-wrong";
        case FaithfulnessLabel::MajorError: return "major";
        case FaithfulnessLabel::MinorError: return "minor";
        case FaithfulnessLabel::Faithful: return "faithful";
    }
    return "?";
}

inline FaithfulnessLabel faithfulness_from_name(std::string_view s) {
    if (s == "completely-wrong") return FaithfulnessLabel::CompletelyWrong;
    if (s == "major") return FaithfulnessLabel::MajorError;
    if (s == "minor") return FaithfulnessLabel::MinorError;
    if (s == "faithful") return FaithfulnessLabel::Faithful;
    throw IngestError("unknown faithfulness label: " + std::string(s));
}

struct FaithfulnessAnnotation {
    std::string claim_id;
    std::string doc_id;
    std::vector<FaithfulnessLabel> votes;
};

enum class ComprehensivenessVote { Unanswerable = 0, PartiallyAnswerable = 1, Answerable = 2 };

inline std::string_view comprehensiveness_vote_name(ComprehensivenessVote v) {
    switch (v) {
        case ComprehensivenessVote::Unanswerable: return "unanswerable";
        case ComprehensivenessVote::PartiallyAnswerable: return "partially-answerable";
        case ComprehensivenessVote::Answerable: return "answerable";
    }
    return "?";
}

inline ComprehensivenessVote comprehensiveness_vote_from_name(std::string_view s) {
    if (s == "unanswerable") return ComprehensivenessVote::Unanswerable;
    if (s == "partially-answerable") return ComprehensivenessVote::PartiallyAnswerable;
    if (s == "answerable") return ComprehensivenessVote::Answerable;
    throw IngestError("unknown comprehensiveness label: " + std::string(s));
}

struct ComprehensivenessAnnotation {
    std::string claim_id;
    std::string question_id;
    std::vector<ComprehensivenessVote> votes;
    std::optional<bool> answer;  // yes/no, set when consensus is answerable
};

// --- Fleiss kappa ------------------------------------------------------------

// `counts` is an item x category matrix of vote counts; every item must carry
// the same number of ratings n >= 2.
inline double fleiss_kappa(const std::vector<std::vector<int>>& counts) {
    if (counts.empty() || counts.front().empty()) throw EmptyInput("empty rating matrix");
    const std::size_t categories = counts.front().size();
    long raters = -1;
    for (const auto& row : counts) {
        if (row.size() != categories) throw UnequalRatings("ragged rating matrix");
        long total = 0;
        for (int c : row) total += c;
        if (raters < 0) raters = total;
        if (total != raters) throw UnequalRatings("items carry different rating counts");
    }
    if (raters < 2) throw UnequalRatings("fleiss kappa needs >= 2 ratings per item");

    const double items = static_cast<double>(counts.size());
    const double n = static_cast<double>(raters);
    std::vector<double> category_mass(categories, 0.0);
    double mean_agreement = 0.0;
    for (const auto& row : counts) {
        double agree = 0.0;
        for (std::size_t c = 0; c < categories; ++c) {
            agree += static_cast<double>(row[c]) * (row[c] - 1);
            category_mass[c] += row[c];
        }
        mean_agreement += agree / (n * (n - 1.0));
    }
    mean_agreement /= items;

    double chance = 0.0;
    for (double mass : category_mass) {
        const double p = mass / (items * n);
        chance += p * p;
    }
    if (chance >= 1.0) return 1.0;  // all votes in one category => perfect agreement
    return (mean_agreement - chance) / (1.0 - chance);
}

// --- consensus rules ---------------------------------------------------------

struct FaithfulnessConsensus {
    FaithfulnessLabel label;
    double mean_score;
};

// Majority vote; if no label holds a strict majority, fall back to the label
// nearest the average score. An equidistant average rounds to the lower
// (more severe) label.
inline FaithfulnessConsensus aggregate_faithfulness(const FaithfulnessAnnotation& ann) {
    if (ann.votes.empty()) throw EmptyInput("no faithfulness votes");
    std::map<FaithfulnessLabel, int> tally;
    double total = 0.0;
    for (auto v : ann.votes) {
        ++tally[v];
        total += faithfulness_score(v);
    }
    const double mean = total / static_cast<double>(ann.votes.size());
    for (const auto& [label, count] : tally) {
        if (2 * count > static_cast<int>(ann.votes.size())) return {label, mean};
    }
    FaithfulnessLabel best = FaithfulnessLabel::CompletelyWrong;
    double best_dist = 1e9;
    for (auto l : {FaithfulnessLabel::CompletelyWrong, FaithfulnessLabel::MajorError,
                   FaithfulnessLabel::MinorError, FaithfulnessLabel::Faithful}) {
        const double dist = std::abs(mean - faithfulness_score(l));
        if (dist < best_dist) {  // iteration order ascending => ties keep the lower label
            best_dist = dist;
            best = l;
        }
    }
    return {best, mean};
}

// Question-level consensus: majority vote; ties resolve toward the less
// answerable (more severe) category.
inline ComprehensivenessVote aggregate_question_votes(const ComprehensivenessAnnotation& ann) {
    if (ann.votes.empty()) throw EmptyInput("no comprehensiveness votes");
    std::array<int, 3> tally{};
    for (auto v : ann.votes) ++tally[static_cast<std::size_t>(v)];
    std::size_t best = 0;
    for (std::size_t c = 1; c < tally.size(); ++c) {
        if (tally[c] > tally[best]) best = c;
    }
    return static_cast<ComprehensivenessVote>(best);
}

enum class ClaimComprehensiveness {
    Unanswerable,
    PartiallyUnanswerable,
    PartiallyAnswerable,
    Answerable,
};

inline std::string_view claim_comprehensiveness_name(ClaimComprehensiveness c) {
    switch (c) {
        case ClaimComprehensiveness::Unanswerable: return "unanswerable";
        case ClaimComprehensiveness::PartiallyUnanswerable: return "partially-unanswerable";
        case ClaimComprehensiveness::PartiallyAnswerable: return "partially-answerable";
        case ClaimComprehensiveness::Answerable: return "answerable";
    }
    return "?";
}

// Four-way claim label from its per-question labels.
inline ClaimComprehensiveness aggregate_comprehensiveness(
    const std::vector<ComprehensivenessVote>& question_labels) {
    if (question_labels.empty()) throw EmptyInput("no question labels");
    std::size_t answerable = 0, unanswerable = 0;
    for (auto v : question_labels) {
        if (v == ComprehensivenessVote::Answerable) ++answerable;
        if (v == ComprehensivenessVote::Unanswerable) ++unanswerable;
    }
    const std::size_t n = question_labels.size();
    if (answerable == n) return ClaimComprehensiveness::Answerable;
    if (unanswerable == n) return ClaimComprehensiveness::Unanswerable;
    if (unanswerable == 0) return ClaimComprehensiveness::PartiallyAnswerable;
    return ClaimComprehensiveness::PartiallyUnanswerable;
}

enum class ClaimFaithfulness { Faithful, Minor, Unfaithful };

inline std::string_view claim_faithfulness_name(ClaimFaithfulness f) {
    switch (f) {
        case ClaimFaithfulness::Faithful: return "faithful";
        case ClaimFaithfulness::Minor: return "minor";
        case ClaimFaithfulness::Unfaithful: return "unfaithful";
    }
    return "?";
}

// Worst-label aggregation over a claim's summaries; major errors and
// completely-wrong summaries both count as unfaithful.
inline ClaimFaithfulness claim_level_faithfulness(const std::vector<FaithfulnessLabel>& labels) {
    if (labels.empty()) throw EmptyInput("no summary labels");
    bool minor = false;
    for (auto l : labels) {
        if (l == FaithfulnessLabel::MajorError || l == FaithfulnessLabel::CompletelyWrong) {
            return ClaimFaithfulness::Unfaithful;
        }
        if (l == FaithfulnessLabel::MinorError) minor = true;
    }
    return minor ? ClaimFaithfulness::Minor : ClaimFaithfulness::Faithful;
}

// --- annotation files (line-delimited JSON) ----------------------------------

inline std::vector<FaithfulnessAnnotation> parse_faithfulness_file(std::string_view text) {
    std::vector<FaithfulnessAnnotation> out;
    for (const auto& line : split_lines(text)) {
        if (trim(line).empty()) continue;
        const auto j = json::parse(line);
        FaithfulnessAnnotation ann;
        ann.claim_id = j.at("claim_id").get<std::string>();
        ann.doc_id = j.at("doc_id").get<std::string>();
        for (const auto& v : j.at("votes")) {
            ann.votes.push_back(faithfulness_from_name(v.get<std::string>()));
        }
        out.push_back(std::move(ann));
    }
    return out;
}

inline std::vector<ComprehensivenessAnnotation> parse_comprehensiveness_file(
    std::string_view text) {
    std::vector<ComprehensivenessAnnotation> out;
    for (const auto& line : split_lines(text)) {
        if (trim(line).empty()) continue;
        const auto j = json::parse(line);
        ComprehensivenessAnnotation ann;
        ann.claim_id = j.at("claim_id").get<std::string>();
        ann.question_id = j.at("question_id").get<std::string>();
        for (const auto& v : j.at("votes")) {
            ann.votes.push_back(comprehensiveness_vote_from_name(v.get<std::string>()));
        }
        if (j.contains("answer") && !j["answer"].is_null()) {
            ann.answer = j["answer"].get<std::string>() == "yes";
        }
        out.push_back(std::move(ann));
    }
    return out;
}

}  // namespace factcheck
