#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/labels.hpp"
#include "factcheck/model.hpp"
#include "factcheck/textgen.hpp"

namespace factcheck {

// ============================================================================
// Veracity classification. The reference implementation maps an LLM-produced
// 0-100 truthfulness score onto the six labels through the cumulative label
// distribution of a training set; a majority-class baseline and a
// file-of-predictions adapter cover the remaining experiment rows.
// ============================================================================

// Cutpoints on the 0-100 score axis. cut[i] is the cumulative proportion of
// training labels strictly below label i (in percent); cut[0] = 0 and
// cut[6] = 100. Label i owns the half-open interval [cut[i], cut[i+1]), with
// 100 belonging to the highest label whose interval is non-degenerate.
struct LabelThresholds {
    std::array<double, kNumLabels + 1> cut{};

    static LabelThresholds from_training(const std::vector<VeracityLabel>& labels) {
        if (labels.empty()) throw EmptyTrainingSet("no training labels");
        std::array<double, kNumLabels> counts{};
        for (auto l : labels) counts[static_cast<std::size_t>(label_index(l))] += 1.0;
        LabelThresholds t;
        t.cut[0] = 0.0;
        double cum = 0.0;
        for (int i = 0; i < kNumLabels; ++i) {
            cum += counts[static_cast<std::size_t>(i)];
            t.cut[static_cast<std::size_t>(i) + 1] =
                100.0 * cum / static_cast<double>(labels.size());
        }
        t.cut[kNumLabels] = 100.0;
        return t;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["cutpoints"] = std::vector<double>(cut.begin() + 1, cut.end() - 1);
        return j;
    }

    static LabelThresholds from_json(const nlohmann::ordered_json& j) {
        const auto inner = j.at("cutpoints").get<std::vector<double>>();
        if (inner.size() != kNumLabels - 1) throw ConfigError("expected 5 cutpoints");
        LabelThresholds t;
        t.cut[0] = 0.0;
        for (std::size_t i = 0; i < inner.size(); ++i) t.cut[i + 1] = inner[i];
        t.cut[kNumLabels] = 100.0;
        return t;
    }
};

inline VeracityLabel score_to_label(double score, const LabelThresholds& t) {
    if (std::isnan(score) || score < 0.0 || score > 100.0) {
        throw InvalidScore("score outside [0, 100]: " + std::to_string(score));
    }
    if (score == 100.0) {
        for (int i = kNumLabels - 1; i >= 0; --i) {
            if (t.cut[static_cast<std::size_t>(i)] < 100.0) return label_from_index(i);
        }
        return VeracityLabel::True;  // all mass at 100: degenerate training set
    }
    for (int i = kNumLabels - 1; i >= 0; --i) {
        if (t.cut[static_cast<std::size_t>(i)] <= score &&
            score < t.cut[static_cast<std::size_t>(i) + 1]) {
            return label_from_index(i);
        }
    }
    return VeracityLabel::PantsOnFire;  // unreachable: cut[0]=0, cut[6]=100
}

// --- classifier input ---------------------------------------------------------

enum class InputMode { ClaimOnly, ClaimPlusJustification, ClaimPlusSummaries };

inline std::string_view to_string(InputMode m) {
    switch (m) {
        case InputMode::ClaimOnly: return "claim_only";
        case InputMode::ClaimPlusJustification: return "claim_plus_justification";
        case InputMode::ClaimPlusSummaries: return "claim_plus_summaries";
    }
    return "?";
}

struct ClassifierInput {
    std::string claim_id;
    InputMode mode = InputMode::ClaimOnly;
    std::string rendered;                // full text fed to the classifier
    std::vector<std::string> evidence;   // summaries or raw spans, rank order
};

// Deterministic rendering of claim metadata plus the mode's evidence. For the
// summaries mode, `evidence` holds the summary texts in document rank order
// (or raw span texts under the no-summary ablation).
inline ClassifierInput build_classifier_input(const Claim& claim,
                                              const std::vector<std::string>& evidence,
                                              InputMode mode) {
    ClassifierInput input;
    input.claim_id = claim.id;
    input.mode = mode;
    std::string text;
    text += "Speaker: " + (claim.speaker.empty() ? "unknown speaker" : claim.speaker) + "\n";
    text += "Venue: " + (claim.venue.empty() ? "unknown venue" : claim.venue) + "\n";
    text += "Date: " + claim.stated_on.to_string() + "\n";
    text += "Claim: " + claim.text + "\n";
    switch (mode) {
        case InputMode::ClaimOnly:
            if (!evidence.empty()) {
                throw InputModeMismatch("claim_only input must not carry evidence");
            }
            break;
        case InputMode::ClaimPlusJustification:
            if (!claim.justification || claim.justification->empty()) {
                throw InputModeMismatch("claim " + claim.id + " has no justification");
            }
            input.evidence.push_back(*claim.justification);
            text += "Justification: " + *claim.justification + "\n";
            break;
        case InputMode::ClaimPlusSummaries:
            if (evidence.empty()) {
                throw InputModeMismatch("claim_plus_summaries input needs evidence texts");
            }
            input.evidence = evidence;
            for (std::size_t i = 0; i < evidence.size(); ++i) {
                text += "Evidence " + std::to_string(i + 1) + ": " + evidence[i] + "\n";
            }
            break;
    }
    input.rendered = std::move(text);
    return input;
}

struct Classification {
    VeracityLabel label;
    std::optional<double> score;
    std::optional<std::string> rationale;
};

class VeracityClassifier {
public:
    virtual ~VeracityClassifier() = default;
    virtual Classification classify(const ClassifierInput& input) = 0;
    virtual std::string id() const = 0;
};

// Last integer or decimal in [0, 100] appearing in the model output.
inline std::optional<double> parse_truthfulness_score(std::string_view text) {
    std::optional<double> found;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.') {
                std::size_t k = j + 1;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k > j + 1) j = k;
            }
            const double value = std::stod(std::string(text.substr(i, j - i)));
            if (value >= 0.0 && value <= 100.0) found = value;
            i = j;
        } else {
            ++i;
        }
    }
    return found;
}

inline constexpr std::string_view kScorePromptTemplate =
    "You are checking a political claim against the evidence below. Explain your "
    "reasoning step by step, then give a truthfulness score from 0 to 100, where 0 "
    "means the claim is false and 100 means the claim is true. End your answer with "
    "a line of the form \"Score: <number>\".\n\n{input}\n";

// Appendix-style reference classifier: prompt for a reasoning trace plus a
// truthfulness score, then discretize the score through the training-label
// percentile cutpoints. One retry with a bare-number instruction before
// giving up on unparsable output.
class LlmScoreClassifier : public VeracityClassifier {
public:
    LlmScoreClassifier(TextGenClient& client, LabelThresholds thresholds)
        : client_(client), thresholds_(thresholds) {}

    Classification classify(const ClassifierInput& input) override {
        std::string prompt = kScorePromptTemplate.data();
        const std::string marker = "{input}";
        prompt.replace(prompt.find(marker), marker.size(), input.rendered);

        std::string raw;
        std::optional<double> score;
        for (int attempt = 0; attempt < 2; ++attempt) {
            GenRequest req{"classify", input.claim_id, prompt, 0.0, 512};
            if (attempt == 1) {
                req.prompt += "\nRespond with only a number between 0 and 100.\n";
            }
            try {
                raw = client_.generate(req);
            } catch (const std::exception& e) {
                throw ClassifierBackendError(e.what());
            }
            score = parse_truthfulness_score(raw);
            if (score) break;
        }
        if (!score) {
            throw ScoreParseError("no score in classifier output for claim " + input.claim_id);
        }
        return {score_to_label(*score, thresholds_), score, raw};
    }

    std::string id() const override { return "llm-score"; }

    const LabelThresholds& thresholds() const { return thresholds_; }

private:
    TextGenClient& client_;
    LabelThresholds thresholds_;
};

class MajorityClassClassifier : public VeracityClassifier {
public:
    explicit MajorityClassClassifier(const std::vector<VeracityLabel>& training_labels) {
        if (training_labels.empty()) throw EmptyTrainingSet("no training labels");
        std::array<int, kNumLabels> counts{};
        for (auto l : training_labels) ++counts[static_cast<std::size_t>(label_index(l))];
        int best = 0;
        for (int i = 1; i < kNumLabels; ++i) {
            if (counts[static_cast<std::size_t>(i)] > counts[static_cast<std::size_t>(best)]) {
                best = i;
            }
        }
        modal_ = label_from_index(best);
    }

    Classification classify(const ClassifierInput&) override { return {modal_, {}, {}}; }

    std::string id() const override { return "majority"; }

private:
    VeracityLabel modal_;
};

// Adapter for externally produced predictions (e.g. a separately trained
// encoder): line-delimited JSON records {"id": ..., "label": ...}.
class FilePredictionsClassifier : public VeracityClassifier {
public:
    explicit FilePredictionsClassifier(const std::filesystem::path& path) {
        for (const auto& line : split_lines(read_text_file(path))) {
            if (trim(line).empty()) continue;
            const auto j = nlohmann::json::parse(line);
            predictions_[j.at("id").get<std::string>()] =
                label_from_name(j.at("label").get<std::string>());
        }
    }

    Classification classify(const ClassifierInput& input) override {
        auto it = predictions_.find(input.claim_id);
        if (it == predictions_.end()) {
            throw ClassifierBackendError("no prediction on file for claim " + input.claim_id);
        }
        return {it->second, {}, {}};
    }

    std::string id() const override { return "file"; }

private:
    std::map<std::string, VeracityLabel> predictions_;
};

}  // namespace factcheck
