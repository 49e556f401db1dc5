#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/labels.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

struct MetricsReport {
    double accuracy = 0.0;
    double soft_accuracy = 0.0;  // off-by-one on the six-point scale counts as correct
    double macro_f1 = 0.0;
    double mae = 0.0;            // on label indices
    int n = 0;
};

inline nlohmann::ordered_json metrics_to_json(const MetricsReport& m) {
    nlohmann::ordered_json j;
    j["accuracy"] = m.accuracy;
    j["soft_accuracy"] = m.soft_accuracy;
    j["macro_f1"] = m.macro_f1;
    j["mae"] = m.mae;
    j["n"] = m.n;
    return j;
}

namespace detail {

inline void check_pair(const std::vector<VeracityLabel>& preds,
                       const std::vector<VeracityLabel>& golds) {
    if (preds.size() != golds.size()) {
        throw LengthMismatch("predictions and golds differ in length: " +
                             std::to_string(preds.size()) + " vs " + std::to_string(golds.size()));
    }
    if (preds.empty()) throw EmptyInput("no predictions to evaluate");
}

}  // namespace detail

inline double accuracy(const std::vector<VeracityLabel>& preds,
                       const std::vector<VeracityLabel>& golds) {
    detail::check_pair(preds, golds);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == golds[i];
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

inline double soft_accuracy(const std::vector<VeracityLabel>& preds,
                            const std::vector<VeracityLabel>& golds) {
    detail::check_pair(preds, golds);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        hits += std::abs(label_index(preds[i]) - label_index(golds[i])) <= 1;
    }
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

inline double mae(const std::vector<VeracityLabel>& preds,
                  const std::vector<VeracityLabel>& golds) {
    detail::check_pair(preds, golds);
    long total = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        total += std::abs(label_index(preds[i]) - label_index(golds[i]));
    }
    return static_cast<double>(total) / static_cast<double>(preds.size());
}

// Unweighted mean of per-class F1 over the classes present in golds or preds.
// A class with zero precision+recall contributes an F1 of 0.
inline double macro_f1(const std::vector<VeracityLabel>& preds,
                       const std::vector<VeracityLabel>& golds) {
    detail::check_pair(preds, golds);
    std::array<long, kNumLabels> tp{}, fp{}, fn{};
    std::array<bool, kNumLabels> present{};
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = label_index(preds[i]);
        const int g = label_index(golds[i]);
        present[static_cast<std::size_t>(p)] = present[static_cast<std::size_t>(g)] = true;
        if (p == g) {
            ++tp[static_cast<std::size_t>(p)];
        } else {
            ++fp[static_cast<std::size_t>(p)];
            ++fn[static_cast<std::size_t>(g)];
        }
    }
    double sum = 0.0;
    int classes = 0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        if (!present[c]) continue;
        ++classes;
        const double denom = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
        if (denom > 0.0) sum += 2.0 * static_cast<double>(tp[c]) / denom;
    }
    return classes > 0 ? sum / classes : 0.0;
}

inline MetricsReport compute_metrics(const std::vector<VeracityLabel>& preds,
                                     const std::vector<VeracityLabel>& golds) {
    MetricsReport m;
    m.accuracy = accuracy(preds, golds);
    m.soft_accuracy = soft_accuracy(preds, golds);
    m.macro_f1 = macro_f1(preds, golds);
    m.mae = mae(preds, golds);
    m.n = static_cast<int>(preds.size());
    return m;
}

enum class Metric { Accuracy, SoftAccuracy, MacroF1, Mae };

inline std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::Accuracy: return "accuracy";
        case Metric::SoftAccuracy: return "soft_accuracy";
        case Metric::MacroF1: return "macro_f1";
        case Metric::Mae: return "mae";
    }
    return "?";
}

inline Metric metric_from_name(std::string_view s) {
    if (s == "accuracy" || s == "acc") return Metric::Accuracy;
    if (s == "soft_accuracy" || s == "soft" || s == "soft_acc") return Metric::SoftAccuracy;
    if (s == "macro_f1" || s == "f1") return Metric::MacroF1;
    if (s == "mae") return Metric::Mae;
    throw ConfigError("unknown metric: " + std::string(s));
}

inline double evaluate_metric(Metric m, const std::vector<VeracityLabel>& preds,
                              const std::vector<VeracityLabel>& golds) {
    switch (m) {
        case Metric::Accuracy: return accuracy(preds, golds);
        case Metric::SoftAccuracy: return soft_accuracy(preds, golds);
        case Metric::MacroF1: return macro_f1(preds, golds);
        case Metric::Mae: return mae(preds, golds);
    }
    return 0.0;
}

// Paired bootstrap test of "system A improves on system B". Instance indices
// are resampled with replacement; the one-sided p-value is the fraction of
// resamples where A fails to improve (delta <= 0, with the sign flipped for
// MAE where lower is better). Per-resample seeds are derived from `seed`, so
// the result is independent of evaluation order or parallelism.
inline double paired_bootstrap(const std::vector<VeracityLabel>& preds_a,
                               const std::vector<VeracityLabel>& preds_b,
                               const std::vector<VeracityLabel>& golds, Metric metric,
                               int resamples, std::uint64_t seed) {
    detail::check_pair(preds_a, golds);
    detail::check_pair(preds_b, golds);
    if (resamples < 1) throw ConfigError("bootstrap requires resamples >= 1");

    const std::size_t n = golds.size();
    std::vector<VeracityLabel> sample_a(n), sample_b(n), sample_g(n);
    long worse = 0;
    for (int r = 0; r < resamples; ++r) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = rng.below(n);
            sample_a[i] = preds_a[idx];
            sample_b[i] = preds_b[idx];
            sample_g[i] = golds[idx];
        }
        double delta = evaluate_metric(metric, sample_a, sample_g) -
                       evaluate_metric(metric, sample_b, sample_g);
        if (metric == Metric::Mae) delta = -delta;
        if (delta <= 0.0) ++worse;
    }
    return static_cast<double>(worse) / static_cast<double>(resamples);
}

}  // namespace factcheck
