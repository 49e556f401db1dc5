#include <catch2/catch_amalgamated.hpp>

#include <map>

#include <factcheck/metrics.hpp>
#include <factcheck/util.hpp>

using namespace factcheck;
using Catch::Approx;

namespace {

using Labels = std::vector<VeracityLabel>;

Labels idx(std::initializer_list<int> values) {
    Labels out;
    for (int v : values) out.push_back(label_from_index(v));
    return out;
}

Labels random_labels(SplitMix64& rng, std::size_t n) {
    Labels out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(label_from_index(static_cast<int>(rng.below(6))));
    return out;
}

// Definitional re-implementations, deliberately written from scratch.
double brute_macro_f1(const Labels& preds, const Labels& golds) {
    std::map<int, int> support;
    for (auto g : golds) support[label_index(g)]++;
    for (auto p : preds) support[label_index(p)];  // classes present in preds count too
    double total = 0.0;
    int classes = 0;
    for (const auto& [cls, _] : support) {
        int tp = 0, pred_count = 0, gold_count = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            const bool p = label_index(preds[i]) == cls;
            const bool g = label_index(golds[i]) == cls;
            tp += p && g;
            pred_count += p;
            gold_count += g;
        }
        const double precision = pred_count ? static_cast<double>(tp) / pred_count : 0.0;
        const double recall = gold_count ? static_cast<double>(tp) / gold_count : 0.0;
        const double f1 =
            precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        total += f1;
        ++classes;
    }
    return classes ? total / classes : 0.0;
}

}  // namespace

TEST_CASE("metrics identity and basics", "[evaluate]") {
    const Labels golds = idx({0, 1, 2, 3, 4, 5});
    CHECK(accuracy(golds, golds) == 1.0);
    CHECK(soft_accuracy(golds, golds) == 1.0);
    CHECK(mae(golds, golds) == 0.0);
    CHECK(macro_f1(golds, golds) == 1.0);
}

TEST_CASE("half-true for mostly-true is soft-correct", "[evaluate]") {
    const Labels preds = {VeracityLabel::HalfTrue};
    const Labels golds = {VeracityLabel::MostlyTrue};
    CHECK(accuracy(preds, golds) == 0.0);
    CHECK(soft_accuracy(preds, golds) == 1.0);
    CHECK(mae(preds, golds) == 1.0);
}

TEST_CASE("two-item hand example", "[evaluate]") {
    const Labels preds = idx({0, 2});
    const Labels golds = idx({1, 2});
    CHECK(accuracy(preds, golds) == Approx(0.5));
    CHECK(soft_accuracy(preds, golds) == Approx(1.0));
    CHECK(mae(preds, golds) == Approx(0.5));
}

TEST_CASE("macro f1 hand example", "[evaluate]") {
    const Labels preds = {VeracityLabel::False, VeracityLabel::False, VeracityLabel::True};
    const Labels golds = {VeracityLabel::False, VeracityLabel::True, VeracityLabel::True};
    CHECK(macro_f1(preds, golds) == Approx(2.0 / 3.0));
}

TEST_CASE("single-class predictions dilute macro f1", "[evaluate]") {
    const Labels golds = idx({0, 1, 2, 3, 4, 5});
    const Labels preds(6, VeracityLabel::True);
    CHECK(macro_f1(preds, golds) < 1.0);
}

TEST_CASE("metric error paths", "[evaluate]") {
    CHECK_THROWS_AS(accuracy({}, {}), EmptyInput);
    CHECK_THROWS_AS(accuracy(idx({0}), idx({0, 1})), LengthMismatch);
    CHECK_THROWS_AS(paired_bootstrap(idx({0}), idx({0}), idx({0, 1}), Metric::Accuracy, 10, 1),
                    LengthMismatch);
}

TEST_CASE("metrics match a brute-force oracle on random vectors", "[evaluate]") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(40);
        const Labels preds = random_labels(rng, n);
        const Labels golds = random_labels(rng, n);

        int exact = 0, soft = 0, abs_err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int d = std::abs(label_index(preds[i]) - label_index(golds[i]));
            exact += d == 0;
            soft += d <= 1;
            abs_err += d;
        }
        CHECK(accuracy(preds, golds) == Approx(static_cast<double>(exact) / n).margin(1e-12));
        CHECK(soft_accuracy(preds, golds) == Approx(static_cast<double>(soft) / n).margin(1e-12));
        CHECK(mae(preds, golds) == Approx(static_cast<double>(abs_err) / n).margin(1e-12));
        CHECK(macro_f1(preds, golds) == Approx(brute_macro_f1(preds, golds)).margin(1e-12));

        // soft accuracy dominates accuracy; mae 0 iff acc 1
        CHECK(soft_accuracy(preds, golds) >= accuracy(preds, golds));
        CHECK((mae(preds, golds) == 0.0) == (accuracy(preds, golds) == 1.0));
    }
}

TEST_CASE("bootstrap identical systems give p = 1", "[evaluate]") {
    SplitMix64 rng(5);
    const Labels golds = random_labels(rng, 30);
    const Labels preds = random_labels(rng, 30);
    for (auto metric : {Metric::Accuracy, Metric::SoftAccuracy, Metric::MacroF1, Metric::Mae}) {
        CHECK(paired_bootstrap(preds, preds, golds, metric, 200, 42) == 1.0);
    }
}

TEST_CASE("bootstrap dominating system gives p ~ 0", "[evaluate]") {
    Labels golds, wrong;
    for (int i = 0; i < 50; ++i) {
        golds.push_back(label_from_index(i % 6));
        wrong.push_back(label_from_index((i + 3) % 6));
    }
    CHECK(paired_bootstrap(golds, wrong, golds, Metric::Accuracy, 2000, 7) < 0.001);
    CHECK(paired_bootstrap(golds, wrong, golds, Metric::Mae, 2000, 7) < 0.001);
}

TEST_CASE("bootstrap is deterministic in the seed", "[evaluate]") {
    SplitMix64 rng(11);
    const Labels golds = random_labels(rng, 60);
    const Labels a = random_labels(rng, 60);
    const Labels b = random_labels(rng, 60);
    const double p1 = paired_bootstrap(a, b, golds, Metric::Accuracy, 500, 99);
    const double p2 = paired_bootstrap(a, b, golds, Metric::Accuracy, 500, 99);
    const double p3 = paired_bootstrap(a, b, golds, Metric::Accuracy, 500, 100);
    CHECK(p1 == p2);
    CHECK(p1 >= 0.0);
    CHECK(p1 <= 1.0);
    (void)p3;  // different seed may or may not move p; only determinism is asserted
}
