#include <catch2/catch_amalgamated.hpp>

#include <factcheck/util.hpp>
#include <factcheck/veracity.hpp>

using namespace factcheck;
using Catch::Approx;

namespace {

std::vector<VeracityLabel> uniform_training() {
    std::vector<VeracityLabel> labels;
    for (auto l : all_labels()) labels.push_back(l);
    return labels;
}

Claim sample_claim() {
    Claim c;
    c.id = "c1";
    c.text = "Says the budget doubled.";
    c.speaker = "Jane Smith";
    c.venue = "a rally";
    c.stated_on = {2014, 6, 15};
    c.justification = "The budget grew by 40 percent, not 100.";
    return c;
}

}  // namespace

TEST_CASE("thresholds from a uniform distribution", "[veracity]") {
    const auto t = LabelThresholds::from_training(uniform_training());
    CHECK(t.cut[1] == Approx(100.0 / 6));
    CHECK(t.cut[2] == Approx(200.0 / 6));
    CHECK(t.cut[3] == Approx(50.0));
    CHECK(t.cut[4] == Approx(400.0 / 6));
    CHECK(t.cut[5] == Approx(500.0 / 6));
}

TEST_CASE("thresholds from a skewed distribution", "[veracity]") {
    // counts worst -> best: 100,100,100,100,100,300
    std::vector<VeracityLabel> labels;
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 100; ++k) labels.push_back(label_from_index(i));
    }
    for (int k = 0; k < 300; ++k) labels.push_back(VeracityLabel::True);
    const auto t = LabelThresholds::from_training(labels);
    CHECK(t.cut[1] == Approx(12.5));
    CHECK(t.cut[2] == Approx(25.0));
    CHECK(t.cut[3] == Approx(37.5));
    CHECK(t.cut[4] == Approx(50.0));
    CHECK(t.cut[5] == Approx(62.5));
}

TEST_CASE("degenerate training mass", "[veracity]") {
    const auto t = LabelThresholds::from_training({VeracityLabel::True, VeracityLabel::True});
    for (int i = 1; i <= 5; ++i) CHECK(t.cut[static_cast<std::size_t>(i)] == 0.0);
    CHECK(score_to_label(50.0, t) == VeracityLabel::True);
    CHECK(score_to_label(0.0, t) == VeracityLabel::True);
    CHECK_THROWS_AS(LabelThresholds::from_training({}), EmptyTrainingSet);
}

TEST_CASE("score to label anchors and interval lookup", "[veracity]") {
    const auto t = LabelThresholds::from_training(uniform_training());
    CHECK(score_to_label(0.0, t) == VeracityLabel::PantsOnFire);
    CHECK(score_to_label(100.0, t) == VeracityLabel::True);
    CHECK(score_to_label(50.0, t) == VeracityLabel::HalfTrue);  // [50, 66.7)
    CHECK(score_to_label(85.0, t) == VeracityLabel::True);      // [83.3, 100]
    CHECK_THROWS_AS(score_to_label(-1.0, t), InvalidScore);
    CHECK_THROWS_AS(score_to_label(101.0, t), InvalidScore);
}

TEST_CASE("score to label is monotone and total", "[veracity]") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<VeracityLabel> labels;
        const std::size_t n = 1 + rng.below(200);
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back(label_from_index(static_cast<int>(rng.below(6))));
        }
        const auto t = LabelThresholds::from_training(labels);
        int prev = 0;
        for (int s = 0; s <= 100; ++s) {
            const int idx = label_index(score_to_label(static_cast<double>(s), t));
            CHECK(idx >= prev);
            prev = idx;
        }
    }
}

TEST_CASE("rank midpoints reproduce the training distribution", "[veracity]") {
    SplitMix64 rng(17);
    std::vector<VeracityLabel> labels;
    const std::size_t n = 500;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(label_from_index(static_cast<int>(rng.below(6))));
    }
    std::sort(labels.begin(), labels.end(),
              [](auto a, auto b) { return label_index(a) < label_index(b); });
    const auto t = LabelThresholds::from_training(labels);
    std::array<int, kNumLabels> want{}, got{};
    for (std::size_t j = 0; j < n; ++j) {
        ++want[static_cast<std::size_t>(label_index(labels[j]))];
        const double midpoint = 100.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        ++got[static_cast<std::size_t>(label_index(score_to_label(midpoint, t)))];
    }
    for (std::size_t c = 0; c < kNumLabels; ++c) CHECK(want[c] == got[c]);
}

TEST_CASE("threshold dump and load round trip", "[veracity]") {
    const auto t = LabelThresholds::from_training(uniform_training());
    const auto loaded = LabelThresholds::from_json(t.to_json());
    for (std::size_t i = 0; i <= kNumLabels; ++i) CHECK(loaded.cut[i] == Approx(t.cut[i]));
}

TEST_CASE("classifier input rendering", "[veracity]") {
    const Claim c = sample_claim();
    SECTION("claim only carries metadata but no evidence") {
        const auto input = build_classifier_input(c, {}, InputMode::ClaimOnly);
        CHECK(contains(input.rendered, "Jane Smith"));
        CHECK(contains(input.rendered, "a rally"));
        CHECK(contains(input.rendered, c.text));
        CHECK_FALSE(contains(input.rendered, "Evidence"));
    }
    SECTION("summaries appear in rank order") {
        const auto input = build_classifier_input(c, {"first", "second", "third", "fourth"},
                                                  InputMode::ClaimPlusSummaries);
        CHECK(input.evidence.size() == 4);
        CHECK(input.rendered.find("first") < input.rendered.find("second"));
        CHECK(input.rendered.find("third") < input.rendered.find("fourth"));
    }
    SECTION("justification mode requires a justification") {
        Claim bare = c;
        bare.justification.reset();
        CHECK_THROWS_AS(build_classifier_input(bare, {}, InputMode::ClaimPlusJustification),
                        InputModeMismatch);
        const auto ok = build_classifier_input(c, {}, InputMode::ClaimPlusJustification);
        CHECK(contains(ok.rendered, *c.justification));
    }
    SECTION("summaries mode requires evidence") {
        CHECK_THROWS_AS(build_classifier_input(c, {}, InputMode::ClaimPlusSummaries),
                        InputModeMismatch);
    }
    SECTION("missing speaker renders a placeholder") {
        Claim anon = c;
        anon.speaker.clear();
        const auto input = build_classifier_input(anon, {}, InputMode::ClaimOnly);
        CHECK(contains(input.rendered, "unknown speaker"));
    }
}

TEST_CASE("score parsing takes the last in-range number", "[veracity]") {
    CHECK(parse_truthfulness_score("Score: 85") == 85.0);
    CHECK(parse_truthfulness_score("I rate 40 then revise to 62.5") == 62.5);
    CHECK(parse_truthfulness_score("the 1990s saw 200 percent... final: 30") == 30.0);
    CHECK_FALSE(parse_truthfulness_score("no digits at all").has_value());
    CHECK_FALSE(parse_truthfulness_score("year 2014 only").has_value());
}

TEST_CASE("llm-score classifier", "[veracity]") {
    const Claim c = sample_claim();
    const auto thresholds = LabelThresholds::from_training(uniform_training());

    SECTION("score 85 maps to true under uniform thresholds") {
        ScriptedTextGenClient client;
        client.add_response("classify", "c1", "The evidence is strong. Score: 85");
        LlmScoreClassifier clf(client, thresholds);
        const auto input = build_classifier_input(c, {}, InputMode::ClaimOnly);
        const auto result = clf.classify(input);
        CHECK(result.label == VeracityLabel::True);
        CHECK(result.score == 85.0);
    }
    SECTION("unparsable output retries once then fails") {
        ScriptedTextGenClient client;
        client.add_response("classify", "c1", "no numbers here");
        LlmScoreClassifier clf(client, thresholds);
        const auto input = build_classifier_input(c, {}, InputMode::ClaimOnly);
        CHECK_THROWS_AS(clf.classify(input), ScoreParseError);
    }
    SECTION("retry can rescue a parsable second answer") {
        ScriptedTextGenClient client;
        client.add_responses("classify", "c1", {"hmm", "55"});
        LlmScoreClassifier clf(client, thresholds);
        const auto input = build_classifier_input(c, {}, InputMode::ClaimOnly);
        CHECK(clf.classify(input).label == VeracityLabel::HalfTrue);
    }
    SECTION("backend failure surfaces as ClassifierBackendError") {
        FailingTextGenClient client;
        LlmScoreClassifier clf(client, thresholds);
        const auto input = build_classifier_input(c, {}, InputMode::ClaimOnly);
        CHECK_THROWS_AS(clf.classify(input), ClassifierBackendError);
    }
}

TEST_CASE("majority baseline always answers the modal label", "[veracity]") {
    std::vector<VeracityLabel> training = {VeracityLabel::False, VeracityLabel::False,
                                           VeracityLabel::True};
    MajorityClassClassifier clf(training);
    const auto input = build_classifier_input(sample_claim(), {}, InputMode::ClaimOnly);
    CHECK(clf.classify(input).label == VeracityLabel::False);
    CHECK(clf.classify(input).label == VeracityLabel::False);
    CHECK_THROWS_AS(MajorityClassClassifier({}), EmptyTrainingSet);
}

TEST_CASE("file predictions adapter", "[veracity]") {
    const auto dir = std::filesystem::temp_directory_path() / "factcheck_test_preds";
    std::filesystem::create_directories(dir);
    const auto path = dir / "preds.jsonl";
    write_text_file(path, R"({"id":"c1","label":"half-true"})"
                          "\n");
    FilePredictionsClassifier clf(path);
    const auto input = build_classifier_input(sample_claim(), {}, InputMode::ClaimOnly);
    CHECK(clf.classify(input).label == VeracityLabel::HalfTrue);

    ClassifierInput missing = input;
    missing.claim_id = "unknown";
    CHECK_THROWS_AS(clf.classify(missing), ClassifierBackendError);
    std::filesystem::remove_all(dir);
}
