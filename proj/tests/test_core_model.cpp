#include <catch2/catch_amalgamated.hpp>

#include <factcheck/config.hpp>
#include <factcheck/date.hpp>
#include <factcheck/labels.hpp>
#include <factcheck/model.hpp>

using namespace factcheck;

TEST_CASE("label scale anchors", "[core_model]") {
    CHECK(label_index(VeracityLabel::PantsOnFire) == 0);
    CHECK(label_index(VeracityLabel::True) == 5);
    CHECK(label_index(VeracityLabel::HalfTrue) == 3);
    CHECK(label_from_index(0) == VeracityLabel::PantsOnFire);
    CHECK(label_from_index(5) == VeracityLabel::True);
    CHECK_THROWS_AS(label_from_index(6), InvalidLabelIndex);
    CHECK_THROWS_AS(label_from_index(-1), InvalidLabelIndex);
}

TEST_CASE("label index round trip and names", "[core_model]") {
    for (auto l : all_labels()) {
        CHECK(label_from_index(label_index(l)) == l);
        CHECK(label_from_name(std::string(label_name(l))) == l);
    }
    CHECK_THROWS_AS(label_from_name("mostly-false"), InvalidLabelName);
    // ordering by index equals ordering by truthfulness
    CHECK(label_index(VeracityLabel::False) < label_index(VeracityLabel::BarelyTrue));
}

TEST_CASE("date parsing", "[core_model]") {
    const Date d = parse_date("2016-02-29");
    CHECK(d == Date{2016, 2, 29});
    CHECK(d.to_string() == "2016-02-29");
    CHECK_THROWS_AS(parse_date("2015-02-29"), InvalidDate);
    CHECK_THROWS_AS(parse_date("not-a-date"), InvalidDate);
    CHECK(try_parse_date("2014-03-01T08:00:00").has_value());
    CHECK(Date{2014, 1, 1} < Date{2014, 1, 2});
    CHECK(Date{2014, 1, 1}.prev_day() == Date{2013, 12, 31});
    CHECK(Date{2016, 3, 1}.prev_day() == Date{2016, 2, 29});
}

TEST_CASE("claim records round trip through JSON", "[core_model]") {
    const std::string line = R"({"id":"c1","claim":"Says the budget doubled.",)"
                             R"("speaker":"Jane Smith","venue":"a rally",)"
                             R"("stated_on":"2014-06-15","label":"barely-true",)"
                             R"("justification":"The budget grew 40 percent.",)"
                             R"("subquestions":["Did the budget double?"],"extra":42})";
    const Claim c = claim_from_json(json::parse(line));
    CHECK(c.id == "c1");
    CHECK(c.gold_label == VeracityLabel::BarelyTrue);
    CHECK(c.stated_on == Date{2014, 6, 15});
    REQUIRE(c.gold_subquestions.has_value());
    CHECK(c.gold_subquestions->size() == 1);

    // field-for-field equivalence after a serialize/parse cycle
    const Claim again = claim_from_json(claim_to_json(c));
    CHECK(again == c);
}

TEST_CASE("optional claim fields stay absent", "[core_model]") {
    const Claim c = claim_from_json(
        json::parse(R"({"id":"c2","claim":"x","stated_on":"2012-01-02"})"));
    CHECK_FALSE(c.gold_label.has_value());
    CHECK_FALSE(c.justification.has_value());
    CHECK_FALSE(c.gold_subquestions.has_value());
    CHECK(claim_from_json(claim_to_json(c)) == c);
}

TEST_CASE("malformed claim records are skipped with warnings", "[core_model]") {
    const std::string file = R"({"id":"a","claim":"ok","stated_on":"2013-05-01"})"
                             "\nnot json\n"
                             R"({"id":"b","claim":"","stated_on":"2013-05-01"})"
                             "\n"
                             R"({"id":"c","claim":"ok2","stated_on":"2013-05-02"})"
                             "\n";
    const ClaimFile parsed = parse_claims(file);
    CHECK(parsed.claims.size() == 2);
    CHECK(parsed.warnings.size() == 2);
    CHECK(parsed.claims[0].id == "a");
    CHECK(parsed.claims[1].id == "c");
}

TEST_CASE("config validation", "[core_model]") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.stride == cfg.chunk_size / 2);

    PipelineConfig bad = cfg;
    bad.bm25_b = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.top_docs = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.stride = bad.chunk_size + 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config json round trip and stride default", "[core_model]") {
    nlohmann::ordered_json j;
    j["chunk_size"] = 40;
    const PipelineConfig c = config_from_json(j);
    CHECK(c.chunk_size == 40);
    CHECK(c.stride == 20);  // follows chunk_size when unset

    PipelineConfig base;
    base.summary_mode = SummaryMode::FewShot;
    base.temporal_constraint = false;
    const PipelineConfig round = config_from_json(config_to_json(base));
    CHECK(round.summary_mode == SummaryMode::FewShot);
    CHECK_FALSE(round.temporal_constraint);
    CHECK(round.chunk_size == base.chunk_size);
}
