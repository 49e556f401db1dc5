#include <catch2/catch_amalgamated.hpp>

#include <factcheck/annotation.hpp>

using namespace factcheck;
using Catch::Approx;

namespace {
using F = FaithfulnessLabel;
using C = ComprehensivenessVote;
}  // namespace

TEST_CASE("fleiss kappa hand examples", "[evaluate]") {
    SECTION("perfect agreement") {
        CHECK(fleiss_kappa({{3, 0}, {3, 0}, {0, 3}}) == Approx(1.0));
    }
    SECTION("two items, two raters, clean split") {
        CHECK(fleiss_kappa({{2, 0}, {0, 2}}) == Approx(1.0));
    }
    SECTION("total disagreement goes negative") {
        CHECK(fleiss_kappa({{1, 1}, {1, 1}}) == Approx(-1.0));
    }
    SECTION("category permutation invariance") {
        const double a = fleiss_kappa({{2, 1, 0}, {0, 3, 0}, {1, 1, 1}});
        const double b = fleiss_kappa({{0, 1, 2}, {0, 3, 0}, {1, 1, 1}});
        CHECK(a == Approx(b));
    }
    SECTION("error paths") {
        CHECK_THROWS_AS(fleiss_kappa({}), EmptyInput);
        CHECK_THROWS_AS(fleiss_kappa({{2, 0}, {0, 3}}), UnequalRatings);
        CHECK_THROWS_AS(fleiss_kappa({{1, 0}, {0, 1}}), UnequalRatings);
    }
}

TEST_CASE("faithfulness consensus", "[evaluate]") {
    SECTION("strict majority wins") {
        const auto c = aggregate_faithfulness({"c", "d", {F::Faithful, F::Faithful, F::MinorError}});
        CHECK(c.label == F::Faithful);
    }
    SECTION("full disagreement falls back to the average") {
        const auto c =
            aggregate_faithfulness({"c", "d", {F::Faithful, F::MinorError, F::MajorError}});
        CHECK(c.mean_score == Approx(3.0));
        CHECK(c.label == F::MinorError);
    }
    SECTION("average can land on an unvoted label") {
        const auto c = aggregate_faithfulness({"c", "d", {F::Faithful, F::MajorError}});
        CHECK(c.mean_score == Approx(3.0));
        CHECK(c.label == F::MinorError);
    }
    SECTION("equidistant average rounds severe") {
        const auto c = aggregate_faithfulness({"c", "d", {F::MinorError, F::MajorError}});
        CHECK(c.mean_score == Approx(2.5));
        CHECK(c.label == F::MajorError);
    }
    SECTION("vote order does not matter") {
        const auto a = aggregate_faithfulness({"c", "d", {F::Faithful, F::MajorError, F::Faithful}});
        const auto b = aggregate_faithfulness({"c", "d", {F::MajorError, F::Faithful, F::Faithful}});
        CHECK(a.label == b.label);
        CHECK(a.mean_score == Approx(b.mean_score));
    }
    SECTION("no votes") {
        CHECK_THROWS_AS(aggregate_faithfulness({"c", "d", {}}), EmptyInput);
    }
}

TEST_CASE("question vote consensus is majority with severe ties", "[evaluate]") {
    CHECK(aggregate_question_votes({"c", "q", {C::Answerable, C::Answerable, C::Unanswerable}}) ==
          C::Answerable);
    CHECK(aggregate_question_votes({"c", "q", {C::Answerable, C::Unanswerable}}) ==
          C::Unanswerable);
    CHECK(aggregate_question_votes({"c", "q", {C::PartiallyAnswerable, C::Answerable}}) ==
          C::PartiallyAnswerable);
}

TEST_CASE("claim-level comprehensiveness", "[evaluate]") {
    CHECK(aggregate_comprehensiveness({C::Answerable, C::Answerable}) ==
          ClaimComprehensiveness::Answerable);
    CHECK(aggregate_comprehensiveness({C::Answerable, C::PartiallyAnswerable}) ==
          ClaimComprehensiveness::PartiallyAnswerable);
    CHECK(aggregate_comprehensiveness({C::Unanswerable, C::Unanswerable}) ==
          ClaimComprehensiveness::Unanswerable);
    CHECK(aggregate_comprehensiveness({C::Answerable, C::Unanswerable}) ==
          ClaimComprehensiveness::PartiallyUnanswerable);
    CHECK(aggregate_comprehensiveness({C::PartiallyAnswerable, C::Unanswerable}) ==
          ClaimComprehensiveness::PartiallyUnanswerable);
    CHECK_THROWS_AS(aggregate_comprehensiveness({}), EmptyInput);
}

TEST_CASE("claim-level faithfulness aggregates worst label", "[evaluate]") {
    CHECK(claim_level_faithfulness({F::Faithful, F::Faithful, F::Faithful, F::Faithful}) ==
          ClaimFaithfulness::Faithful);
    CHECK(claim_level_faithfulness({F::Faithful, F::MinorError, F::Faithful}) ==
          ClaimFaithfulness::Minor);
    CHECK(claim_level_faithfulness({F::Faithful, F::Faithful, F::MajorError}) ==
          ClaimFaithfulness::Unfaithful);
    CHECK(claim_level_faithfulness({F::MinorError, F::CompletelyWrong}) ==
          ClaimFaithfulness::Unfaithful);
}

TEST_CASE("annotation files parse", "[evaluate]") {
    const std::string faith =
        R"({"claim_id":"c1","doc_id":"u1","votes":["faithful","faithful","minor"]})"
        "\n"
        R"({"claim_id":"c1","doc_id":"u2","votes":["major","completely-wrong"]})"
        "\n";
    const auto anns = parse_faithfulness_file(faith);
    REQUIRE(anns.size() == 2);
    CHECK(aggregate_faithfulness(anns[0]).label == F::Faithful);

    const std::string comp =
        R"({"claim_id":"c1","question_id":"q1","votes":["answerable","answerable"],"answer":"yes"})"
        "\n";
    const auto comps = parse_comprehensiveness_file(comp);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].answer == true);
    CHECK(aggregate_question_votes(comps[0]) == C::Answerable);
}
