#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <factcheck/span_retrieval.hpp>
#include <factcheck/util.hpp>

using namespace factcheck;
using Catch::Approx;

namespace {

std::vector<std::string> n_tokens(int n, const std::string& prefix = "w") {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Literal-formula reference scorer, kept independent of the library path.
double reference_bm25(const std::vector<std::string>& query, const Chunk& chunk,
                      const std::vector<Chunk>& corpus, double k, double b) {
    const double n = static_cast<double>(corpus.size());
    double avgdl = 0.0;
    for (const auto& c : corpus) avgdl += static_cast<double>(c.tokens.size());
    avgdl /= n;
    double score = 0.0;
    for (const auto& term : query) {
        double tf = 0.0;
        for (const auto& t : chunk.tokens) tf += t == term;
        if (tf == 0.0) continue;
        double df = 0.0;
        for (const auto& c : corpus) {
            for (const auto& t : c.tokens) {
                if (t == term) {
                    df += 1.0;
                    break;
                }
            }
        }
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        const double denom =
            tf + k * (1.0 - b + b * static_cast<double>(chunk.tokens.size()) / avgdl);
        score += idf * tf * (k + 1.0) / denom;
    }
    return score;
}

}  // namespace

TEST_CASE("tokenize normalizes case and punctuation", "[span_retrieval]") {
    CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("COVID-19 cases") == std::vector<std::string>{"covid", "19", "cases"});
    CHECK(tokenize("  a\tb\nc ") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("chunk_words window starts and final chunk", "[span_retrieval]") {
    SECTION("75 tokens, window 30, stride 15") {
        const auto chunks = chunk_words("d", n_tokens(75), 30, 15);
        REQUIRE(chunks.size() == 4);
        CHECK(chunks[0].start_word == 0);
        CHECK(chunks[1].start_word == 15);
        CHECK(chunks[2].start_word == 30);
        CHECK(chunks[3].start_word == 45);
        CHECK(chunks[3].end_word == 75);
    }
    SECTION("exact fit yields a single chunk") {
        const auto chunks = chunk_words("d", n_tokens(30), 30, 15);
        REQUIRE(chunks.size() == 1);
        CHECK(chunks[0].start_word == 0);
        CHECK(chunks[0].end_word == 30);
    }
    SECTION("text shorter than window") {
        const auto chunks = chunk_words("d", n_tokens(10), 30, 15);
        REQUIRE(chunks.size() == 1);
        CHECK(chunks[0].end_word == 10);
    }
    SECTION("trailing words get a shorter final chunk") {
        const auto chunks = chunk_words("d", n_tokens(80), 30, 15);
        REQUIRE(chunks.size() == 5);
        CHECK(chunks[4].start_word == 60);
        CHECK(chunks[4].end_word == 80);
    }
    SECTION("empty text yields no chunks") {
        CHECK(chunk_words("d", {}, 30, 15).empty());
    }
}

TEST_CASE("chunk coverage property", "[span_retrieval]") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int len = 1 + static_cast<int>(rng.below(400));
        const int window = 1 + static_cast<int>(rng.below(60));
        const int stride = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(window)));
        const auto chunks = chunk_words("d", n_tokens(len), window, stride);
        std::vector<bool> covered(static_cast<std::size_t>(len), false);
        int prev_start = -stride;
        for (const auto& c : chunks) {
            CHECK(c.start_word == prev_start + stride);
            CHECK(c.length() <= window);
            prev_start = c.start_word;
            for (int i = c.start_word; i < c.end_word; ++i) covered[static_cast<std::size_t>(i)] = true;
        }
        CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
    }
}

TEST_CASE("bm25 idf and zero-overlap behaviour", "[span_retrieval]") {
    // 3 chunks, one containing the query term once
    std::vector<Chunk> chunks = {
        {"a", 0, 3, {"tax", "rose", "fast"}},
        {"b", 0, 3, {"rain", "fell", "hard"}},
        {"c", 0, 3, {"vote", "was", "close"}},
    };
    CorpusStats stats(chunks);
    CHECK(stats.chunk_count() == 3);
    CHECK(stats.avg_chunk_length() == Approx(3.0));
    CHECK(stats.df("tax") == 1);

    SECTION("no shared term scores zero") {
        CHECK(bm25_score(tokenize("budget deficit"), chunks[0], stats, 1.5, 0.75) == 0.0);
    }
    SECTION("hand-computed idf for df=1, N=3") {
        // idf = ln(1 + 2.5/1.5); tf=1 and |d| = avgdl make the tf factor exactly 1
        const double score = bm25_score({"tax"}, chunks[0], stats, 1.5, 0.75);
        CHECK(score == Approx(std::log(1.0 + 2.5 / 1.5)));
        CHECK(score == Approx(0.9808).margin(5e-5));
    }
    SECTION("repeated query terms double the contribution") {
        const double once = bm25_score({"tax"}, chunks[0], stats, 1.5, 0.75);
        const double twice = bm25_score({"tax", "tax"}, chunks[0], stats, 1.5, 0.75);
        CHECK(twice == Approx(2.0 * once));
    }
}

TEST_CASE("rank_spans agrees with the literal formula", "[span_retrieval]") {
    SplitMix64 rng(7);
    const std::vector<std::string> vocab = {"tax", "jobs", "crime", "water", "vote",
                                            "road", "school", "budget", "mayor", "state"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Chunk> chunks;
        const int n_chunks = 1 + static_cast<int>(rng.below(20));
        for (int c = 0; c < n_chunks; ++c) {
            Chunk chunk;
            chunk.doc_id = "doc" + std::to_string(rng.below(4));
            chunk.start_word = c * 10;
            const int len = 1 + static_cast<int>(rng.below(12));
            chunk.end_word = chunk.start_word + len;
            for (int t = 0; t < len; ++t) chunk.tokens.push_back(vocab[rng.below(vocab.size())]);
            chunks.push_back(std::move(chunk));
        }
        std::vector<std::string> queries;
        const int n_queries = 1 + static_cast<int>(rng.below(5));
        for (int q = 0; q < n_queries; ++q) {
            queries.push_back(vocab[rng.below(vocab.size())] + " " + vocab[rng.below(vocab.size())]);
        }
        CorpusStats stats(chunks);
        const auto ranked = rank_spans(queries, chunks, stats, 5);

        // brute force: score all, sort with the same tiebreak
        std::vector<EvidenceSpan> expected;
        for (const auto& c : chunks) {
            double best = 0.0;
            for (const auto& q : queries) {
                best = std::max(best, reference_bm25(tokenize(q), c, chunks, 1.5, 0.75));
            }
            expected.push_back({c.doc_id, c.start_word, c.end_word, best, false});
        }
        std::sort(expected.begin(), expected.end(), span_rank_less);
        if (expected.size() > 5) expected.resize(5);

        REQUIRE(ranked.size() == expected.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            CHECK(ranked[i].doc_id == expected[i].doc_id);
            CHECK(ranked[i].start_word == expected[i].start_word);
            CHECK(ranked[i].score == Approx(expected[i].score).margin(1e-9));
        }
    }
}

TEST_CASE("max aggregation keeps both query winners", "[span_retrieval]") {
    std::vector<Chunk> chunks = {
        {"a", 0, 2, {"solar", "farm"}},
        {"b", 0, 2, {"coal", "mine"}},
        {"c", 0, 2, {"city", "hall"}},
    };
    CorpusStats stats(chunks);
    const auto ranked = rank_spans({"solar power", "coal output"}, chunks, stats, 2);
    REQUIRE(ranked.size() == 2);
    std::set<std::string> ids = {ranked[0].doc_id, ranked[1].doc_id};
    CHECK(ids == std::set<std::string>{"a", "b"});
}

TEST_CASE("rank_spans bounds", "[span_retrieval]") {
    std::vector<Chunk> chunks = {{"a", 0, 2, {"tax", "cut"}}};
    CorpusStats stats(chunks);
    CHECK(rank_spans({"tax"}, {}, CorpusStats(std::vector<Chunk>{}), 3).empty());
    CHECK(rank_spans({"tax"}, chunks, stats, 10).size() == 1);
    CHECK(rank_spans({"tax"}, chunks, stats, 10)[0].doc_id == "a");
}

TEST_CASE("expand_span clips to the document", "[span_retrieval]") {
    const EvidenceSpan base{"d", 45, 75, 2.5, false};
    const auto a = expand_span(base, 150, 300);
    CHECK(a.start_word == 0);
    CHECK(a.end_word == 225);
    CHECK(a.score == 2.5);
    CHECK(a.expanded);

    const auto b = expand_span({"d", 0, 30, 1.0, false}, 150, 100);
    CHECK(b.start_word == 0);
    CHECK(b.end_word == 100);

    const auto c = expand_span({"d", 500, 530, 1.0, false}, 150, 2000);
    CHECK(c.start_word == 350);
    CHECK(c.end_word == 680);
}

TEST_CASE("merge_spans unions overlaps and keeps max score", "[span_retrieval]") {
    SECTION("overlapping spans merge") {
        auto merged = merge_spans({{"d", 100, 400, 2.0, true}, {"d", 350, 700, 1.5, true}});
        REQUIRE(merged.size() == 1);
        CHECK(merged[0].start_word == 100);
        CHECK(merged[0].end_word == 700);
        CHECK(merged[0].score == 2.0);
    }
    SECTION("touching spans merge") {
        auto merged = merge_spans({{"d", 0, 100, 1.0, true}, {"d", 100, 200, 2.0, true}});
        REQUIRE(merged.size() == 1);
        CHECK(merged[0].end_word == 200);
        CHECK(merged[0].score == 2.0);
    }
    SECTION("disjoint spans stay apart") {
        auto merged = merge_spans({{"d", 0, 100, 1.0, true}, {"d", 200, 300, 2.0, true}});
        REQUIRE(merged.size() == 2);
    }
    SECTION("different documents never merge") {
        auto merged = merge_spans({{"a", 0, 100, 1.0, true}, {"b", 50, 150, 2.0, true}});
        REQUIRE(merged.size() == 2);
    }
    SECTION("idempotence") {
        auto merged = merge_spans({{"d", 0, 120, 1.0, true},
                                   {"d", 100, 250, 3.0, true},
                                   {"d", 400, 500, 2.0, true}});
        auto again = merge_spans(merged);
        REQUIRE(again.size() == merged.size());
        for (std::size_t i = 0; i < merged.size(); ++i) {
            CHECK(again[i].start_word == merged[i].start_word);
            CHECK(again[i].end_word == merged[i].end_word);
            CHECK(again[i].score == merged[i].score);
        }
    }
}

TEST_CASE("select_documents ranks by best span", "[span_retrieval]") {
    std::vector<EvidenceSpan> merged;
    for (int d = 0; d < 6; ++d) {
        merged.push_back({"doc" + std::to_string(d), 0, 10, 1.0 + d, true});
    }
    const auto selected = select_documents(merged, 4);
    REQUIRE(selected.size() == 4);
    CHECK(selected[0].doc_id == "doc5");
    CHECK(selected[3].doc_id == "doc2");

    SECTION("ties broken by doc id ascending") {
        auto tied = select_documents({{"b", 0, 5, 1.0, true}, {"a", 0, 5, 1.0, true}}, 1);
        REQUIRE(tied.size() == 1);
        CHECK(tied[0].doc_id == "a");
    }
    SECTION("fewer documents than requested") {
        CHECK(select_documents({{"a", 0, 5, 1.0, true}}, 4).size() == 1);
        CHECK(select_documents({}, 4).empty());
    }
    SECTION("spans arrive in reading order") {
        auto docs = select_documents(
            {{"a", 50, 80, 3.0, true}, {"a", 0, 20, 1.0, true}, {"a", 90, 120, 2.0, true}}, 1);
        REQUIRE(docs.size() == 1);
        REQUIRE(docs[0].spans.size() == 3);
        CHECK(docs[0].spans[0].start_word == 0);
        CHECK(docs[0].spans[1].start_word == 50);
        CHECK(docs[0].spans[2].start_word == 90);
    }
}

TEST_CASE("retrieve_spans end to end determinism", "[span_retrieval]") {
    PipelineConfig cfg;
    cfg.chunk_size = 10;
    cfg.stride = 5;
    cfg.top_spans = 4;
    cfg.top_docs = 2;
    cfg.expansion_words = 8;

    TokenizedCorpus docs;
    docs["u1"] = tokenize(
        "the state budget doubled in four years according to the treasurer report which "
        "cited pension costs and school funding as the main drivers of growth");
    docs["u2"] = tokenize(
        "weather was mild this weekend and the festival drew a record crowd with food "
        "stalls and live music along the riverfront park area");

    const std::vector<std::string> queries = {"did the state budget double"};
    const auto r1 = retrieve_spans(queries, docs, cfg);
    const auto r2 = retrieve_spans(queries, docs, cfg);
    REQUIRE_FALSE(r1.selected.empty());
    CHECK(r1.selected[0].doc_id == "u1");
    REQUIRE(r1.top_spans.size() == r2.top_spans.size());
    for (std::size_t i = 0; i < r1.top_spans.size(); ++i) {
        CHECK(r1.top_spans[i].doc_id == r2.top_spans[i].doc_id);
        CHECK(r1.top_spans[i].start_word == r2.top_spans[i].start_word);
        CHECK(r1.top_spans[i].score == r2.top_spans[i].score);
    }
    // expansion then merge never decreases a document's max score
    double top_selected = 0.0;
    for (const auto& d : r1.selected) top_selected = std::max(top_selected, d.max_score);
    CHECK(r1.merged[0].score >= r1.top_spans[0].score - 1e-12);
}
