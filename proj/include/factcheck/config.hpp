#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

enum class FsrQuerySource { Subquestions, Claim, GoldSubquestions };
enum class SsrQuerySource { Subquestions, Claim, GoldSubquestions, Justification };
enum class SummaryMode { ZeroShot, FewShot, None };

inline std::string_view to_string(FsrQuerySource s) {
    switch (s) {
        case FsrQuerySource::Subquestions: return "subquestions";
        case FsrQuerySource::Claim: return "claim";
        case FsrQuerySource::GoldSubquestions: return "gold_subquestions";
    }
    return "?";
}

inline std::string_view to_string(SsrQuerySource s) {
    switch (s) {
        case SsrQuerySource::Subquestions: return "subquestions";
        case SsrQuerySource::Claim: return "claim";
        case SsrQuerySource::GoldSubquestions: return "gold_subquestions";
        case SsrQuerySource::Justification: return "justification";
    }
    return "?";
}

inline std::string_view to_string(SummaryMode m) {
    switch (m) {
        case SummaryMode::ZeroShot: return "zero_shot";
        case SummaryMode::FewShot: return "few_shot";
        case SummaryMode::None: return "none";
    }
    return "?";
}

inline FsrQuerySource fsr_query_source_from_string(std::string_view s) {
    if (s == "subquestions" || s == "subq") return FsrQuerySource::Subquestions;
    if (s == "claim") return FsrQuerySource::Claim;
    if (s == "gold_subquestions" || s == "gold") return FsrQuerySource::GoldSubquestions;
    throw ConfigError("unknown first-stage query source: " + std::string(s));
}

inline SsrQuerySource ssr_query_source_from_string(std::string_view s) {
    if (s == "subquestions" || s == "subq") return SsrQuerySource::Subquestions;
    if (s == "claim") return SsrQuerySource::Claim;
    if (s == "gold_subquestions" || s == "gold") return SsrQuerySource::GoldSubquestions;
    if (s == "justification") return SsrQuerySource::Justification;
    throw ConfigError("unknown second-stage query source: " + std::string(s));
}

inline SummaryMode summary_mode_from_string(std::string_view s) {
    if (s == "zero_shot" || s == "zero") return SummaryMode::ZeroShot;
    if (s == "few_shot" || s == "few") return SummaryMode::FewShot;
    if (s == "none") return SummaryMode::None;
    throw ConfigError("unknown summary mode: " + std::string(s));
}

// Every knob of the pipeline. Defaults are the default system configuration;
// the ablation switches change only the *_query_source / summary_mode fields.
struct PipelineConfig {
    FsrQuerySource fsr_query_source = FsrQuerySource::Subquestions;
    SsrQuerySource ssr_query_source = SsrQuerySource::Subquestions;
    SummaryMode summary_mode = SummaryMode::ZeroShot;

    bool temporal_constraint = true;
    bool site_constraint = true;
    bool drop_undated = false;  // strict mode: discard documents without a date

    int chunk_size = 30;        // words per second-stage window
    int stride = 15;            // window stride; floor(chunk_size / 2) by default
    int top_spans = 10;         // highest-scored spans kept
    int top_docs = 4;           // documents passed to summarization
    int expansion_words = 150;  // context added on each side of a kept span

    int docs_per_query = 10;
    int max_result_pages = 5;   // backend pages polled to fill docs_per_query
    int question_target = 10;
    int max_decomposition_rounds = 10;

    double bm25_k = 1.5;
    double bm25_b = 0.75;

    int bootstrap_resamples = 10000;
    std::uint64_t rng_seed = 1;

    int summary_word_budget = 1500;  // evidence words passed to one summary prompt
    int workers = 1;

    void validate() const {
        auto positive = [](int v, const char* name) {
            if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
        };
        positive(chunk_size, "chunk_size");
        positive(stride, "stride");
        positive(top_spans, "top_spans");
        positive(top_docs, "top_docs");
        positive(expansion_words, "expansion_words");
        positive(docs_per_query, "docs_per_query");
        positive(max_result_pages, "max_result_pages");
        positive(question_target, "question_target");
        positive(max_decomposition_rounds, "max_decomposition_rounds");
        positive(bootstrap_resamples, "bootstrap_resamples");
        positive(summary_word_budget, "summary_word_budget");
        positive(workers, "workers");
        if (stride > chunk_size) throw ConfigError("stride must not exceed chunk_size");
        if (bm25_b < 0.0 || bm25_b > 1.0) throw ConfigError("bm25_b must be in [0, 1]");
        if (bm25_k < 0.0) throw ConfigError("bm25_k must be non-negative");
    }
};

inline nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["fsr_query_source"] = std::string(to_string(c.fsr_query_source));
    j["ssr_query_source"] = std::string(to_string(c.ssr_query_source));
    j["summary_mode"] = std::string(to_string(c.summary_mode));
    j["temporal_constraint"] = c.temporal_constraint;
    j["site_constraint"] = c.site_constraint;
    j["drop_undated"] = c.drop_undated;
    j["chunk_size"] = c.chunk_size;
    j["stride"] = c.stride;
    j["top_spans"] = c.top_spans;
    j["top_docs"] = c.top_docs;
    j["expansion_words"] = c.expansion_words;
    j["docs_per_query"] = c.docs_per_query;
    j["max_result_pages"] = c.max_result_pages;
    j["question_target"] = c.question_target;
    j["max_decomposition_rounds"] = c.max_decomposition_rounds;
    j["bm25_k"] = c.bm25_k;
    j["bm25_b"] = c.bm25_b;
    j["bootstrap_resamples"] = c.bootstrap_resamples;
    j["rng_seed"] = c.rng_seed;
    j["summary_word_budget"] = c.summary_word_budget;
    return j;
}

inline PipelineConfig config_from_json(const nlohmann::ordered_json& j) {
    PipelineConfig c;
    if (j.contains("fsr_query_source"))
        c.fsr_query_source = fsr_query_source_from_string(j["fsr_query_source"].get<std::string>());
    if (j.contains("ssr_query_source"))
        c.ssr_query_source = ssr_query_source_from_string(j["ssr_query_source"].get<std::string>());
    if (j.contains("summary_mode"))
        c.summary_mode = summary_mode_from_string(j["summary_mode"].get<std::string>());
    c.temporal_constraint = j.value("temporal_constraint", c.temporal_constraint);
    c.site_constraint = j.value("site_constraint", c.site_constraint);
    c.drop_undated = j.value("drop_undated", c.drop_undated);
    c.chunk_size = j.value("chunk_size", c.chunk_size);
    // stride follows chunk_size unless set explicitly
    c.stride = j.contains("stride") ? j["stride"].get<int>() : std::max(1, c.chunk_size / 2);
    c.top_spans = j.value("top_spans", c.top_spans);
    c.top_docs = j.value("top_docs", c.top_docs);
    c.expansion_words = j.value("expansion_words", c.expansion_words);
    c.docs_per_query = j.value("docs_per_query", c.docs_per_query);
    c.max_result_pages = j.value("max_result_pages", c.max_result_pages);
    c.question_target = j.value("question_target", c.question_target);
    c.max_decomposition_rounds = j.value("max_decomposition_rounds", c.max_decomposition_rounds);
    c.bm25_k = j.value("bm25_k", c.bm25_k);
    c.bm25_b = j.value("bm25_b", c.bm25_b);
    c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.summary_word_budget = j.value("summary_word_budget", c.summary_word_budget);
    c.workers = j.value("workers", c.workers);
    c.validate();
    return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    try {
        return config_from_json(nlohmann::ordered_json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
    }
}

}  // namespace factcheck
