#pragma once

#include <ctime>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "factcheck/cache.hpp"
#include "factcheck/config.hpp"
#include "factcheck/decompose.hpp"
#include "factcheck/metrics.hpp"
#include "factcheck/model.hpp"
#include "factcheck/parallel.hpp"
#include "factcheck/prompts.hpp"
#include "factcheck/search.hpp"
#include "factcheck/span_retrieval.hpp"
#include "factcheck/summarize.hpp"
#include "factcheck/veracity.hpp"
#include "factcheck/web_retrieval.hpp"

namespace factcheck {

// ============================================================================
// End-to-end orchestration: decompose -> first-stage retrieval -> extraction
// -> second-stage span retrieval -> summarization -> classification, with
// every intermediate artifact recorded in an EvidenceReport and whole runs
// captured by a RunManifest.
// ============================================================================

struct StageCounts {
    int documents = 0;
    long words = 0;
};

struct CompressionStats {
    StageCounts first_stage;
    StageCounts second_stage;
    std::optional<StageCounts> summary_stage;  // absent under summary_mode none
};

struct SelectedDocument {
    std::string doc_id;
    std::vector<EvidenceSpan> spans;  // reading order
    std::string text;                 // concatenated span words
};

struct EvidenceReport {
    Claim claim;
    std::vector<std::string> warnings;

    std::vector<SubQuestion> subquestions;

    FsrQuerySource fsr_query_source = FsrQuerySource::Subquestions;
    std::vector<std::string> fsr_queries;
    std::vector<QueryLog> query_logs;
    std::vector<RetrievedDocument> documents;

    SsrQuerySource ssr_query_source = SsrQuerySource::Subquestions;
    std::vector<std::string> ssr_queries;
    std::vector<EvidenceSpan> top_spans;
    std::vector<EvidenceSpan> merged_spans;
    std::vector<SelectedDocument> selected;

    SummaryMode summary_mode = SummaryMode::ZeroShot;
    std::vector<ClaimSummary> summaries;
    std::vector<std::string> summary_failures;

    InputMode classifier_input_mode = InputMode::ClaimOnly;
    std::string classifier_id;
    std::optional<VeracityLabel> predicted;
    std::optional<double> predicted_score;
    std::optional<std::string> rationale;

    CompressionStats compression;
};

// Per-stage document and word counts: extracted documents after first-stage
// retrieval, merged evidence spans after second-stage retrieval, and the
// summaries. Document counts never increase from stage to stage.
inline CompressionStats compression_stats(const EvidenceReport& report) {
    CompressionStats stats;
    for (const auto& doc : report.documents) {
        if (doc.fetch_status != FetchStatus::Ok) continue;
        ++stats.first_stage.documents;
        stats.first_stage.words += static_cast<long>(tokenize(*doc.text).size());
    }
    std::set<std::string> span_docs;
    for (const auto& span : report.merged_spans) {
        span_docs.insert(span.doc_id);
        stats.second_stage.words += span_word_count(span);
    }
    stats.second_stage.documents = static_cast<int>(span_docs.size());
    if (report.summary_mode != SummaryMode::None) {
        StageCounts summary;
        summary.documents = static_cast<int>(report.summaries.size());
        for (const auto& s : report.summaries) {
            summary.words += static_cast<long>(tokenize(s.text).size());
        }
        stats.summary_stage = summary;
    }
    return stats;
}

struct Backends {
    SearchBackend* search = nullptr;
    TextGenClient* textgen = nullptr;
    VeracityClassifier* classifier = nullptr;
    DocumentCache* cache = nullptr;
    PromptTemplates templates = PromptTemplates::defaults();
};

inline std::vector<SearchQuery> queries_for_fsr(const Claim& claim,
                                                const std::vector<SubQuestion>& subqs,
                                                FsrQuerySource source,
                                                std::vector<std::string>& warnings) {
    std::vector<SearchQuery> queries;
    switch (source) {
        case FsrQuerySource::Subquestions:
            for (const auto& q : subqs) queries.push_back({q.text, false});
            if (queries.empty()) {
                warnings.push_back("no subquestions available; first stage queried the claim");
                queries.push_back({claim.text, true});
            }
            break;
        case FsrQuerySource::Claim:
            queries.push_back({claim.text, true});
            break;
        case FsrQuerySource::GoldSubquestions:
            if (claim.gold_subquestions && !claim.gold_subquestions->empty()) {
                for (const auto& q : *claim.gold_subquestions) queries.push_back({q, false});
            } else {
                warnings.push_back(
                    "claim has no gold subquestions; first stage queried the claim");
                queries.push_back({claim.text, true});
            }
            break;
    }
    return queries;
}

inline std::vector<std::string> queries_for_ssr(const Claim& claim,
                                                const std::vector<SubQuestion>& subqs,
                                                SsrQuerySource source,
                                                std::vector<std::string>& warnings) {
    std::vector<std::string> queries;
    switch (source) {
        case SsrQuerySource::Subquestions:
            for (const auto& q : subqs) queries.push_back(q.text);
            if (queries.empty()) {
                warnings.push_back("no subquestions available; second stage queried the claim");
                queries.push_back(claim.text);
            }
            break;
        case SsrQuerySource::Claim:
            queries.push_back(claim.text);
            break;
        case SsrQuerySource::GoldSubquestions:
            if (claim.gold_subquestions && !claim.gold_subquestions->empty()) {
                queries = *claim.gold_subquestions;
            } else {
                warnings.push_back(
                    "claim has no gold subquestions; second stage queried the claim");
                queries.push_back(claim.text);
            }
            break;
        case SsrQuerySource::Justification:
            if (claim.justification && !claim.justification->empty()) {
                queries.push_back(*claim.justification);
            } else {
                warnings.push_back("claim has no justification; second stage queried the claim");
                queries.push_back(claim.text);
            }
            break;
    }
    return queries;
}

inline EvidenceReport run_pipeline(const Claim& claim, const PipelineConfig& cfg,
                                   Backends& backends) {
    cfg.validate();
    if (!backends.search || !backends.textgen || !backends.classifier) {
        throw PipelineError("setup", "search, textgen and classifier backends are required");
    }

    EvidenceReport report;
    report.claim = claim;
    report.fsr_query_source = cfg.fsr_query_source;
    report.ssr_query_source = cfg.ssr_query_source;
    report.summary_mode = cfg.summary_mode;
    report.classifier_id = backends.classifier->id();

    // --- decomposition (skipped when no stage consumes generated questions)
    const bool needs_subquestions = cfg.fsr_query_source == FsrQuerySource::Subquestions ||
                                    cfg.ssr_query_source == SsrQuerySource::Subquestions;
    if (needs_subquestions) {
        try {
            auto decomposition = decompose_claim(claim, *backends.textgen, cfg, backends.templates);
            report.subquestions = std::move(decomposition.questions);
            report.warnings.insert(report.warnings.end(), decomposition.warnings.begin(),
                                   decomposition.warnings.end());
        } catch (const EmptyDecomposition&) {
            report.warnings.push_back("decomposition produced no questions");
        } catch (const DecompositionBackendError& e) {
            throw PipelineError("decompose", e.what());
        }
    }

    // --- first-stage retrieval + extraction
    const auto fsr_queries = queries_for_fsr(claim, report.subquestions,
                                                         cfg.fsr_query_source, report.warnings);
    for (const auto& q : fsr_queries) {
        report.fsr_queries.push_back(q.is_claim ? std::string(kClaimAsQuery) : q.text);
    }
    auto opts = retrieval_options_from_config(cfg, claim.stated_on);
    try {
        auto retrieval = search_evidence(fsr_queries, *backends.search, backends.cache, opts);
        report.query_logs = std::move(retrieval.query_logs);
        report.documents = std::move(retrieval.documents);
        report.warnings.insert(report.warnings.end(), retrieval.warnings.begin(),
                               retrieval.warnings.end());
    } catch (const SearchBackendError& e) {
        throw PipelineError("first-stage-retrieval", e.what());
    }

    TokenizedCorpus corpus;
    for (const auto& doc : report.documents) {
        if (doc.fetch_status == FetchStatus::Ok) corpus[doc.url] = tokenize(*doc.text);
    }

    // --- second-stage retrieval
    report.ssr_queries = queries_for_ssr(claim, report.subquestions,
                                                     cfg.ssr_query_source, report.warnings);
    if (!corpus.empty()) {
        auto spans = retrieve_spans(report.ssr_queries, corpus, cfg);
        report.top_spans = std::move(spans.top_spans);
        report.merged_spans = std::move(spans.merged);
        for (const auto& doc : spans.selected) {
            report.selected.push_back({doc.doc_id, doc.spans, evidence_text(doc, corpus)});
        }
    } else {
        report.warnings.push_back("no documents scraped; second stage skipped");
    }

    // --- summarization
    if (cfg.summary_mode != SummaryMode::None && !report.selected.empty()) {
        std::vector<DocEvidenceText> inputs;
        for (const auto& doc : report.selected) inputs.push_back({doc.doc_id, doc.text});
        auto summarized = summarize_evidence(claim, inputs, *backends.textgen, cfg.summary_mode,
                                             cfg.summary_word_budget, backends.templates);
        report.summaries = std::move(summarized.summaries);
        report.summary_failures = std::move(summarized.failures);
        for (const auto& f : report.summary_failures) {
            report.warnings.push_back("summary failed: " + f);
        }
    }

    // --- classification
    std::vector<std::string> evidence;
    if (cfg.summary_mode == SummaryMode::None) {
        for (const auto& doc : report.selected) {
            evidence.push_back(truncate_words(doc.text, cfg.summary_word_budget));
        }
    } else {
        for (const auto& s : report.summaries) evidence.push_back(s.text);
    }
    report.classifier_input_mode =
        evidence.empty() ? InputMode::ClaimOnly : InputMode::ClaimPlusSummaries;
    if (evidence.empty()) {
        report.warnings.push_back("no evidence available; classified in claim-only fallback");
    }
    try {
        const auto input = build_classifier_input(claim, evidence, report.classifier_input_mode);
        auto outcome = backends.classifier->classify(input);
        report.predicted = outcome.label;
        report.predicted_score = outcome.score;
        report.rationale = outcome.rationale;
    } catch (const std::exception& e) {
        throw PipelineError("classify", e.what());
    }

    report.compression = compression_stats(report);
    return report;
}

// --- report serialization ----------------------------------------------------

inline json span_to_json(const EvidenceSpan& s) {
    json j;
    j["doc_id"] = s.doc_id;
    j["start"] = s.start_word;
    j["end"] = s.end_word;
    j["score"] = s.score;
    j["expanded"] = s.expanded;
    return j;
}

inline EvidenceSpan span_from_json(const json& j) {
    return {j.at("doc_id").get<std::string>(), j.at("start").get<int>(), j.at("end").get<int>(),
            j.at("score").get<double>(), j.value("expanded", false)};
}

inline json report_to_json(const EvidenceReport& r) {
    json j;
    j["claim"] = claim_to_json(r.claim);
    j["warnings"] = r.warnings;
    json subqs = json::array();
    for (const auto& q : r.subquestions) {
        subqs.push_back({{"text", q.text},
                         {"origin", q.origin == SubQuestion::Origin::Gold ? "gold" : "generated"}});
    }
    j["subquestions"] = subqs;

    json fsr;
    fsr["query_source"] = std::string(to_string(r.fsr_query_source));
    fsr["queries"] = r.fsr_queries;
    json logs = json::array();
    for (const auto& log : r.query_logs) {
        logs.push_back({{"query", log.query},
                        {"kept_urls", log.kept_urls},
                        {"site_filtered", log.site_filtered},
                        {"temporal_filtered", log.temporal_filtered},
                        {"undated_dropped", log.undated_dropped}});
    }
    fsr["query_logs"] = logs;
    json docs = json::array();
    for (const auto& d : r.documents) docs.push_back(document_to_json(d));
    fsr["documents"] = docs;
    j["first_stage"] = fsr;

    json ssr;
    ssr["query_source"] = std::string(to_string(r.ssr_query_source));
    ssr["queries"] = r.ssr_queries;
    json tops = json::array();
    for (const auto& s : r.top_spans) tops.push_back(span_to_json(s));
    ssr["top_spans"] = tops;
    json merged = json::array();
    for (const auto& s : r.merged_spans) merged.push_back(span_to_json(s));
    ssr["merged_spans"] = merged;
    json selected = json::array();
    for (const auto& d : r.selected) {
        json spans = json::array();
        for (const auto& s : d.spans) spans.push_back(span_to_json(s));
        selected.push_back({{"doc_id", d.doc_id}, {"spans", spans}, {"text", d.text}});
    }
    ssr["selected"] = selected;
    j["second_stage"] = ssr;

    json summary;
    summary["mode"] = std::string(to_string(r.summary_mode));
    json sums = json::array();
    for (const auto& s : r.summaries) sums.push_back(summary_to_json(s));
    summary["summaries"] = sums;
    summary["failures"] = r.summary_failures;
    j["summary"] = summary;

    json cls;
    cls["input_mode"] = std::string(to_string(r.classifier_input_mode));
    cls["classifier"] = r.classifier_id;
    cls["label"] = r.predicted ? json(std::string(label_name(*r.predicted))) : json(nullptr);
    cls["score"] = r.predicted_score ? json(*r.predicted_score) : json(nullptr);
    cls["rationale"] = r.rationale ? json(*r.rationale) : json(nullptr);
    j["classification"] = cls;

    json comp;
    comp["first_stage"] = {{"documents", r.compression.first_stage.documents},
                           {"words", r.compression.first_stage.words}};
    comp["second_stage"] = {{"documents", r.compression.second_stage.documents},
                            {"words", r.compression.second_stage.words}};
    comp["summary_stage"] =
        r.compression.summary_stage
            ? json({{"documents", r.compression.summary_stage->documents},
                    {"words", r.compression.summary_stage->words}})
            : json(nullptr);
    j["compression"] = comp;
    return j;
}

inline EvidenceReport report_from_json(const json& j) {
    EvidenceReport r;
    r.claim = claim_from_json(j.at("claim"));
    r.warnings = j.value("warnings", std::vector<std::string>{});
    for (const auto& q : j.value("subquestions", json::array())) {
        r.subquestions.push_back({q.at("text").get<std::string>(),
                                  q.value("origin", "generated") == "gold"
                                      ? SubQuestion::Origin::Gold
                                      : SubQuestion::Origin::Generated});
    }
    const auto& fsr = j.at("first_stage");
    r.fsr_query_source = fsr_query_source_from_string(fsr.at("query_source").get<std::string>());
    r.fsr_queries = fsr.value("queries", std::vector<std::string>{});
    for (const auto& log : fsr.value("query_logs", json::array())) {
        QueryLog q;
        q.query = log.at("query").get<std::string>();
        q.kept_urls = log.value("kept_urls", std::vector<std::string>{});
        q.site_filtered = log.value("site_filtered", 0);
        q.temporal_filtered = log.value("temporal_filtered", 0);
        q.undated_dropped = log.value("undated_dropped", 0);
        r.query_logs.push_back(std::move(q));
    }
    for (const auto& d : fsr.value("documents", json::array())) {
        r.documents.push_back(document_from_json(d));
    }
    const auto& ssr = j.at("second_stage");
    r.ssr_query_source = ssr_query_source_from_string(ssr.at("query_source").get<std::string>());
    r.ssr_queries = ssr.value("queries", std::vector<std::string>{});
    for (const auto& s : ssr.value("top_spans", json::array())) r.top_spans.push_back(span_from_json(s));
    for (const auto& s : ssr.value("merged_spans", json::array())) {
        r.merged_spans.push_back(span_from_json(s));
    }
    for (const auto& d : ssr.value("selected", json::array())) {
        SelectedDocument sel;
        sel.doc_id = d.at("doc_id").get<std::string>();
        for (const auto& s : d.value("spans", json::array())) sel.spans.push_back(span_from_json(s));
        sel.text = d.value("text", "");
        r.selected.push_back(std::move(sel));
    }
    const auto& summary = j.at("summary");
    r.summary_mode = summary_mode_from_string(summary.at("mode").get<std::string>());
    for (const auto& s : summary.value("summaries", json::array())) {
        r.summaries.push_back(summary_from_json(s));
    }
    r.summary_failures = summary.value("failures", std::vector<std::string>{});
    const auto& cls = j.at("classification");
    r.classifier_input_mode = [&] {
        const auto mode = cls.at("input_mode").get<std::string>();
        if (mode == "claim_only") return InputMode::ClaimOnly;
        if (mode == "claim_plus_justification") return InputMode::ClaimPlusJustification;
        return InputMode::ClaimPlusSummaries;
    }();
    r.classifier_id = cls.value("classifier", "");
    if (cls.contains("label") && !cls["label"].is_null()) {
        r.predicted = label_from_name(cls["label"].get<std::string>());
    }
    if (cls.contains("score") && !cls["score"].is_null()) {
        r.predicted_score = cls["score"].get<double>();
    }
    if (cls.contains("rationale") && !cls["rationale"].is_null()) {
        r.rationale = cls["rationale"].get<std::string>();
    }
    r.compression = compression_stats(r);
    return r;
}

// Human-readable rendering persisted next to the structured report.
inline std::string render_report_text(const EvidenceReport& r) {
    std::string out;
    out += "Claim " + r.claim.id + ": " + r.claim.text + "\n";
    out += "  speaker: " + r.claim.speaker + "  venue: " + r.claim.venue +
           "  stated on: " + r.claim.stated_on.to_string() + "\n";
    if (r.claim.gold_label) {
        out += "  gold label: " + std::string(label_name(*r.claim.gold_label)) + "\n";
    }
    out += "\nSubquestions (" + std::to_string(r.subquestions.size()) + "):\n";
    for (std::size_t i = 0; i < r.subquestions.size(); ++i) {
        out += "  " + std::to_string(i + 1) + ". " + r.subquestions[i].text + "\n";
    }
    out += "\nFirst-stage retrieval (" + std::string(to_string(r.fsr_query_source)) + "): " +
           std::to_string(r.documents.size()) + " unique documents\n";
    for (const auto& d : r.documents) {
        out += "  [" + std::string(fetch_status_name(d.fetch_status)) + "] " + d.url;
        if (d.published) out += " (" + d.published->to_string() + ")";
        out += "\n";
    }
    out += "\nSecond-stage retrieval (" + std::string(to_string(r.ssr_query_source)) + "): " +
           std::to_string(r.merged_spans.size()) + " merged spans, " +
           std::to_string(r.selected.size()) + " documents selected\n";
    for (const auto& d : r.selected) {
        out += "  " + d.doc_id + ":";
        for (const auto& s : d.spans) {
            out += " [" + std::to_string(s.start_word) + "," + std::to_string(s.end_word) + ")";
        }
        out += "\n";
    }
    out += "\nSummaries (" + std::string(to_string(r.summary_mode)) + "):\n";
    for (const auto& s : r.summaries) {
        out += "  - " + s.doc_id + (s.is_irrelevant ? " [irrelevant]" : "") + ": " + s.text + "\n";
    }
    out += "\nPrediction (" + r.classifier_id + ", " +
           std::string(to_string(r.classifier_input_mode)) + "): ";
    out += r.predicted ? std::string(label_name(*r.predicted)) : std::string("(failed)");
    if (r.predicted_score) out += " (score " + std::to_string(*r.predicted_score) + ")";
    out += "\n";
    if (!r.warnings.empty()) {
        out += "\nWarnings:\n";
        for (const auto& w : r.warnings) out += "  ! " + w + "\n";
    }
    return out;
}

// --- run manifest --------------------------------------------------------------

struct ClaimOutcome {
    std::string claim_id;
    std::optional<VeracityLabel> predicted;
    std::optional<VeracityLabel> gold;
    std::string report_hash;  // hash of the serialized report line
    std::string error;        // non-empty when the claim failed
};

struct RunManifest {
    json config;
    std::string search_backend;
    std::string textgen_backend;
    std::string classifier_backend;
    std::uint64_t seed = 0;
    std::string created_at;  // empty under frozen runs to keep manifests comparable
    std::vector<ClaimOutcome> claims;
    std::optional<MetricsReport> metrics;
};

inline json manifest_to_json(const RunManifest& m) {
    json j;
    j["config"] = m.config;
    j["backends"] = {{"search", m.search_backend},
                     {"textgen", m.textgen_backend},
                     {"classifier", m.classifier_backend}};
    j["seed"] = m.seed;
    j["created_at"] = m.created_at;
    json claims = json::array();
    for (const auto& c : m.claims) {
        claims.push_back(
            {{"id", c.claim_id},
             {"predicted", c.predicted ? json(std::string(label_name(*c.predicted))) : json(nullptr)},
             {"gold", c.gold ? json(std::string(label_name(*c.gold))) : json(nullptr)},
             {"report_hash", c.report_hash},
             {"error", c.error}});
    }
    j["claims"] = claims;
    j["metrics"] = m.metrics ? metrics_to_json(*m.metrics) : json(nullptr);
    return j;
}

inline RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.config = j.at("config");
    m.search_backend = j.at("backends").value("search", "");
    m.textgen_backend = j.at("backends").value("textgen", "");
    m.classifier_backend = j.at("backends").value("classifier", "");
    m.seed = j.value("seed", 0ull);
    m.created_at = j.value("created_at", "");
    for (const auto& c : j.value("claims", json::array())) {
        ClaimOutcome outcome;
        outcome.claim_id = c.at("id").get<std::string>();
        if (!c.at("predicted").is_null()) {
            outcome.predicted = label_from_name(c["predicted"].get<std::string>());
        }
        if (!c.at("gold").is_null()) outcome.gold = label_from_name(c["gold"].get<std::string>());
        outcome.report_hash = c.value("report_hash", "");
        outcome.error = c.value("error", "");
        m.claims.push_back(std::move(outcome));
    }
    if (j.contains("metrics") && !j["metrics"].is_null()) {
        MetricsReport metrics;
        metrics.accuracy = j["metrics"].value("accuracy", 0.0);
        metrics.soft_accuracy = j["metrics"].value("soft_accuracy", 0.0);
        metrics.macro_f1 = j["metrics"].value("macro_f1", 0.0);
        metrics.mae = j["metrics"].value("mae", 0.0);
        metrics.n = j["metrics"].value("n", 0);
        m.metrics = metrics;
    }
    return m;
}

struct RunResult {
    RunManifest manifest;
    std::vector<EvidenceReport> reports;  // claim order; failed claims are absent
};

struct RunOptions {
    bool frozen = false;         // no wall-clock in the manifest
    std::string created_at;      // override for non-frozen runs (tests)
};

inline std::string current_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Run the pipeline over a claim set; no single claim's failure aborts the
// run. Claims fan out across cfg.workers threads; reports are assembled in
// input order so equal seeds give identical manifests at any worker count.
inline RunResult run_dataset(const std::vector<Claim>& claims, const PipelineConfig& cfg,
                             Backends& backends, const RunOptions& run_opts = {}) {
    cfg.validate();
    RunResult result;
    result.manifest.config = config_to_json(cfg);
    result.manifest.search_backend = backends.search ? backends.search->id() : "";
    result.manifest.textgen_backend = backends.textgen ? backends.textgen->id() : "";
    result.manifest.classifier_backend = backends.classifier ? backends.classifier->id() : "";
    result.manifest.seed = cfg.rng_seed;
    if (!run_opts.frozen) {
        result.manifest.created_at =
            run_opts.created_at.empty() ? current_timestamp() : run_opts.created_at;
    }

    std::vector<std::optional<EvidenceReport>> reports(claims.size());
    std::vector<std::string> errors(claims.size());
    parallel_for(claims.size(), cfg.workers, [&](std::size_t i) {
        try {
            reports[i] = run_pipeline(claims[i], cfg, backends);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    std::vector<VeracityLabel> preds, golds;
    for (std::size_t i = 0; i < claims.size(); ++i) {
        ClaimOutcome outcome;
        outcome.claim_id = claims[i].id;
        outcome.gold = claims[i].gold_label;
        if (reports[i]) {
            outcome.predicted = reports[i]->predicted;
            outcome.report_hash = content_hash(report_to_json(*reports[i]).dump());
            result.reports.push_back(std::move(*reports[i]));
            if (outcome.predicted && outcome.gold) {
                preds.push_back(*outcome.predicted);
                golds.push_back(*outcome.gold);
            }
        } else {
            outcome.error = errors[i];
        }
        result.manifest.claims.push_back(std::move(outcome));
    }
    if (!preds.empty()) result.manifest.metrics = compute_metrics(preds, golds);
    return result;
}

// --- run persistence -----------------------------------------------------------

inline void write_run(const std::filesystem::path& dir, const RunResult& result) {
    std::filesystem::create_directories(dir / "reports");
    std::string lines;
    for (const auto& r : result.reports) {
        lines += report_to_json(r).dump();
        lines += '\n';
        write_text_file(dir / "reports" / (r.claim.id + ".txt"), render_report_text(r));
    }
    write_text_file(dir / "reports.jsonl", lines);
    write_text_file(dir / "manifest.json", manifest_to_json(result.manifest).dump(2) + "\n");
}

inline RunResult load_run(const std::filesystem::path& dir) {
    RunResult result;
    result.manifest = manifest_from_json(json::parse(read_text_file(dir / "manifest.json")));
    for (const auto& line : split_lines(read_text_file(dir / "reports.jsonl"))) {
        if (trim(line).empty()) continue;
        result.reports.push_back(report_from_json(json::parse(line)));
    }
    return result;
}

// --- retrieval stability ---------------------------------------------------------

struct StabilityReport {
    std::vector<std::pair<std::string, double>> per_claim;  // claim id -> URL Jaccard
    double mean = 0.0;
};

// URL-set overlap of first-stage retrieval between two runs over the same
// claims.
inline StabilityReport stability_analysis(const RunResult& a, const RunResult& b) {
    auto url_sets = [](const RunResult& run) {
        std::map<std::string, std::set<std::string>> sets;
        for (const auto& r : run.reports) {
            auto& s = sets[r.claim.id];
            for (const auto& d : r.documents) s.insert(d.url);
        }
        return sets;
    };
    const auto sets_a = url_sets(a);
    const auto sets_b = url_sets(b);
    if (sets_a.size() != sets_b.size()) {
        throw ManifestMismatch("runs cover different claim counts");
    }
    StabilityReport report;
    for (const auto& [id, urls_a] : sets_a) {
        auto it = sets_b.find(id);
        if (it == sets_b.end()) throw ManifestMismatch("claim " + id + " missing from second run");
        report.per_claim.emplace_back(id, jaccard_urls(urls_a, it->second));
        report.mean += report.per_claim.back().second;
    }
    if (!report.per_claim.empty()) {
        report.mean /= static_cast<double>(report.per_claim.size());
    }
    return report;
}

}  // namespace factcheck
