// factcheck: claim decomposition, constrained web retrieval, span ranking,
// claim-focused summarization and veracity classification over a claims file.

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <factcheck/annotation.hpp>
#include <factcheck/pipeline.hpp>

namespace fs = std::filesystem;
using namespace factcheck;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string fixtures_dir;
    std::string cache_dir;
    std::string textgen_spec;    // file:<path>
    std::string classifier_spec = "llm-score";
    std::string train_labels_path;
    std::string blocklist_path;
    std::string templates_dir;
    bool frozen = false;
    std::optional<std::uint64_t> seed;
    std::optional<bool> temporal;
    std::optional<bool> site;
    bool drop_undated = false;
    std::string fsr_query;
    std::string ssr_query;
    std::string summary;
    std::optional<int> workers;

    PipelineConfig config() const {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.rng_seed = *seed;
        if (temporal) cfg.temporal_constraint = *temporal;
        if (site) cfg.site_constraint = *site;
        if (drop_undated) cfg.drop_undated = true;
        if (!fsr_query.empty()) cfg.fsr_query_source = fsr_query_source_from_string(fsr_query);
        if (!ssr_query.empty()) cfg.ssr_query_source = ssr_query_source_from_string(ssr_query);
        if (!summary.empty()) cfg.summary_mode = summary_mode_from_string(summary);
        if (workers) cfg.workers = *workers;
        cfg.validate();
        return cfg;
    }
};

void add_global_options(CLI::App* cmd, GlobalOptions& g) {
    cmd->add_option("--config", g.config_path, "pipeline config file (JSON)");
    cmd->add_option("--fixtures", g.fixtures_dir, "offline fixture corpus directory");
    cmd->add_option("--cache", g.cache_dir, "page cache directory");
    cmd->add_option("--textgen", g.textgen_spec,
                    "text generation backend (file:<responses.jsonl>)");
    cmd->add_option("--classifier", g.classifier_spec,
                    "veracity classifier (llm-score | majority | file:<preds.jsonl>)");
    cmd->add_option("--train-labels", g.train_labels_path,
                    "claims file supplying the training label distribution");
    cmd->add_option("--blocklist", g.blocklist_path, "extra blocklist rules, one per line");
    cmd->add_option("--templates", g.templates_dir, "prompt template override directory");
    cmd->add_flag("--frozen", g.frozen, "forbid network access; requires --fixtures");
    cmd->add_option("--seed", g.seed, "run seed");
    cmd->add_flag("--temporal,!--no-temporal", g.temporal, "temporal constraint");
    cmd->add_flag("--site,!--no-site", g.site, "site constraint");
    cmd->add_flag("--drop-undated", g.drop_undated, "drop documents without a publication date");
    cmd->add_option("--fsr-query", g.fsr_query, "first-stage query source (subq|claim|gold)");
    cmd->add_option("--ssr-query", g.ssr_query,
                    "second-stage query source (subq|claim|gold|justification)");
    cmd->add_option("--summary", g.summary, "summary mode (zero|few|none)");
    cmd->add_option("--workers", g.workers, "concurrent claim workers");
}

struct BackendRig {
    std::unique_ptr<FixtureSearchBackend> fixture_search;
    std::unique_ptr<HttpSearchBackend> http_search;
    std::unique_ptr<ScriptedTextGenClient> textgen;
    std::unique_ptr<DocumentCache> cache;
    std::unique_ptr<VeracityClassifier> classifier;
    PromptTemplates templates = PromptTemplates::defaults();

    SearchBackend* search() {
        if (fixture_search) return fixture_search.get();
        return http_search.get();
    }
};

std::vector<Claim> read_claims(const std::string& path) {
    const auto file = load_claims(path);
    for (const auto& w : file.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
    if (file.claims.empty()) throw IngestError("no usable claims in " + path);
    return file.claims;
}

std::vector<VeracityLabel> training_labels(const GlobalOptions& g,
                                           const std::string& fallback_claims) {
    const std::string path =
        !g.train_labels_path.empty() ? g.train_labels_path : fallback_claims;
    if (path.empty()) {
        throw ConfigError("the " + g.classifier_spec +
                          " classifier needs --train-labels <claims file>");
    }
    std::vector<VeracityLabel> labels;
    for (const auto& c : read_claims(path)) {
        if (c.gold_label) labels.push_back(*c.gold_label);
    }
    if (labels.empty()) throw EmptyTrainingSet("no gold labels in " + path);
    return labels;
}

void require_scripted_textgen(const GlobalOptions& g, BackendRig& rig, const char* why) {
    if (rig.textgen) return;
    if (g.textgen_spec.rfind("file:", 0) != 0) {
        throw ConfigError(std::string(why) + " needs --textgen file:<responses.jsonl>");
    }
    rig.textgen = std::make_unique<ScriptedTextGenClient>();
    rig.textgen->load_file(g.textgen_spec.substr(5));
}

BackendRig build_backends(const GlobalOptions& g, const std::string& claims_path,
                          bool needs_search, bool needs_textgen, bool needs_classifier) {
    BackendRig rig;
    if (needs_search) {
        if (!g.fixtures_dir.empty()) {
            rig.fixture_search = std::make_unique<FixtureSearchBackend>(g.fixtures_dir);
        } else if (g.frozen) {
            throw ConfigError("--frozen forbids live search; provide --fixtures");
        } else {
            rig.http_search = std::make_unique<HttpSearchBackend>(HttpSearchBackend::from_env());
        }
    }
    if (needs_textgen) require_scripted_textgen(g, rig, "this command");
    if (!g.cache_dir.empty()) rig.cache = std::make_unique<DocumentCache>(g.cache_dir);
    if (!g.templates_dir.empty()) {
        rig.templates = PromptTemplates::from_directory(g.templates_dir);
    }
    if (needs_classifier) {
        if (g.classifier_spec == "llm-score") {
            require_scripted_textgen(g, rig, "the llm-score classifier");
            rig.classifier = std::make_unique<LlmScoreClassifier>(
                *rig.textgen, LabelThresholds::from_training(training_labels(g, claims_path)));
        } else if (g.classifier_spec == "majority") {
            rig.classifier =
                std::make_unique<MajorityClassClassifier>(training_labels(g, claims_path));
        } else if (g.classifier_spec.rfind("file:", 0) == 0) {
            rig.classifier =
                std::make_unique<FilePredictionsClassifier>(g.classifier_spec.substr(5));
        } else {
            throw ConfigError("unknown classifier: " + g.classifier_spec);
        }
    }
    return rig;
}

RetrievalOptions make_retrieval_options(const GlobalOptions& g, const PipelineConfig& cfg,
                                        const Date& claim_date) {
    auto opts = retrieval_options_from_config(cfg, claim_date);
    if (!g.blocklist_path.empty()) load_blocklist(opts.constraints, g.blocklist_path);
    return opts;
}

void write_jsonl(const std::string& path, const std::vector<json>& records) {
    std::string out;
    for (const auto& r : records) {
        out += r.dump();
        out += '\n';
    }
    if (path.empty() || path == "-") {
        std::cout << out;
    } else {
        write_text_file(path, out);
        std::cerr << "wrote " << records.size() << " records to " << path << "\n";
    }
}

std::map<std::string, json> read_jsonl_by_id(const std::string& path) {
    std::map<std::string, json> out;
    for (const auto& line : split_lines(read_text_file(path))) {
        if (trim(line).empty()) continue;
        auto j = json::parse(line);
        out[j.at("id").get<std::string>()] = std::move(j);
    }
    return out;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_decompose(const GlobalOptions& g, const std::string& claims_path,
                  const std::string& out_path) {
    const auto cfg = g.config();
    auto rig = build_backends(g, claims_path, false, true, false);
    std::vector<json> records;
    for (const auto& claim : read_claims(claims_path)) {
        const auto d = decompose_claim(claim, *rig.textgen, cfg, rig.templates);
        json rec;
        rec["id"] = claim.id;
        json qs = json::array();
        for (const auto& q : d.questions) qs.push_back(q.text);
        rec["questions"] = qs;
        rec["rounds"] = d.rounds;
        rec["warnings"] = d.warnings;
        records.push_back(std::move(rec));
    }
    write_jsonl(out_path, records);
    return 0;
}

int cmd_retrieve(const GlobalOptions& g, const std::string& claims_path,
                 const std::string& out_path) {
    const auto cfg = g.config();
    const bool needs_textgen = cfg.fsr_query_source == FsrQuerySource::Subquestions;
    auto rig = build_backends(g, claims_path, true, needs_textgen, false);
    std::vector<json> records;
    for (const auto& claim : read_claims(claims_path)) {
        std::vector<std::string> warnings;
        std::vector<SubQuestion> subqs;
        if (needs_textgen) {
            auto d = decompose_claim(claim, *rig.textgen, cfg, rig.templates);
            subqs = std::move(d.questions);
            warnings = std::move(d.warnings);
        }
        const auto queries = queries_for_fsr(claim, subqs, cfg.fsr_query_source,
                                                         warnings);
        const auto opts = make_retrieval_options(g, cfg, claim.stated_on);
        const auto result = search_evidence(queries, *rig.search(), rig.cache.get(), opts);
        json rec;
        rec["id"] = claim.id;
        json qlist = json::array();
        for (const auto& q : result.query_logs) qlist.push_back(q.query);
        rec["queries"] = qlist;
        json docs = json::array();
        for (const auto& d : result.documents) docs.push_back(document_to_json(d));
        rec["documents"] = docs;
        for (const auto& w : result.warnings) warnings.push_back(w);
        rec["warnings"] = warnings;
        records.push_back(std::move(rec));
    }
    write_jsonl(out_path, records);
    return 0;
}

int cmd_spans(const GlobalOptions& g, const std::string& claims_path,
              const std::string& docs_path, const std::string& out_path, bool dump) {
    const auto cfg = g.config();
    const bool needs_textgen = cfg.ssr_query_source == SsrQuerySource::Subquestions;
    auto rig = build_backends(g, claims_path, false, needs_textgen, false);
    const auto docs_by_id = read_jsonl_by_id(docs_path);
    std::vector<json> records;
    for (const auto& claim : read_claims(claims_path)) {
        auto it = docs_by_id.find(claim.id);
        if (it == docs_by_id.end()) continue;
        TokenizedCorpus corpus;
        for (const auto& dj : it->second.at("documents")) {
            const auto doc = document_from_json(dj);
            if (doc.fetch_status == FetchStatus::Ok) corpus[doc.url] = tokenize(*doc.text);
        }
        std::vector<std::string> warnings;
        std::vector<SubQuestion> subqs;
        if (needs_textgen) {
            auto d = decompose_claim(claim, *rig.textgen, cfg, rig.templates);
            subqs = std::move(d.questions);
        }
        const auto queries =
            queries_for_ssr(claim, subqs, cfg.ssr_query_source, warnings);
        const auto result = retrieve_spans(queries, corpus, cfg);
        if (dump) {
            for (const auto& s : result.top_spans) {
                std::cout << s.doc_id << '\t' << s.start_word << '\t' << s.end_word << '\t'
                          << s.score << '\n';
            }
        }
        json rec;
        rec["id"] = claim.id;
        rec["queries"] = queries;
        json tops = json::array();
        for (const auto& s : result.top_spans) tops.push_back(span_to_json(s));
        rec["top_spans"] = tops;
        json merged = json::array();
        for (const auto& s : result.merged) merged.push_back(span_to_json(s));
        rec["merged_spans"] = merged;
        json selected = json::array();
        for (const auto& d : result.selected) {
            json span_list = json::array();
            for (const auto& s : d.spans) span_list.push_back(span_to_json(s));
            selected.push_back({{"doc_id", d.doc_id},
                                {"spans", span_list},
                                {"text", evidence_text(d, corpus)}});
        }
        rec["selected"] = selected;
        rec["warnings"] = warnings;
        records.push_back(std::move(rec));
    }
    write_jsonl(out_path, records);
    return 0;
}

int cmd_summarize(const GlobalOptions& g, const std::string& claims_path,
                  const std::string& spans_path, const std::string& out_path) {
    const auto cfg = g.config();
    if (cfg.summary_mode == SummaryMode::None) {
        throw ConfigError("summary mode 'none' produces no summaries");
    }
    auto rig = build_backends(g, claims_path, false, true, false);
    const auto spans_by_id = read_jsonl_by_id(spans_path);
    std::vector<json> records;
    for (const auto& claim : read_claims(claims_path)) {
        auto it = spans_by_id.find(claim.id);
        if (it == spans_by_id.end()) continue;
        std::vector<DocEvidenceText> docs;
        for (const auto& sel : it->second.at("selected")) {
            docs.push_back(
                {sel.at("doc_id").get<std::string>(), sel.at("text").get<std::string>()});
        }
        const auto result = summarize_evidence(claim, docs, *rig.textgen, cfg.summary_mode,
                                               cfg.summary_word_budget, rig.templates);
        json rec;
        rec["id"] = claim.id;
        json sums = json::array();
        for (const auto& s : result.summaries) sums.push_back(summary_to_json(s));
        rec["summaries"] = sums;
        rec["failures"] = result.failures;
        records.push_back(std::move(rec));
    }
    write_jsonl(out_path, records);
    return 0;
}

int cmd_classify(const GlobalOptions& g, const std::string& claims_path,
                 const std::string& summaries_path, const std::string& mode_name,
                 const std::string& out_path) {
    auto rig = build_backends(g, claims_path, false, false, true);
    std::map<std::string, json> summaries_by_id;
    if (!summaries_path.empty()) summaries_by_id = read_jsonl_by_id(summaries_path);

    InputMode mode = InputMode::ClaimOnly;
    if (mode_name == "justification") {
        mode = InputMode::ClaimPlusJustification;
    } else if (mode_name == "summaries" || (mode_name.empty() && !summaries_path.empty())) {
        mode = InputMode::ClaimPlusSummaries;
    }

    std::vector<json> records;
    for (const auto& claim : read_claims(claims_path)) {
        std::vector<std::string> evidence;
        if (mode == InputMode::ClaimPlusSummaries) {
            auto it = summaries_by_id.find(claim.id);
            if (it == summaries_by_id.end()) {
                std::cerr << "warning: no summaries for claim " << claim.id
                          << "; falling back to claim-only\n";
            } else {
                for (const auto& s : it->second.at("summaries")) {
                    evidence.push_back(s.at("text").get<std::string>());
                }
            }
        }
        const InputMode effective =
            (mode == InputMode::ClaimPlusSummaries && evidence.empty()) ? InputMode::ClaimOnly
                                                                        : mode;
        const auto input = build_classifier_input(claim, evidence, effective);
        const auto result = rig.classifier->classify(input);
        json rec;
        rec["id"] = claim.id;
        rec["label"] = std::string(label_name(result.label));
        if (result.score) rec["score"] = *result.score;
        records.push_back(std::move(rec));
    }
    write_jsonl(out_path, records);
    return 0;
}

int cmd_run(const GlobalOptions& g, const std::string& claims_path, const std::string& out_dir) {
    const auto cfg = g.config();
    auto rig = build_backends(g, claims_path, true, true, true);
    Backends backends;
    backends.search = rig.search();
    backends.textgen = rig.textgen.get();
    backends.classifier = rig.classifier.get();
    backends.cache = rig.cache.get();
    backends.templates = rig.templates;

    RunOptions run_opts;
    run_opts.frozen = g.frozen;
    const auto claims = read_claims(claims_path);
    const auto result = run_dataset(claims, cfg, backends, run_opts);

    if (!out_dir.empty()) {
        write_run(out_dir, result);
        std::cerr << "run written to " << out_dir << "\n";
    }
    int failed = 0;
    for (const auto& c : result.manifest.claims) {
        if (!c.error.empty()) {
            ++failed;
            std::cerr << "claim " << c.claim_id << " failed: " << c.error << "\n";
        }
    }
    for (const auto& report : result.reports) {
        const auto& comp = report.compression;
        std::cout << report.claim.id << ": "
                  << (report.predicted ? label_name(*report.predicted) : "(none)");
        if (report.claim.gold_label) {
            std::cout << " (gold " << label_name(*report.claim.gold_label) << ")";
        }
        std::cout << "  docs " << comp.first_stage.documents << " -> "
                  << comp.second_stage.documents << " -> "
                  << (comp.summary_stage ? std::to_string(comp.summary_stage->documents) : "-")
                  << "  words " << comp.first_stage.words << " -> " << comp.second_stage.words
                  << " -> "
                  << (comp.summary_stage ? std::to_string(comp.summary_stage->words) : "-")
                  << "\n";
    }
    if (result.manifest.metrics) {
        std::cout << metrics_to_json(*result.manifest.metrics).dump(2) << "\n";
    }
    return failed == 0 ? 0 : 1;
}

std::vector<VeracityLabel> aligned_predictions(const std::map<std::string, json>& preds,
                                               const std::vector<Claim>& claims,
                                               std::vector<VeracityLabel>& golds_out) {
    std::vector<VeracityLabel> out;
    golds_out.clear();
    for (const auto& claim : claims) {
        if (!claim.gold_label) continue;
        auto it = preds.find(claim.id);
        if (it == preds.end()) continue;
        out.push_back(label_from_name(it->second.at("label").get<std::string>()));
        golds_out.push_back(*claim.gold_label);
    }
    if (out.empty()) throw EmptyInput("no overlapping claim ids between predictions and golds");
    return out;
}

int cmd_eval(const std::string& preds_path, const std::string& claims_path,
             const std::string& out_path) {
    const auto preds_by_id = read_jsonl_by_id(preds_path);
    const auto claims = read_claims(claims_path);
    std::vector<VeracityLabel> golds;
    const auto preds = aligned_predictions(preds_by_id, claims, golds);
    const auto metrics = compute_metrics(preds, golds);
    const std::string text = metrics_to_json(metrics).dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
    return 0;
}

int cmd_compare(const GlobalOptions& g, const std::string& a_path, const std::string& b_path,
                const std::string& claims_path, const std::string& which_metric) {
    const auto cfg = g.config();
    const auto claims = read_claims(claims_path);
    const auto a_by_id = read_jsonl_by_id(a_path);
    const auto b_by_id = read_jsonl_by_id(b_path);
    std::vector<VeracityLabel> golds;
    const auto preds_a = aligned_predictions(a_by_id, claims, golds);
    std::vector<VeracityLabel> golds_b;
    const auto preds_b = aligned_predictions(b_by_id, claims, golds_b);
    if (golds.size() != golds_b.size()) {
        throw ManifestMismatch("prediction files cover different claim sets");
    }

    std::vector<Metric> metrics;
    if (which_metric.empty() || which_metric == "all") {
        metrics = {Metric::Accuracy, Metric::SoftAccuracy, Metric::MacroF1, Metric::Mae};
    } else {
        metrics = {metric_from_name(which_metric)};
    }
    json out;
    out["n"] = golds.size();
    out["resamples"] = cfg.bootstrap_resamples;
    for (const auto m : metrics) {
        json entry;
        entry["a"] = evaluate_metric(m, preds_a, golds);
        entry["b"] = evaluate_metric(m, preds_b, golds);
        entry["p_value"] =
            paired_bootstrap(preds_a, preds_b, golds, m, cfg.bootstrap_resamples, cfg.rng_seed);
        out[std::string(metric_name(m))] = entry;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_stability(const std::string& a_dir, const std::string& b_dir) {
    const auto a = load_run(a_dir);
    const auto b = load_run(b_dir);
    const auto report = stability_analysis(a, b);
    json out;
    json per_claim = json::object();
    for (const auto& [id, jac] : report.per_claim) per_claim[id] = jac;
    out["per_claim"] = per_claim;
    out["mean_jaccard"] = report.mean;
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fact-checking pipeline over time-constrained web evidence"};
    app.require_subcommand(1);

    GlobalOptions g;
    std::string claims_path, out_path, docs_path, spans_path, summaries_path;
    std::string preds_a, preds_b, which_metric, mode_name, run_a, run_b;
    bool dump_spans = false;

    auto* decompose = app.add_subcommand("decompose", "generate yes/no subquestions per claim");
    decompose->add_option("--claims", claims_path, "claims file (JSONL)")->required();
    decompose->add_option("--out", out_path, "output file (default stdout)");
    add_global_options(decompose, g);

    auto* retrieve = app.add_subcommand("retrieve", "first-stage constrained web retrieval");
    retrieve->add_option("--claims", claims_path)->required();
    retrieve->add_option("--out", out_path);
    add_global_options(retrieve, g);

    auto* spans =
        app.add_subcommand("spans", "second-stage span ranking over retrieved documents");
    spans->add_option("--claims", claims_path)->required();
    spans->add_option("--docs", docs_path, "retrieve output (JSONL)")->required();
    spans->add_option("--out", out_path);
    spans->add_flag("--dump", dump_spans, "dump ranked spans (doc_id, start, end, score)");
    add_global_options(spans, g);

    auto* summarize = app.add_subcommand("summarize", "claim-focused per-document summaries");
    summarize->add_option("--claims", claims_path)->required();
    summarize->add_option("--spans", spans_path, "spans output (JSONL)")->required();
    summarize->add_option("--out", out_path);
    add_global_options(summarize, g);

    auto* classify = app.add_subcommand("classify", "predict veracity labels");
    classify->add_option("--claims", claims_path)->required();
    classify->add_option("--summaries", summaries_path, "summarize output (JSONL)");
    classify->add_option("--mode", mode_name, "input mode (claim_only|justification|summaries)");
    classify->add_option("--out", out_path);
    add_global_options(classify, g);

    auto* run = app.add_subcommand("run", "end-to-end pipeline over a claims file");
    run->add_option("--claims", claims_path)->required();
    run->add_option("--out", out_path, "run output directory");
    add_global_options(run, g);

    auto* eval = app.add_subcommand("eval", "score predictions against gold labels");
    eval->add_option("--preds", preds_a)->required();
    eval->add_option("--claims", claims_path)->required();
    eval->add_option("--out", out_path);

    auto* compare =
        app.add_subcommand("compare", "paired bootstrap between two prediction files");
    compare->add_option("--a", preds_a)->required();
    compare->add_option("--b", preds_b)->required();
    compare->add_option("--claims", claims_path)->required();
    compare->add_option("--metric", which_metric, "accuracy|soft_accuracy|macro_f1|mae|all");
    add_global_options(compare, g);

    auto* stability = app.add_subcommand("stability", "URL overlap between two run directories");
    stability->add_option("--a", run_a)->required();
    stability->add_option("--b", run_b)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (decompose->parsed()) return cmd_decompose(g, claims_path, out_path);
        if (retrieve->parsed()) return cmd_retrieve(g, claims_path, out_path);
        if (spans->parsed()) return cmd_spans(g, claims_path, docs_path, out_path, dump_spans);
        if (summarize->parsed()) return cmd_summarize(g, claims_path, spans_path, out_path);
        if (classify->parsed()) {
            return cmd_classify(g, claims_path, summaries_path, mode_name, out_path);
        }
        if (run->parsed()) return cmd_run(g, claims_path, out_path);
        if (eval->parsed()) return cmd_eval(preds_a, claims_path, out_path);
        if (compare->parsed()) return cmd_compare(g, preds_a, preds_b, claims_path, which_metric);
        if (stability->parsed()) return cmd_stability(run_a, run_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
