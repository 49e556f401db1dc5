#pragma once

#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "factcheck/cache.hpp"
#include "factcheck/config.hpp"
#include "factcheck/constraints.hpp"
#include "factcheck/extract.hpp"
#include "factcheck/model.hpp"
#include "factcheck/parallel.hpp"
#include "factcheck/search.hpp"

namespace factcheck {

// ============================================================================
// First-stage retrieval: poll the search backend per query until the document
// quota survives the constraints, deduplicate URLs across queries (first
// query wins provenance), then scrape and extract the survivors.
// ============================================================================

struct SearchQuery {
    std::string text;
    bool is_claim = false;  // provenance recorded as claim-as-query
};

struct QueryLog {
    std::string query;
    std::vector<std::string> kept_urls;  // post-constraint, pre-dedup
    int site_filtered = 0;
    int temporal_filtered = 0;
    int undated_dropped = 0;
};

struct RetrievalResult {
    std::vector<RetrievedDocument> documents;  // unique URLs, query order then rank order
    std::vector<QueryLog> query_logs;
    std::vector<std::string> warnings;
};

struct RetrievalOptions {
    ConstraintSet constraints;
    int docs_per_query = 10;
    int max_result_pages = 5;
    int workers = 1;
    std::string fetch_date = "fixture";  // cache key component
    bool keep_raw_html = false;
};

inline RetrievalOptions retrieval_options_from_config(const PipelineConfig& cfg,
                                                      const Date& claim_date) {
    RetrievalOptions opts;
    opts.constraints =
        default_constraints(cfg.temporal_constraint, cfg.site_constraint,
                            cfg.temporal_constraint ? std::optional<Date>(claim_date)
                                                    : std::nullopt);
    opts.constraints.drop_undated = cfg.drop_undated;
    opts.docs_per_query = cfg.docs_per_query;
    opts.max_result_pages = cfg.max_result_pages;
    opts.workers = cfg.workers;
    return opts;
}

// Survivors of one query: backend pages are polled until the quota is met or
// results run out.
inline QueryLog collect_query_urls(const SearchQuery& query, SearchBackend& backend,
                                   const RetrievalOptions& opts,
                                   std::vector<SearchHit>& hits_out) {
    QueryLog log;
    log.query = query.is_claim ? std::string(kClaimAsQuery) : query.text;
    const std::optional<Date> before =
        opts.constraints.temporal ? opts.constraints.cutoff : std::nullopt;
    std::unordered_set<std::string> seen;
    for (int page = 0; page < opts.max_result_pages; ++page) {
        std::vector<SearchHit> hits;
        try {
            hits = backend.search(query.text, opts.docs_per_query, page * opts.docs_per_query,
                                  before);
        } catch (const SearchBackendError&) {
            throw;
        } catch (const std::exception& e) {
            throw SearchBackendError("query \"" + query.text + "\": " + e.what());
        }
        if (hits.empty()) break;
        for (auto& hit : hits) {
            if (!seen.insert(hit.url).second) continue;
            UrlVerdict verdict;
            try {
                verdict = judge_url(hit.url, hit.published, opts.constraints);
            } catch (const MalformedUrl&) {
                ++log.site_filtered;
                continue;
            }
            switch (verdict) {
                case UrlVerdict::SiteFiltered: ++log.site_filtered; continue;
                case UrlVerdict::TemporalFiltered: ++log.temporal_filtered; continue;
                case UrlVerdict::UndatedDropped: ++log.undated_dropped; continue;
                case UrlVerdict::Keep:
                case UrlVerdict::KeepUndated: break;
            }
            log.kept_urls.push_back(hit.url);
            hits_out.push_back(hit);
            if (static_cast<int>(log.kept_urls.size()) >= opts.docs_per_query) return log;
        }
        if (static_cast<int>(hits.size()) < opts.docs_per_query) break;  // exhausted
    }
    return log;
}

// Fetch one surviving URL (cache first) and extract its text.
inline RetrievedDocument fetch_document(const SearchHit& hit, const std::string& source_query,
                                        SearchBackend& backend, DocumentCache* cache,
                                        const RetrievalOptions& opts) {
    RetrievedDocument doc;
    doc.url = hit.url;
    doc.title = hit.title;
    doc.published = hit.published;
    doc.source_query = source_query;
    doc.undated = !hit.published.has_value();

    if (cache) {
        if (auto entry = cache->lookup(hit.url, opts.fetch_date)) {
            doc.fetch_status = (entry->scrape_failed || entry->text.empty())
                                   ? FetchStatus::ScrapeFailed
                                   : FetchStatus::Ok;
            if (!entry->text.empty()) doc.text = entry->text;
            if (doc.title.empty()) doc.title = entry->title;
            if (!doc.published && entry->published) {
                doc.published = entry->published;
                doc.undated = false;
            }
            if (opts.keep_raw_html && !entry->body.empty()) doc.raw_html = entry->body;
            return doc;
        }
    }

    auto page = backend.fetch_page(hit.url);
    if (!page) {
        doc.fetch_status = FetchStatus::ScrapeFailed;
    } else {
        if (doc.title.empty()) doc.title = page->title;
        if (!doc.published && page->published) {
            doc.published = page->published;
            doc.undated = false;
        }
        if (opts.keep_raw_html) doc.raw_html = page->body;
        try {
            doc.text = extract_text(page->body, page->content_type);
            doc.fetch_status = FetchStatus::Ok;
        } catch (const ScrapeFailed&) {
            doc.fetch_status = FetchStatus::ScrapeFailed;
        }
    }

    if (cache) {
        DocumentCache::Entry entry;
        entry.url = hit.url;
        entry.fetch_date = opts.fetch_date;
        entry.content_type = page ? page->content_type : "";
        entry.body = page ? page->body : "";
        entry.text = doc.text.value_or("");
        entry.title = doc.title;
        entry.published = doc.published;
        entry.scrape_failed = doc.fetch_status != FetchStatus::Ok;
        cache->store(entry);
    }
    return doc;
}

// Whole first stage for one claim's query set.
inline RetrievalResult search_evidence(const std::vector<SearchQuery>& queries,
                                       SearchBackend& backend, DocumentCache* cache,
                                       const RetrievalOptions& opts) {
    if (queries.empty()) throw ConfigError("search_evidence requires >= 1 query");

    RetrievalResult result;
    std::vector<std::vector<SearchHit>> per_query_hits(queries.size());
    result.query_logs.resize(queries.size());

    parallel_for(queries.size(), opts.workers, [&](std::size_t i) {
        result.query_logs[i] = collect_query_urls(queries[i], backend, opts, per_query_hits[i]);
    });

    // URL-level dedup across queries, first query wins provenance.
    std::unordered_set<std::string> seen;
    std::vector<std::pair<SearchHit, std::string>> to_fetch;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        for (const auto& hit : per_query_hits[i]) {
            if (!seen.insert(hit.url).second) continue;
            to_fetch.emplace_back(hit, result.query_logs[i].query);
        }
        if (per_query_hits[i].empty()) {
            result.warnings.push_back("no documents survived for query \"" +
                                      result.query_logs[i].query + "\"");
        }
    }

    result.documents.resize(to_fetch.size());
    parallel_for(to_fetch.size(), opts.workers, [&](std::size_t i) {
        result.documents[i] =
            fetch_document(to_fetch[i].first, to_fetch[i].second, backend, cache, opts);
    });

    for (const auto& doc : result.documents) {
        if (doc.fetch_status != FetchStatus::Ok) {
            result.warnings.push_back("scrape failed: " + doc.url);
        } else if (doc.undated) {
            result.warnings.push_back("kept undated document: " + doc.url);
        }
    }
    return result;
}

// |a n b| / |a u b|, defined as 1 when both sets are empty.
inline double jaccard_urls(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& url : a) inter += b.count(url);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace factcheck
