#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "factcheck/config.hpp"

namespace factcheck {

// ============================================================================
// Second-stage retrieval: slide a word window over every retrieved document,
// score windows with BM25 against the stage-two queries, expand the winners
// with surrounding context, merge overlaps, and rank documents by their best
// span.
// ============================================================================

struct Chunk {
    std::string doc_id;
    int start_word = 0;
    int end_word = 0;  // exclusive
    std::vector<std::string> tokens;

    int length() const { return end_word - start_word; }
};

struct EvidenceSpan {
    std::string doc_id;
    int start_word = 0;
    int end_word = 0;  // exclusive
    double score = 0.0;
    bool expanded = false;
};

// Lowercase word tokens, split on any non-alphanumeric run. No stemming, no
// stopword removal.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Windows of at most `window` tokens starting at multiples of `stride`.
// Generation stops once a window's end reaches the end of the text, so the
// final chunk may be shorter; every token index is covered by some chunk.
inline std::vector<Chunk> chunk_words(const std::string& doc_id,
                                      const std::vector<std::string>& tokens, int window,
                                      int stride) {
    if (window < 1 || stride < 1 || stride > window) {
        throw ConfigError("chunk_words requires 1 <= stride <= window");
    }
    std::vector<Chunk> chunks;
    const int n = static_cast<int>(tokens.size());
    for (int start = 0; start < n; start += stride) {
        Chunk c;
        c.doc_id = doc_id;
        c.start_word = start;
        c.end_word = std::min(start + window, n);
        c.tokens.assign(tokens.begin() + start, tokens.begin() + c.end_word);
        chunks.push_back(std::move(c));
        if (chunks.back().end_word == n) break;
    }
    return chunks;
}

// Per-claim index over all chunks of all retrieved documents.
class CorpusStats {
public:
    CorpusStats() = default;

    explicit CorpusStats(const std::vector<Chunk>& chunks) {
        n_ = static_cast<int>(chunks.size());
        std::size_t total_len = 0;
        for (const auto& c : chunks) {
            total_len += c.tokens.size();
            std::unordered_set<std::string> seen;
            for (const auto& t : c.tokens) {
                if (seen.insert(t).second) ++df_[t];
            }
        }
        avg_len_ = n_ > 0 ? static_cast<double>(total_len) / n_ : 0.0;
    }

    int chunk_count() const { return n_; }
    double avg_chunk_length() const { return avg_len_; }

    int df(const std::string& term) const {
        auto it = df_.find(term);
        return it == df_.end() ? 0 : it->second;
    }

private:
    std::unordered_map<std::string, int> df_;
    double avg_len_ = 0.0;
    int n_ = 0;
};

// Okapi BM25 with a +1 inside the log so scores stay non-negative. Repeated
// query terms contribute once per occurrence.
inline double bm25_score(const std::vector<std::string>& query_tokens, const Chunk& chunk,
                         const CorpusStats& stats, double k, double b) {
    if (query_tokens.empty() || chunk.tokens.empty()) return 0.0;
    std::unordered_map<std::string, int> tf;
    for (const auto& t : chunk.tokens) ++tf[t];
    const double len_norm =
        1.0 - b + b * static_cast<double>(chunk.tokens.size()) / stats.avg_chunk_length();
    const double n = stats.chunk_count();
    double score = 0.0;
    for (const auto& q : query_tokens) {
        auto it = tf.find(q);
        if (it == tf.end()) continue;
        const double f = it->second;
        const double df = stats.df(q);
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        score += idf * (f * (k + 1.0)) / (f + k * len_norm);
    }
    return score;
}

// Deterministic ordering used everywhere spans are ranked: score descending,
// then (doc_id, start_word) ascending.
inline bool span_rank_less(const EvidenceSpan& a, const EvidenceSpan& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return a.start_word < b.start_word;
}

// Top-`keep` chunks scored against the queries; a chunk's score is its
// maximum BM25 score over the queries.
inline std::vector<EvidenceSpan> rank_spans(const std::vector<std::string>& queries,
                                            const std::vector<Chunk>& chunks,
                                            const CorpusStats& stats, int keep,
                                            double k = 1.5, double b = 0.75) {
    if (keep < 1) throw ConfigError("rank_spans requires keep >= 1");
    std::vector<std::vector<std::string>> query_tokens;
    query_tokens.reserve(queries.size());
    for (const auto& q : queries) query_tokens.push_back(tokenize(q));

    std::vector<EvidenceSpan> spans;
    spans.reserve(chunks.size());
    for (const auto& c : chunks) {
        double best = 0.0;
        for (const auto& qt : query_tokens) best = std::max(best, bm25_score(qt, c, stats, k, b));
        spans.push_back({c.doc_id, c.start_word, c.end_word, best, false});
    }
    std::sort(spans.begin(), spans.end(), span_rank_less);
    if (static_cast<int>(spans.size()) > keep) spans.resize(static_cast<std::size_t>(keep));
    return spans;
}

// Widen a span by `context` words on each side, clipped to the document.
inline EvidenceSpan expand_span(const EvidenceSpan& span, int context, int doc_len) {
    EvidenceSpan out = span;
    out.start_word = std::max(0, span.start_word - context);
    out.end_word = std::min(doc_len, span.end_word + context);
    out.expanded = true;
    return out;
}

// Union overlapping or touching spans within each document; a merged span
// keeps the maximum constituent score. Output sorted by rank order.
inline std::vector<EvidenceSpan> merge_spans(std::vector<EvidenceSpan> spans) {
    std::map<std::string, std::vector<EvidenceSpan>> by_doc;
    for (auto& s : spans) by_doc[s.doc_id].push_back(std::move(s));

    std::vector<EvidenceSpan> merged;
    for (auto& [doc_id, doc_spans] : by_doc) {
        std::sort(doc_spans.begin(), doc_spans.end(), [](const auto& a, const auto& b) {
            return a.start_word != b.start_word ? a.start_word < b.start_word
                                                : a.end_word < b.end_word;
        });
        for (const auto& s : doc_spans) {
            if (!merged.empty() && merged.back().doc_id == doc_id &&
                s.start_word <= merged.back().end_word) {
                merged.back().end_word = std::max(merged.back().end_word, s.end_word);
                merged.back().score = std::max(merged.back().score, s.score);
                merged.back().expanded = merged.back().expanded || s.expanded;
            } else {
                merged.push_back(s);
            }
        }
    }
    std::sort(merged.begin(), merged.end(), span_rank_less);
    return merged;
}

struct DocumentEvidence {
    std::string doc_id;
    std::vector<EvidenceSpan> spans;  // reading order
    double max_score = 0.0;
};

// Rank documents by their best merged span and keep the top `keep`.
inline std::vector<DocumentEvidence> select_documents(const std::vector<EvidenceSpan>& merged,
                                                      int keep) {
    if (keep < 1) throw ConfigError("select_documents requires keep >= 1");
    std::map<std::string, DocumentEvidence> by_doc;
    for (const auto& s : merged) {
        auto& d = by_doc[s.doc_id];
        d.doc_id = s.doc_id;
        d.spans.push_back(s);
        d.max_score = std::max(d.max_score, s.score);
    }
    std::vector<DocumentEvidence> docs;
    docs.reserve(by_doc.size());
    for (auto& [_, d] : by_doc) {
        std::sort(d.spans.begin(), d.spans.end(), [](const auto& a, const auto& b) {
            return a.start_word < b.start_word;
        });
        docs.push_back(std::move(d));
    }
    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
        return a.max_score != b.max_score ? a.max_score > b.max_score : a.doc_id < b.doc_id;
    });
    if (static_cast<int>(docs.size()) > keep) docs.resize(static_cast<std::size_t>(keep));
    return docs;
}

// ----------------------------------------------------------------------------
// Whole-stage driver over a set of extracted documents.

struct SpanRetrievalResult {
    std::vector<EvidenceSpan> top_spans;       // before expansion
    std::vector<EvidenceSpan> merged;          // after expansion + merging
    std::vector<DocumentEvidence> selected;    // top documents, spans in reading order
};

// doc_id -> tokenized text
using TokenizedCorpus = std::map<std::string, std::vector<std::string>>;

inline SpanRetrievalResult retrieve_spans(const std::vector<std::string>& queries,
                                          const TokenizedCorpus& docs,
                                          const PipelineConfig& cfg) {
    SpanRetrievalResult out;
    std::vector<Chunk> chunks;
    for (const auto& [doc_id, tokens] : docs) {
        if (tokens.empty()) continue;
        auto doc_chunks = chunk_words(doc_id, tokens, cfg.chunk_size, cfg.stride);
        chunks.insert(chunks.end(), std::make_move_iterator(doc_chunks.begin()),
                      std::make_move_iterator(doc_chunks.end()));
    }
    if (chunks.empty() || queries.empty()) return out;

    CorpusStats stats(chunks);
    out.top_spans = rank_spans(queries, chunks, stats, cfg.top_spans, cfg.bm25_k, cfg.bm25_b);

    std::vector<EvidenceSpan> expanded;
    expanded.reserve(out.top_spans.size());
    for (const auto& s : out.top_spans) {
        const int doc_len = static_cast<int>(docs.at(s.doc_id).size());
        expanded.push_back(expand_span(s, cfg.expansion_words, doc_len));
    }
    out.merged = merge_spans(std::move(expanded));
    out.selected = select_documents(out.merged, cfg.top_docs);
    return out;
}

// Concatenated span text of one selected document.
inline std::string evidence_text(const DocumentEvidence& doc, const TokenizedCorpus& docs) {
    const auto& tokens = docs.at(doc.doc_id);
    std::string out;
    for (const auto& s : doc.spans) {
        for (int i = s.start_word; i < s.end_word && i < static_cast<int>(tokens.size()); ++i) {
            if (!out.empty()) out += ' ';
            out += tokens[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

inline int span_word_count(const EvidenceSpan& s) { return s.end_word - s.start_word; }

}  // namespace factcheck
