#pragma once

#include <optional>
#include <string>
#include <vector>

#include "factcheck/date.hpp"
#include "factcheck/model.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

// ============================================================================
// Retrieval constraints. The temporal constraint restricts evidence to pages
// published strictly before the claim's statement date; the site constraint
// drops fact-checking sites, fact-check-like URLs and unscrapable media.
// PolitiFact is the label source of the dataset and is excluded in every
// mode.
// ============================================================================

struct ConstraintSet {
    bool temporal = false;
    std::optional<Date> cutoff;  // claim statement date when temporal is on

    bool site = false;
    std::vector<std::string> domain_rules;     // host suffix match
    std::vector<std::string> substring_rules;  // URL substring match
    bool drop_undated = false;                 // strict mode: drop documents without a date
};

// Fact-checking outlets filtered under the site constraint. Path-bearing
// entries act as URL substring rules, bare hosts as domain rules.
inline const std::vector<std::string>& default_blocklist_lines() {
    static const std::vector<std::string> lines = {
        "www.politifact.com",
        "www.snopes.com",
        "www.factcheck.org",
        "www.washingtonpost.com/news/fact-checker/",
        "www.apnews.com/hub/ap-fact-check",
        "www.fullfact.org",
        "www.reuters.com/fact-check",
        "fact-check",
        "factcheck",
    };
    return lines;
}

namespace detail {

inline std::string strip_www(std::string_view host) {
    return std::string(starts_with(host, "www.") ? host.substr(4) : host);
}

}  // namespace detail

// One rule per line; '#' comments and blank lines ignored. A line with a '/'
// or without a '.' is a substring rule, otherwise a domain rule.
inline void add_blocklist_lines(ConstraintSet& cs, const std::vector<std::string>& lines) {
    for (const auto& raw : lines) {
        const std::string line = to_lower(trim(raw));
        if (line.empty() || line[0] == '#') continue;
        if (line.find('/') != std::string::npos || line.find('.') == std::string::npos) {
            std::string rule = line;
            if (starts_with(rule, "www.")) rule = rule.substr(4);
            cs.substring_rules.push_back(rule);
        } else {
            cs.domain_rules.push_back(detail::strip_www(line));
        }
    }
}

inline void load_blocklist(ConstraintSet& cs, const std::filesystem::path& path) {
    add_blocklist_lines(cs, split_lines(read_text_file(path)));
}

inline ConstraintSet default_constraints(bool temporal, bool site, std::optional<Date> cutoff) {
    ConstraintSet cs;
    cs.temporal = temporal;
    cs.cutoff = cutoff;
    cs.site = site;
    add_blocklist_lines(cs, default_blocklist_lines());
    return cs;
}

// Host portion of an http(s) URL, lowercased.
inline std::string url_host(std::string_view url) {
    std::string u = to_lower(url);
    std::size_t pos = 0;
    const std::size_t scheme = u.find("://");
    if (scheme != std::string::npos) {
        pos = scheme + 3;
    } else if (u.find(' ') != std::string::npos || u.empty()) {
        throw MalformedUrl("not a URL: " + std::string(url));
    }
    const std::size_t end = u.find_first_of("/?#", pos);
    std::string host = u.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    const std::size_t at = host.rfind('@');
    if (at != std::string::npos) host = host.substr(at + 1);
    const std::size_t colon = host.find(':');
    if (colon != std::string::npos) host = host.substr(0, colon);
    if (host.empty() || host.find(' ') != std::string::npos) {
        throw MalformedUrl("not a URL: " + std::string(url));
    }
    return host;
}

inline bool host_matches(std::string_view host, std::string_view rule) {
    const std::string h = detail::strip_www(host);
    return h == rule || ends_with(h, "." + std::string(rule));
}

// URLs pointing at PDFs or video resources; scraping these never yields text.
inline bool is_pdf_or_video_url(std::string_view url) {
    std::string u = to_lower(url);
    const std::size_t q = u.find_first_of("?#");
    const std::string path = q == std::string::npos ? u : u.substr(0, q);
    for (std::string_view ext : {".pdf", ".mp4", ".avi", ".mov", ".wmv", ".mkv", ".webm", ".flv"}) {
        if (ends_with(path, ext)) return true;
    }
    const std::string host = url_host(u);
    if (host_matches(host, "youtube.com") || host_matches(host, "youtu.be") ||
        host_matches(host, "vimeo.com")) {
        return true;
    }
    return false;
}

// Dataset-source exclusion, applied in every retrieval mode.
inline bool is_always_excluded(std::string_view url) {
    return host_matches(url_host(url), "politifact.com");
}

// True iff the URL survives the site constraint.
inline bool apply_site_constraint(std::string_view url, const ConstraintSet& cs) {
    const std::string host = url_host(url);
    if (host_matches(host, "politifact.com")) return false;
    const std::string lowered = to_lower(url);
    for (const auto& rule : cs.domain_rules) {
        if (host_matches(host, rule)) return false;
    }
    for (const auto& rule : cs.substring_rules) {
        if (contains(lowered, rule)) return false;
    }
    if (is_pdf_or_video_url(url)) return false;
    return true;
}

// True iff the document survives the temporal constraint: its publication
// date, when known, must be strictly before the cutoff. Undated documents
// are kept (and flagged by the caller) unless strict mode drops them.
inline bool apply_temporal_constraint(const RetrievedDocument& doc, const Date& cutoff) {
    return !doc.published || *doc.published < cutoff;
}

// Combined URL-level decision used by first-stage retrieval, with the reason
// for a rejection.
enum class UrlVerdict { Keep, KeepUndated, SiteFiltered, TemporalFiltered, UndatedDropped };

inline UrlVerdict judge_url(std::string_view url, const std::optional<Date>& published,
                            const ConstraintSet& cs) {
    if (cs.site) {
        if (!apply_site_constraint(url, cs)) return UrlVerdict::SiteFiltered;
    } else if (is_always_excluded(url)) {
        return UrlVerdict::SiteFiltered;
    }
    if (cs.temporal && cs.cutoff) {
        if (published && *published >= *cs.cutoff) return UrlVerdict::TemporalFiltered;
        if (!published) return cs.drop_undated ? UrlVerdict::UndatedDropped : UrlVerdict::KeepUndated;
    }
    return UrlVerdict::Keep;
}

}  // namespace factcheck
