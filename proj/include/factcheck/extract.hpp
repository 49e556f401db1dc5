#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factcheck/errors.hpp"
#include "factcheck/span_retrieval.hpp"
#include "factcheck/util.hpp"

namespace factcheck {

// ============================================================================
// Page text extraction. The primary extractor keeps main-content blocks
// (paragraph-dense, low link density, outside nav/footer chrome); a
// strip-all-markup fallback takes over when the primary yields almost
// nothing. Roughly a third of real-world URLs cannot be scraped at all;
// those surface as ScrapeFailed and the pipeline moves on.
// ============================================================================

namespace htmldetail {

inline std::string decode_entities(std::string_view text) {
    static const std::pair<std::string_view, std::string_view> table[] = {
        {"&amp;", "&"}, {"&lt;", "<"},    {"&gt;", ">"},    {"&quot;", "\""},
        {"&#39;", "'"}, {"&apos;", "'"},  {"&nbsp;", " "},  {"&mdash;", "-"},
        {"&ndash;", "-"}, {"&rsquo;", "'"}, {"&lsquo;", "'"},
    };
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '&') {
            bool matched = false;
            for (const auto& [from, to] : table) {
                if (text.substr(i, from.size()) == from) {
                    out += to;
                    i += from.size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
        }
        out += text[i++];
    }
    return out;
}

inline std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out += c;
        }
    }
    return out;
}

struct TextBlock {
    std::string text;
    std::size_t link_chars = 0;
    bool boilerplate = false;  // inside nav/header/footer/aside/form
    bool paragraph = false;    // emitted by a <p> or heading element
};

inline std::string tag_name(std::string_view tag_body) {
    std::size_t i = 0;
    if (i < tag_body.size() && tag_body[i] == '/') ++i;
    std::size_t j = i;
    while (j < tag_body.size() && (std::isalnum(static_cast<unsigned char>(tag_body[j])))) ++j;
    return to_lower(tag_body.substr(i, j - i));
}

inline std::size_t ifind(std::string_view haystack, std::string_view lowercase_needle,
                         std::size_t from) {
    if (lowercase_needle.empty() || haystack.size() < lowercase_needle.size()) {
        return std::string_view::npos;
    }
    for (std::size_t i = from; i + lowercase_needle.size() <= haystack.size(); ++i) {
        std::size_t j = 0;
        while (j < lowercase_needle.size() &&
               std::tolower(static_cast<unsigned char>(haystack[i + j])) == lowercase_needle[j]) {
            ++j;
        }
        if (j == lowercase_needle.size()) return i;
    }
    return std::string_view::npos;
}

// Single pass over the markup collecting text blocks split at block-level
// tags, with enough context (chrome nesting, link spans) to score them.
inline std::vector<TextBlock> collect_blocks(std::string_view html) {
    std::vector<TextBlock> blocks;
    TextBlock cur;
    int chrome_depth = 0;  // nav/header/footer/aside/form nesting
    int link_depth = 0;
    bool in_paragraph = false;

    auto flush = [&] {
        cur.text = collapse_whitespace(decode_entities(cur.text));
        if (!cur.text.empty()) blocks.push_back(cur);
        cur = TextBlock{};
        cur.boilerplate = chrome_depth > 0;
        cur.paragraph = in_paragraph;
    };

    std::size_t i = 0;
    while (i < html.size()) {
        if (html[i] != '<') {
            cur.text += html[i];
            if (link_depth > 0) ++cur.link_chars;
            ++i;
            continue;
        }
        if (html.substr(i, 4) == "<!--") {
            const std::size_t end = html.find("-->", i);
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        const std::size_t close = html.find('>', i);
        if (close == std::string_view::npos) break;
        const std::string_view body = html.substr(i + 1, close - i - 1);
        const std::string name = tag_name(body);
        const bool closing = !body.empty() && body[0] == '/';
        i = close + 1;

        if (!closing && (name == "script" || name == "style" || name == "noscript" ||
                         name == "svg" || name == "head" || name == "iframe")) {
            const std::size_t end = ifind(html, "</" + name, i);
            if (end == std::string_view::npos) {
                i = html.size();
            } else {
                const std::size_t gt = html.find('>', end);
                i = gt == std::string_view::npos ? html.size() : gt + 1;
            }
            continue;
        }

        static const std::vector<std::string_view> kChrome = {"nav",   "header", "footer",
                                                              "aside", "form",   "menu"};
        static const std::vector<std::string_view> kBlocks = {
            "p",  "div", "section", "article", "main", "li",     "ul",  "ol",  "table", "tr",
            "td", "th",  "h1",      "h2",      "h3",   "h4",     "h5",  "h6",  "br",
            "blockquote", "figure", "figcaption", "body", "html", "title"};

        if (name == "a") {
            link_depth += closing ? -1 : 1;
            if (link_depth < 0) link_depth = 0;
            continue;
        }
        const bool is_chrome =
            std::find(kChrome.begin(), kChrome.end(), name) != kChrome.end();
        const bool is_block =
            is_chrome || std::find(kBlocks.begin(), kBlocks.end(), name) != kBlocks.end();
        if (is_block) {
            const bool heading = name.size() == 2 && name[0] == 'h' && name[1] >= '1' &&
                                 name[1] <= '6';
            if (name == "p" || heading || name == "title") in_paragraph = !closing;
            flush();
            if (is_chrome) {
                chrome_depth += closing ? -1 : 1;
                if (chrome_depth < 0) chrome_depth = 0;
                cur.boilerplate = chrome_depth > 0;
            }
        } else {
            cur.text += ' ';  // inline tag boundary still separates words
        }
    }
    flush();
    return blocks;
}

}  // namespace htmldetail

// Fallback extractor: strip every tag, script and style, decode entities,
// collapse whitespace.
inline std::string html_strip_all(std::string_view html) {
    std::string joined;
    for (const auto& block : htmldetail::collect_blocks(html)) {
        if (!joined.empty()) joined += ' ';
        joined += block.text;
    }
    return joined;
}

// Primary extractor: keep substantial low-link-density blocks outside page
// chrome. Headline-ish paragraph blocks are kept at a lower word bar so short
// ledes survive.
inline std::string extract_main_content(std::string_view html) {
    std::string out;
    for (const auto& block : htmldetail::collect_blocks(html)) {
        if (block.boilerplate) continue;
        const std::size_t words = tokenize(block.text).size();
        if (words == 0) continue;
        const double link_ratio =
            static_cast<double>(block.link_chars) / static_cast<double>(block.text.size());
        const std::size_t min_words = block.paragraph ? 3 : 10;
        if (words < min_words || link_ratio > 0.4) continue;
        if (!out.empty()) out += '\n';
        out += block.text;
    }
    return out;
}

inline bool looks_binary(std::string_view bytes) {
    if (bytes.empty()) return true;
    std::size_t control = 0;
    const std::size_t probe = std::min<std::size_t>(bytes.size(), 4096);
    for (std::size_t i = 0; i < probe; ++i) {
        const unsigned char c = static_cast<unsigned char>(bytes[i]);
        if (c == 0) return true;
        if (c < 9 || (c > 13 && c < 32)) ++control;
    }
    return control * 10 > probe;
}

// Main entry point: primary extractor first, markup-stripping fallback when
// the primary finds fewer than 50 words. PDFs, video payloads and binary
// junk raise ScrapeFailed.
inline std::string extract_text(std::string_view bytes, std::string_view content_type) {
    const std::string ct = to_lower(content_type);
    if (contains(ct, "application/pdf") || starts_with(ct, "video/") ||
        starts_with(bytes, "%PDF-")) {
        throw ScrapeFailed("unscrapable media type: " +
                           (ct.empty() ? std::string("(binary)") : ct));
    }
    if (looks_binary(bytes)) throw ScrapeFailed("content is not text");

    std::string text = extract_main_content(bytes);
    if (tokenize(text).size() < 50) {
        text = html_strip_all(bytes);
    }
    text = trim(text);
    if (text.empty()) throw ScrapeFailed("no text content");
    return text;
}

}  // namespace factcheck
