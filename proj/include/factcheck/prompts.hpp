#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "factcheck/util.hpp"

namespace factcheck {

// Plain-text templates with {name} placeholders. Unknown placeholders are left
// in place so a malformed template is visible in the rendered prompt.
inline std::string render_template(std::string_view tpl,
                                   const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        const std::size_t open = tpl.find('{', pos);
        if (open == std::string_view::npos) {
            out += tpl.substr(pos);
            break;
        }
        const std::size_t close = tpl.find('}', open);
        if (close == std::string_view::npos) {
            out += tpl.substr(pos);
            break;
        }
        out += tpl.substr(pos, open - pos);
        const std::string name(tpl.substr(open + 1, close - open - 1));
        auto it = vars.find(name);
        if (it != vars.end()) {
            out += it->second;
        } else {
            out += tpl.substr(open, close - open + 1);
        }
        pos = close + 1;
    }
    return out;
}

// Shipped defaults; a templates directory can override any of them by file
// name (decompose.txt, summarize_zero_shot.txt, summarize_few_shot.txt).
struct PromptTemplates {
    std::string decompose;
    std::string summarize_zero_shot;
    std::string summarize_few_shot;

    static PromptTemplates defaults();

    static PromptTemplates from_directory(const std::filesystem::path& dir) {
        PromptTemplates t = defaults();
        auto maybe = [&](const char* file, std::string& slot) {
            const auto path = dir / file;
            if (std::filesystem::exists(path)) slot = read_text_file(path);
        };
        maybe("decompose.txt", t.decompose);
        maybe("summarize_zero_shot.txt", t.summarize_zero_shot);
        maybe("summarize_few_shot.txt", t.summarize_few_shot);
        return t;
    }
};

namespace detail {

inline constexpr std::string_view kDecomposeTemplate = R"(Break each claim into simple yes/no questions that together would let a fact-checker decide whether the claim is true. Cover every explicit and implicit part of the claim. Write one question per line, numbered.

{exemplars}Claim: {claim}
Speaker: {speaker}
Venue: {venue}
Date: {date}
Questions:
)";

inline constexpr std::string_view kSummarizeZeroShotTemplate = R"(Summarize the document below with respect to the claim. Keep only information that bears on checking the claim, and do not make any judgments about the stance of the document toward the claim. If the document contains nothing that bears on the claim, answer exactly: The document is not relevant to checking the claim.

Claim: {claim}
Document: {document}
Summary:
)";

inline constexpr std::string_view kSummarizeFewShotTemplate = R"(Summarize each document with respect to its claim. Keep only information that bears on checking the claim, and do not make any judgments about the stance of the document toward the claim. If the document contains nothing that bears on the claim, answer exactly: The document is not relevant to checking the claim.

{exemplars}Claim: {claim}
Document: {document}
Summary:
)";

}  // namespace detail

inline PromptTemplates PromptTemplates::defaults() {
    return {std::string(detail::kDecomposeTemplate),
            std::string(detail::kSummarizeZeroShotTemplate),
            std::string(detail::kSummarizeFewShotTemplate)};
}

}  // namespace factcheck
