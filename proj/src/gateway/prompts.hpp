#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace kpforge::gateway {

// The pipeline's fixed prompt templates, shipped as data files (one per
// template, UTF-8). Placeholders are written {snake_case}; substitution is a
// single verbatim pass, so LaTeX braces in values survive untouched.
struct PromptTemplate {
    std::string name;
    std::string body;
};

inline constexpr const char* kTemplateNames[] = {
    "knowledge_extraction", "question_generation", "question_evaluation",
    "answering_v1",         "answering_v2",        "answering_v3",
    "answering_v4",         "answering_v5",        "rephrasing",
};

class PromptCatalog {
public:
    // Loads every template from <dir>/<name>.txt; verifies the five
    // answering variants are pairwise distinct.
    static PromptCatalog load(const std::filesystem::path& dir);

    const PromptTemplate& get(std::string_view name) const;
    bool has(std::string_view name) const;

private:
    std::map<std::string, PromptTemplate, std::less<>> templates_;
};

// Substitutes every {placeholder}; throws MissingBinding naming the first
// unbound placeholder. No escaping is applied to values.
std::string render_prompt(const PromptTemplate& tpl, const std::map<std::string, std::string>& bindings);

// Placeholders found in a template body, in order of first occurrence.
std::vector<std::string> template_placeholders(std::string_view body);

}  // namespace kpforge::gateway
