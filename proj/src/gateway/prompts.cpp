#include "gateway/prompts.hpp"

#include <cctype>
#include <set>

#include "util/errors.hpp"
#include "util/jsonl.hpp"

namespace kpforge::gateway {

namespace {

// {name} is a placeholder only when name is [a-z][a-z0-9_]*; everything else
// ({}, {\frac...}, {5 \choose 2}) is literal prompt text.
bool scan_placeholder(std::string_view body, size_t at, std::string* name, size_t* end) {
    if (body[at] != '{') return false;
    size_t i = at + 1;
    if (i >= body.size() || !(std::islower(static_cast<unsigned char>(body[i])))) return false;
    std::string out;
    while (i < body.size() && (std::islower(static_cast<unsigned char>(body[i])) ||
                               std::isdigit(static_cast<unsigned char>(body[i])) || body[i] == '_')) {
        out.push_back(body[i]);
        ++i;
    }
    if (i >= body.size() || body[i] != '}') return false;
    *name = std::move(out);
    *end = i + 1;
    return true;
}

}  // namespace

std::vector<std::string> template_placeholders(std::string_view body) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (size_t i = 0; i < body.size(); ++i) {
        std::string name;
        size_t end = 0;
        if (scan_placeholder(body, i, &name, &end)) {
            if (seen.insert(name).second) names.push_back(name);
            i = end - 1;
        }
    }
    return names;
}

std::string render_prompt(const PromptTemplate& tpl, const std::map<std::string, std::string>& bindings) {
    std::string out;
    out.reserve(tpl.body.size());
    const std::string_view body = tpl.body;
    for (size_t i = 0; i < body.size();) {
        std::string name;
        size_t end = 0;
        if (scan_placeholder(body, i, &name, &end)) {
            auto it = bindings.find(name);
            if (it == bindings.end()) throw MissingBinding(name);
            out += it->second;
            i = end;
        } else {
            out.push_back(body[i]);
            ++i;
        }
    }
    return out;
}

PromptCatalog PromptCatalog::load(const std::filesystem::path& dir) {
    PromptCatalog catalog;
    for (const char* name : kTemplateNames) {
        auto path = dir / (std::string(name) + ".txt");
        if (!std::filesystem::exists(path)) throw ConfigInvalid("missing prompt template: " + path.string());
        catalog.templates_[name] = PromptTemplate{name, jsonl::read_text_file(path)};
    }
    std::set<std::string> bodies;
    for (int v = 1; v <= 5; ++v) {
        const auto& t = catalog.get("answering_v" + std::to_string(v));
        if (!bodies.insert(t.body).second)
            throw ConfigInvalid("answering prompt variants must be distinct: " + t.name);
    }
    return catalog;
}

const PromptTemplate& PromptCatalog::get(std::string_view name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigInvalid("unknown prompt template: " + std::string(name));
    return it->second;
}

bool PromptCatalog::has(std::string_view name) const { return templates_.count(name) > 0; }

}  // namespace kpforge::gateway
