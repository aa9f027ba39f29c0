#include "model/records.hpp"

#include <set>

#include "util/errors.hpp"
#include "util/jsonl.hpp"
#include "util/text.hpp"

namespace kpforge::model {

std::string to_string(Source s) {
    switch (s) {
        case Source::math: return "MATH";
        case Source::gsm8k: return "GSM8K";
        default: return "other";
    }
}

Source source_from_string(const std::string& s) {
    if (s == "MATH") return Source::math;
    if (s == "GSM8K") return Source::gsm8k;
    return Source::other;
}

json SeedProblem::to_json() const {
    json j;
    j["id"] = id;
    j["source"] = to_string(source);
    j["question"] = question;
    j["solution"] = solution;
    j["meta"] = meta;
    return j;
}

SeedProblem SeedProblem::from_json(const json& j) {
    SeedProblem p;
    p.id = j.at("id").get<std::string>();
    p.source = source_from_string(j.value("source", "other"));
    p.question = j.at("question").get<std::string>();
    p.solution = j.at("solution").get<std::string>();
    if (j.contains("meta")) p.meta = j.at("meta").get<std::map<std::string, std::string>>();
    return p;
}

json MPKPRecord::to_json() const {
    json j = problem.to_json();
    json anns = json::array();
    for (const auto& a : annotations) {
        anns.push_back({{"canonical_topic_id", a.canonical_topic_id}, {"key_points", a.key_points}});
    }
    j["annotations"] = std::move(anns);
    return j;
}

MPKPRecord MPKPRecord::from_json(const json& j) {
    MPKPRecord r;
    r.problem = SeedProblem::from_json(j);
    for (const auto& a : j.at("annotations")) {
        CanonicalAnnotation ann;
        ann.canonical_topic_id = a.at("canonical_topic_id").get<int>();
        ann.key_points = a.at("key_points").get<std::vector<std::string>>();
        r.annotations.push_back(std::move(ann));
    }
    if (r.annotations.empty())
        throw std::runtime_error("MPKP record " + r.problem.id + " has no annotations");
    return r;
}

std::vector<SeedProblem> load_seed_corpus(const std::filesystem::path& path, Source default_source) {
    std::vector<SeedProblem> seeds;
    std::set<std::string> ids;
    jsonl::for_each_line(path, [&](const json& j, size_t lineno) {
        SeedProblem p = SeedProblem::from_json(j);
        if (!j.contains("source")) p.source = default_source;
        auto where = path.string() + ":" + std::to_string(lineno);
        if (text::trim(p.question).empty()) throw ConfigInvalid(where + ": empty question");
        if (text::trim(p.solution).empty()) throw ConfigInvalid(where + ": empty solution");
        if (!ids.insert(p.id).second) throw ConfigInvalid(where + ": duplicate id '" + p.id + "'");
        seeds.push_back(std::move(p));
    });
    return seeds;
}

std::vector<MPKPRecord> load_mpkp(const std::filesystem::path& path) {
    std::vector<MPKPRecord> records;
    jsonl::for_each_line(path, [&](const json& j, size_t) { records.push_back(MPKPRecord::from_json(j)); });
    return records;
}

void save_mpkp(const std::filesystem::path& path, const std::vector<MPKPRecord>& records) {
    std::vector<json> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(r.to_json());
    jsonl::write_file_atomic(path, rows);
}

}  // namespace kpforge::model
