#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace kpforge::model {

using json = nlohmann::json;

enum class Source { math, gsm8k, other };

std::string to_string(Source s);
Source source_from_string(const std::string& s);

// A question/solution pair from a seed corpus; the unit of knowledge
// extraction.
struct SeedProblem {
    std::string id;
    Source source = Source::other;
    std::string question;
    std::string solution;
    std::map<std::string, std::string> meta;

    json to_json() const;
    static SeedProblem from_json(const json& j);
};

// One topic plus the key points a labeling completion attached to it.
struct TopicAnnotation {
    std::string topic_label;              // e.g. "Geometry - Circles"
    std::vector<std::string> key_points;  // non-empty, no exact duplicates
};

// Canonicalized annotation: the raw label replaced by a topic-index id.
struct CanonicalAnnotation {
    int canonical_topic_id = -1;
    std::vector<std::string> key_points;
};

// A seed problem annotated with canonical topics and key points.
struct MPKPRecord {
    SeedProblem problem;
    std::vector<CanonicalAnnotation> annotations;

    json to_json() const;
    static MPKPRecord from_json(const json& j);
};

// Strict loader: enforces unique ids and non-blank question/solution,
// reporting the offending line.
std::vector<SeedProblem> load_seed_corpus(const std::filesystem::path& path, Source default_source);

std::vector<MPKPRecord> load_mpkp(const std::filesystem::path& path);
void save_mpkp(const std::filesystem::path& path, const std::vector<MPKPRecord>& records);

}  // namespace kpforge::model
