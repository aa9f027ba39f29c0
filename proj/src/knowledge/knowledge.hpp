#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gateway/gateway.hpp"
#include "model/records.hpp"
#include "model/tags.hpp"

namespace kpforge::knowledge {

// Canonicalized topic space: one entry per cluster, plus the raw-label map.
struct TopicEntry {
    std::string canonical_label;           // label of the founding member
    std::vector<double> centroid;          // mean of member centroids
    std::vector<std::string> member_labels;
    int kp_count = 0;                      // distinct key points across members
};

struct TopicIndex {
    std::vector<TopicEntry> topics;
    std::map<std::string, int> label_to_id;

    int id_for(const std::string& raw_label) const;  // throws UnknownLabel
    size_t size() const { return topics.size(); }

    nlohmann::json topics_json() const;     // [{id,label,members,kp_count}]
    nlohmann::json centroids_json() const;  // [[...], ...] sidecar
    static TopicIndex from_json(const nlohmann::json& topics, const nlohmann::json& centroids);
};

struct AnnotatedSeed {
    std::string seed_id;
    std::vector<model::TopicAnnotation> annotations;
};

struct ExtractReject {
    std::string seed_id;
    std::string reason;
    std::string raw;
};

struct ExtractionResult {
    std::vector<AnnotatedSeed> annotated;
    std::vector<ExtractReject> rejects;  // failures are reported, never dropped silently
};

// One labeling call per seed; unparseable completions land in rejects.
ExtractionResult extract_knowledge(const std::vector<model::SeedProblem>& seeds, gateway::Gateway& gw,
                                   const gateway::PromptCatalog& prompts);

// Component-wise arithmetic mean; throws DimensionMismatch on ragged input.
std::vector<double> topic_centroid(const std::vector<std::vector<double>>& kp_vectors);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

struct RawTopic {
    std::string label;
    std::vector<double> centroid;
    int kp_count = 0;
};

// Greedy agglomerative single-link merge: topics in descending KP-count order
// (ties by label) join the first cluster whose centroid reaches sim_threshold,
// else found a new cluster. Cluster centroids are recomputed as member means
// after each merge; the canonical label is the founding member's.
TopicIndex cluster_topics(const std::vector<RawTopic>& raw_topics, double sim_threshold);

struct MpkpBuildResult {
    std::vector<model::MPKPRecord> records;
    TopicIndex index;  // pruned and compactly renumbered
    std::vector<ExtractReject> rejects;
};

// Canonicalizes raw labels to topic ids, merges same-topic annotations within
// a record, prunes clusters with fewer than min_cluster_kps distinct key
// points, and drops (reporting) records left without annotations.
MpkpBuildResult build_mpkp(const std::vector<model::SeedProblem>& seeds,
                           const std::vector<AnnotatedSeed>& annotations, const TopicIndex& index,
                           int min_cluster_kps);

}  // namespace kpforge::knowledge
