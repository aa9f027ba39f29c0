#include "knowledge/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "util/errors.hpp"
#include "util/text.hpp"

namespace kpforge::knowledge {

using nlohmann::json;

int TopicIndex::id_for(const std::string& raw_label) const {
    auto it = label_to_id.find(raw_label);
    if (it == label_to_id.end()) throw UnknownLabel(raw_label);
    return it->second;
}

json TopicIndex::topics_json() const {
    json arr = json::array();
    for (size_t i = 0; i < topics.size(); ++i) {
        arr.push_back({{"id", i},
                       {"label", topics[i].canonical_label},
                       {"members", topics[i].member_labels},
                       {"kp_count", topics[i].kp_count}});
    }
    return arr;
}

json TopicIndex::centroids_json() const {
    json arr = json::array();
    for (const auto& t : topics) arr.push_back(t.centroid);
    return arr;
}

TopicIndex TopicIndex::from_json(const json& topics, const json& centroids) {
    TopicIndex index;
    if (topics.size() != centroids.size()) throw ManifestCorrupt("topic/centroid arity mismatch");
    for (size_t i = 0; i < topics.size(); ++i) {
        const json& t = topics[i];
        TopicEntry entry;
        entry.canonical_label = t.at("label").get<std::string>();
        entry.member_labels = t.at("members").get<std::vector<std::string>>();
        entry.kp_count = t.at("kp_count").get<int>();
        entry.centroid = centroids[i].get<std::vector<double>>();
        for (const auto& member : entry.member_labels) index.label_to_id[member] = static_cast<int>(i);
        index.topics.push_back(std::move(entry));
    }
    return index;
}

ExtractionResult extract_knowledge(const std::vector<model::SeedProblem>& seeds, gateway::Gateway& gw,
                                   const gateway::PromptCatalog& prompts) {
    if (seeds.empty()) throw std::invalid_argument("extract_knowledge: no seeds");
    ExtractionResult result;
    const auto& tpl = prompts.get("knowledge_extraction");

    for (const auto& seed : seeds) {
        std::string rendered = gateway::render_prompt(tpl, {{"question", seed.question}, {"answer", seed.solution}});
        gateway::ChatRequest req;
        req.template_name = tpl.name;
        req.messages = {{gateway::Role::user, rendered}};
        req.temperature = 0.0;
        req.top_p = 1.0;
        req.n_samples = 1;

        std::string completion = gw.chat(req).at(0);
        try {
            auto annotations = model::parse_annotation(completion);
            if (annotations.empty()) {
                result.rejects.push_back({seed.id, "no annotation blocks", completion});
                continue;
            }
            result.annotated.push_back({seed.id, std::move(annotations)});
        } catch (const Error& e) {
            result.rejects.push_back({seed.id, e.what(), completion});
        }
    }
    return result;
}

std::vector<double> topic_centroid(const std::vector<std::vector<double>>& kp_vectors) {
    if (kp_vectors.empty()) throw std::invalid_argument("topic_centroid: empty input");
    const size_t dim = kp_vectors.front().size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& v : kp_vectors) {
        if (v.size() != dim) throw DimensionMismatch("key-point vectors disagree on dimension");
        for (size_t i = 0; i < dim; ++i) mean[i] += v[i];
    }
    for (double& x : mean) x /= static_cast<double>(kp_vectors.size());
    return mean;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("cosine over vectors of different dimension");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

TopicIndex cluster_topics(const std::vector<RawTopic>& raw_topics, double sim_threshold) {
    if (!(sim_threshold > 0.0 && sim_threshold < 1.0))
        throw std::invalid_argument("sim_threshold must be in (0, 1)");

    std::vector<size_t> order(raw_topics.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (raw_topics[a].kp_count != raw_topics[b].kp_count)
            return raw_topics[a].kp_count > raw_topics[b].kp_count;
        return raw_topics[a].label < raw_topics[b].label;
    });

    struct Cluster {
        TopicEntry entry;
        std::vector<std::vector<double>> member_centroids;
    };
    std::vector<Cluster> clusters;

    for (size_t idx : order) {
        const RawTopic& topic = raw_topics[idx];
        int joined = -1;
        for (size_t c = 0; c < clusters.size(); ++c) {
            if (cosine_similarity(clusters[c].entry.centroid, topic.centroid) >= sim_threshold) {
                joined = static_cast<int>(c);
                break;
            }
        }
        if (joined < 0) {
            Cluster fresh;
            fresh.entry.canonical_label = topic.label;
            fresh.entry.centroid = topic.centroid;
            fresh.entry.member_labels = {topic.label};
            fresh.member_centroids = {topic.centroid};
            clusters.push_back(std::move(fresh));
        } else {
            Cluster& c = clusters[static_cast<size_t>(joined)];
            c.entry.member_labels.push_back(topic.label);
            c.member_centroids.push_back(topic.centroid);
            c.entry.centroid = topic_centroid(c.member_centroids);
        }
    }

    TopicIndex index;
    for (size_t c = 0; c < clusters.size(); ++c) {
        for (const auto& member : clusters[c].entry.member_labels)
            index.label_to_id[member] = static_cast<int>(c);
        index.topics.push_back(std::move(clusters[c].entry));
    }
    return index;
}

MpkpBuildResult build_mpkp(const std::vector<model::SeedProblem>& seeds,
                           const std::vector<AnnotatedSeed>& annotations, const TopicIndex& index,
                           int min_cluster_kps) {
    std::map<std::string, const model::SeedProblem*> by_id;
    for (const auto& s : seeds) by_id[s.id] = &s;

    // Distinct key points per cluster (lowercased, whitespace collapsed).
    std::vector<std::set<std::string>> cluster_kps(index.size());
    for (const auto& ann_seed : annotations) {
        for (const auto& ann : ann_seed.annotations) {
            int id = index.id_for(ann.topic_label);
            for (const auto& kp : ann.key_points)
                cluster_kps[static_cast<size_t>(id)].insert(text::normalize_ws(kp));
        }
    }

    // Prune thin clusters and renumber the survivors compactly.
    std::vector<int> remap(index.size(), -1);
    MpkpBuildResult result;
    for (size_t i = 0; i < index.size(); ++i) {
        if (static_cast<int>(cluster_kps[i].size()) >= min_cluster_kps) {
            remap[i] = static_cast<int>(result.index.topics.size());
            TopicEntry entry = index.topics[i];
            entry.kp_count = static_cast<int>(cluster_kps[i].size());
            for (const auto& member : entry.member_labels)
                result.index.label_to_id[member] = remap[i];
            result.index.topics.push_back(std::move(entry));
        }
    }

    for (const auto& ann_seed : annotations) {
        auto seed_it = by_id.find(ann_seed.seed_id);
        if (seed_it == by_id.end()) throw UnknownLabel("seed id " + ann_seed.seed_id);

        // Merge annotations that canonicalize to the same topic id; key points
        // deduped on the normalized form, first spelling kept.
        std::map<int, std::vector<std::string>> merged;
        std::map<int, std::set<std::string>> seen;
        std::vector<int> id_order;
        for (const auto& ann : ann_seed.annotations) {
            int raw_id = index.id_for(ann.topic_label);
            int id = remap[static_cast<size_t>(raw_id)];
            if (id < 0) continue;  // pruned cluster
            if (!merged.count(id)) id_order.push_back(id);
            for (const auto& kp : ann.key_points) {
                if (seen[id].insert(text::normalize_ws(kp)).second) merged[id].push_back(kp);
            }
        }
        if (id_order.empty()) {
            result.rejects.push_back({ann_seed.seed_id, "all topics pruned", ""});
            continue;
        }
        model::MPKPRecord record;
        record.problem = *seed_it->second;
        for (int id : id_order) record.annotations.push_back({id, merged[id]});
        result.records.push_back(std::move(record));
    }
    return result;
}

}  // namespace kpforge::knowledge
