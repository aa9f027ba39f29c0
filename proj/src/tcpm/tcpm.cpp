#include "tcpm/tcpm.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "util/errors.hpp"

namespace kpforge::tcpm {

using nlohmann::json;

Tcpm Tcpm::build(const std::vector<model::MPKPRecord>& mpkp, size_t n_topics) {
    std::vector<long long> counts(n_topics * n_topics, 0);

    for (const auto& record : mpkp) {
        // topic -> key-point count within this record
        std::map<size_t, size_t> topics;
        for (const auto& ann : record.annotations) {
            if (ann.canonical_topic_id < 0 || static_cast<size_t>(ann.canonical_topic_id) >= n_topics)
                throw TopicOutOfRange("topic " + std::to_string(ann.canonical_topic_id) + " in record " +
                                      record.problem.id);
            topics[static_cast<size_t>(ann.canonical_topic_id)] += ann.key_points.size();
        }
        for (const auto& [i, kp_i] : topics) {
            for (const auto& [j, kp_j] : topics) {
                if (i != j) counts[i * n_topics + j] += 1;
            }
            if (kp_i > 5) counts[i * n_topics + i] += 1;
        }
    }

    Tcpm t;
    t.n_ = n_topics;
    t.values_.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i)
        t.values_[i] = std::log10(static_cast<double>(counts[i]) + 1.0);
    t.topic_ids_.resize(n_topics);
    for (size_t i = 0; i < n_topics; ++i) t.topic_ids_[i] = static_cast<int>(i);
    t.normalized_ = true;
    return t;
}

std::vector<double> Tcpm::row(size_t i) const {
    return std::vector<double>(values_.begin() + static_cast<ptrdiff_t>(i * n_),
                               values_.begin() + static_cast<ptrdiff_t>((i + 1) * n_));
}

std::vector<double> Tcpm::row_sums() const {
    std::vector<double> sums(n_, 0.0);
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j) sums[i] += at(i, j);
    return sums;
}

json Tcpm::to_json() const {
    json j;
    j["n_topics"] = n_;
    j["topic_ids"] = topic_ids_;
    j["matrix"] = values_;  // row-major
    return j;
}

Tcpm Tcpm::from_json(const json& j) {
    Tcpm t;
    t.n_ = j.at("n_topics").get<size_t>();
    t.topic_ids_ = j.at("topic_ids").get<std::vector<int>>();
    t.values_ = j.at("matrix").get<std::vector<double>>();
    if (t.values_.size() != t.n_ * t.n_) throw ManifestCorrupt("tcpm matrix size mismatch");
    t.normalized_ = true;
    return t;
}

std::string Tcpm::to_heatmap_csv(const std::vector<std::string>& labels) const {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "topic";
    for (size_t j = 0; j < n_; ++j) out << "," << (j < labels.size() ? quote(labels[j]) : std::to_string(j));
    out << "\n";
    out.precision(17);
    for (size_t i = 0; i < n_; ++i) {
        out << (i < labels.size() ? quote(labels[i]) : std::to_string(i));
        for (size_t j = 0; j < n_; ++j) out << "," << at(i, j);
        out << "\n";
    }
    return out.str();
}

SamplingVector sampling_vector(const Tcpm& tcpm, const std::vector<size_t>& selected) {
    std::set<size_t> chosen(selected.begin(), selected.end());
    if (chosen.size() != selected.size()) throw std::invalid_argument("selected topics must be distinct");
    for (size_t s : selected)
        if (s >= tcpm.size()) throw TopicOutOfRange("selected index " + std::to_string(s));

    SamplingVector v;
    v.step = static_cast<int>(selected.size()) + 1;
    v.selected = selected;

    if (selected.empty()) {
        v.weights = tcpm.row_sums();
    } else if (selected.size() == 1) {
        v.weights = tcpm.row(selected[0]);
    } else {
        const size_t last = selected[selected.size() - 1];
        const size_t prev = selected[selected.size() - 2];
        std::vector<double> a = tcpm.row(last);
        std::vector<double> b = tcpm.row(prev);
        v.weights.resize(tcpm.size());
        for (size_t i = 0; i < tcpm.size(); ++i) v.weights[i] = a[i] * b[i];
    }
    for (size_t s : selected) v.weights[s] = 0.0;

    bool any = false;
    for (double w : v.weights)
        if (w > 0.0) any = true;
    if (!any) throw DegenerateDistribution("all sampling weights are zero at step " + std::to_string(v.step));
    return v;
}

std::vector<size_t> sample_topics(const Tcpm& tcpm, int k, Rng& rng) {
    if (k < 1 || static_cast<size_t>(k) > tcpm.size())
        throw std::invalid_argument("sample_topics: k out of range");

    constexpr int kMaxRestarts = 10;
    for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
        std::vector<size_t> selected;
        try {
            for (int step = 0; step < k; ++step) {
                SamplingVector v = sampling_vector(tcpm, selected);
                selected.push_back(rng.weighted_index(v.weights));
            }
            return selected;
        } catch (const DegenerateDistribution&) {
            if (attempt == kMaxRestarts) throw;
        }
    }
    throw DegenerateDistribution("sample_topics: restart budget exhausted");
}

PracticeSet sample_practice_set(const std::vector<model::MPKPRecord>& mpkp,
                                const std::vector<size_t>& topics, Rng& rng) {
    PracticeSet set;
    for (size_t topic : topics) {
        std::vector<const model::MPKPRecord*> holders;
        for (const auto& record : mpkp) {
            for (const auto& ann : record.annotations) {
                if (ann.canonical_topic_id == static_cast<int>(topic)) {
                    holders.push_back(&record);
                    break;
                }
            }
        }
        if (holders.empty()) throw EmptyTopic("no MPKP record contains topic " + std::to_string(topic));
        const model::MPKPRecord& pick = *holders[rng.next_index(holders.size())];

        PracticeEntry entry;
        entry.topic_id = static_cast<int>(topic);
        entry.exemplar = pick.problem;
        for (const auto& ann : pick.annotations)
            if (ann.canonical_topic_id == static_cast<int>(topic)) entry.key_points = ann.key_points;
        set.entries.push_back(std::move(entry));
    }
    return set;
}

}  // namespace kpforge::tcpm
