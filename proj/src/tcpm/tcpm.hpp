#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "model/records.hpp"
#include "util/rng.hpp"

namespace kpforge::tcpm {

// Topic-level co-occurrence matrix: symmetric, log10(count+1) normalized.
// Immutable after build; the normalization is applied exactly once.
class Tcpm {
public:
    static Tcpm build(const std::vector<model::MPKPRecord>& mpkp, size_t n_topics);

    size_t size() const { return n_; }
    double at(size_t i, size_t j) const { return values_[i * n_ + j]; }
    std::vector<double> row(size_t i) const;
    std::vector<double> row_sums() const;
    bool normalized() const { return normalized_; }

    nlohmann::json to_json() const;
    static Tcpm from_json(const nlohmann::json& j);
    std::string to_heatmap_csv(const std::vector<std::string>& labels) const;

private:
    Tcpm() = default;
    size_t n_ = 0;
    std::vector<double> values_;   // row-major
    std::vector<int> topic_ids_;   // canonical ids, 0..N-1 after renumbering
    bool normalized_ = false;
};

// Weights for the next topic draw at step n = |selected|+1:
//   n = 1: row sums;  n = 2: row of the first pick;
//   n > 2: element-wise product of the two most recent picks' rows.
// Entries at already-selected indices are zeroed (without replacement).
struct SamplingVector {
    std::vector<double> weights;
    int step = 1;
    std::vector<size_t> selected;
};

// Throws DegenerateDistribution when every weight is zero after masking.
SamplingVector sampling_vector(const Tcpm& tcpm, const std::vector<size_t>& selected);

// Sequential proportional draws; a fully-degenerate draw restarts from
// scratch up to 10 times before erroring.
std::vector<size_t> sample_topics(const Tcpm& tcpm, int k, Rng& rng);

struct PracticeEntry {
    int topic_id = -1;
    std::vector<std::string> key_points;
    model::SeedProblem exemplar;
};

// 2-3 distinct topics, each with the key points and problem of one uniformly
// chosen MPKP record containing that topic.
struct PracticeSet {
    std::vector<PracticeEntry> entries;
};

PracticeSet sample_practice_set(const std::vector<model::MPKPRecord>& mpkp,
                                const std::vector<size_t>& topics, Rng& rng);

}  // namespace kpforge::tcpm
