#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kpforge::assembly {

struct MinHashParams {
    int shingle_size = 5;   // word n-grams
    int num_hashes = 128;
    int band_count = 32;    // must divide num_hashes
    double jaccard_threshold = 0.7;

    void validate() const;  // throws std::invalid_argument
};

// Word-shingle set hashes; a text shorter than the shingle size contributes
// one whole-text shingle so short items still compare.
std::vector<uint64_t> shingle_hashes(std::string_view text, int shingle_size);

// num_hashes min-hash components over the shingle set.
std::vector<uint64_t> minhash_signature(const std::vector<uint64_t>& shingles, int num_hashes);

double estimate_jaccard(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

struct DedupDrop {
    size_t dropped_index = 0;
    size_t kept_index = 0;
    double estimated_jaccard = 0.0;
};

struct DedupResult {
    std::vector<size_t> kept;        // input order preserved
    std::vector<DedupDrop> dropped;
};

// LSH banding proposes candidate pairs; pairs whose estimated Jaccard reaches
// the threshold collapse onto the earliest member by stable input order. An
// item with no candidate pair is always kept.
DedupResult minhash_dedup_texts(const std::vector<std::string>& texts, const MinHashParams& params);

}  // namespace kpforge::assembly
