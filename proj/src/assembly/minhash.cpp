#include "assembly/minhash.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "util/hash.hpp"
#include "util/text.hpp"

namespace kpforge::assembly {

void MinHashParams::validate() const {
    if (shingle_size < 1) throw std::invalid_argument("shingle_size must be >= 1");
    if (num_hashes < 1) throw std::invalid_argument("num_hashes must be >= 1");
    if (band_count < 1 || num_hashes % band_count != 0)
        throw std::invalid_argument("num_hashes must be divisible by band_count");
    if (!(jaccard_threshold > 0.0 && jaccard_threshold < 1.0))
        throw std::invalid_argument("jaccard_threshold must be in (0, 1)");
}

std::vector<uint64_t> shingle_hashes(std::string_view text_in, int shingle_size) {
    auto words = text::split_words(text::normalize_ws(text_in));
    std::set<uint64_t> shingles;
    if (words.size() < static_cast<size_t>(shingle_size)) {
        std::string whole;
        for (const auto& w : words) {
            if (!whole.empty()) whole += ' ';
            whole += w;
        }
        shingles.insert(hash::fnv1a(whole));
    } else {
        for (size_t i = 0; i + shingle_size <= words.size(); ++i) {
            std::string joined;
            for (size_t j = 0; j < static_cast<size_t>(shingle_size); ++j) {
                if (j) joined += ' ';
                joined += words[i + j];
            }
            shingles.insert(hash::fnv1a(joined));
        }
    }
    return std::vector<uint64_t>(shingles.begin(), shingles.end());
}

std::vector<uint64_t> minhash_signature(const std::vector<uint64_t>& shingles, int num_hashes) {
    std::vector<uint64_t> sig(static_cast<size_t>(num_hashes), std::numeric_limits<uint64_t>::max());
    for (uint64_t s : shingles) {
        uint64_t h = s;
        for (int i = 0; i < num_hashes; ++i) {
            // per-function salt via iterated mixing
            h = hash::mix(h + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(i + 1));
            sig[static_cast<size_t>(i)] = std::min(sig[static_cast<size_t>(i)], h);
        }
    }
    return sig;
}

double estimate_jaccard(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("signature size mismatch");
    size_t equal = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] == b[i]) ++equal;
    return static_cast<double>(equal) / static_cast<double>(a.size());
}

namespace {

struct DisjointSet {
    std::vector<size_t> parent;
    explicit DisjointSet(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), size_t{0}); }
    size_t find(size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    // smaller index becomes the root so the earliest example survives
    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;
        else parent[a] = b;
    }
};

}  // namespace

DedupResult minhash_dedup_texts(const std::vector<std::string>& texts, const MinHashParams& params) {
    params.validate();
    const size_t n = texts.size();
    const int rows = params.num_hashes / params.band_count;

    std::vector<std::vector<uint64_t>> signatures(n);
    for (size_t i = 0; i < n; ++i)
        signatures[i] = minhash_signature(shingle_hashes(texts[i], params.shingle_size), params.num_hashes);

    // banding: items sharing any band bucket become candidate pairs
    std::set<std::pair<size_t, size_t>> candidates;
    for (int band = 0; band < params.band_count; ++band) {
        std::unordered_map<uint64_t, std::vector<size_t>> buckets;
        for (size_t i = 0; i < n; ++i) {
            uint64_t key = 0xcbf29ce484222325ull;
            for (int r = 0; r < rows; ++r)
                key = hash::mix(key ^ signatures[i][static_cast<size_t>(band * rows + r)]);
            buckets[key].push_back(i);
        }
        for (const auto& [key, members] : buckets) {
            for (size_t a = 0; a < members.size(); ++a)
                for (size_t b = a + 1; b < members.size(); ++b)
                    candidates.insert({members[a], members[b]});
        }
    }

    DisjointSet ds(n);
    std::vector<DedupDrop> hits;
    for (const auto& [a, b] : candidates) {
        double est = estimate_jaccard(signatures[a], signatures[b]);
        if (est >= params.jaccard_threshold) {
            ds.unite(a, b);
            hits.push_back({b, a, est});
        }
    }

    DedupResult result;
    for (size_t i = 0; i < n; ++i) {
        if (ds.find(i) == i) {
            result.kept.push_back(i);
        } else {
            double est = 0.0;
            for (const auto& h : hits)
                if (h.dropped_index == i) est = std::max(est, h.estimated_jaccard);
            result.dropped.push_back({i, ds.find(i), est});
        }
    }
    return result;
}

}  // namespace kpforge::assembly
