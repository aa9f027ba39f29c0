#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kpforge::hash {

// 64-bit FNV-1a. Stable across platforms and builds, which matters because
// cache digests and manifest digests are persisted and compared across runs.
inline uint64_t fnv1a(std::string_view s, uint64_t seed = 0xcbf29ce484222325ull) {
    uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// splitmix64 finalizer; good avalanche for derived seeds and minhash salts.
inline uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// 128-bit digest rendered as 32 hex chars: two FNV lanes with distinct seeds.
std::string digest_hex(std::string_view payload);

// Digest of a file's raw bytes; throws std::runtime_error if unreadable.
std::string file_digest(const std::string& path);

}  // namespace kpforge::hash
