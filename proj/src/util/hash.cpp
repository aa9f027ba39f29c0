#include "util/hash.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace kpforge::hash {

std::string digest_hex(std::string_view payload) {
    uint64_t lo = fnv1a(payload);
    uint64_t hi = fnv1a(payload, 0x9ae16a3b2f90404full);
    hi = mix(hi ^ lo);
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return std::string(buf, 32);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for digest: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return digest_hex(data);
}

}  // namespace kpforge::hash
