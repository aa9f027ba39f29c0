#include "util/jsonl.hpp"

#include <unistd.h>

#include <fstream>
#include <stdexcept>

#include "util/hash.hpp"

namespace kpforge::jsonl {

namespace fs = std::filesystem;

std::vector<json> read_file(const fs::path& path) {
    std::vector<json> rows;
    for_each_line(path, [&](const json& j, size_t) { rows.push_back(j); });
    return rows;
}

void for_each_line(const fs::path& path, const std::function<void(const json&, size_t)>& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": invalid JSON line");
        fn(j, lineno);
    }
}

void write_file_atomic(const fs::path& path, const std::vector<json>& rows) {
    std::string body;
    for (const auto& row : rows) {
        body += row.dump();
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp-" + hash::digest_hex(path.string() + std::to_string(::getpid())).substr(0, 8);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace kpforge::jsonl
