#include "rpfcone/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rpfcone/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rpfcone {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a_file(const std::string& path) { return fnv1a(read_text_file(path)); }

void write_text_file(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw ValidationError("CSV row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
    write_text_file(path, out.str());
}

std::string emit_manifest(const std::string& dir, const std::string& config_text,
                          std::uint64_t seed) {
    if (!fs::is_directory(dir)) throw IoError("report directory does not exist: " + dir);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());

    json artifacts = json::array();
    for (const std::string& name : names) {
        const std::string bytes = read_text_file((fs::path(dir) / name).string());
        artifacts.push_back(
            {{"name", name}, {"bytes", bytes.size()}, {"fnv1a", fnv1a(bytes)}});
    }
    json manifest = {{"artifacts", artifacts},
                     {"config_fnv1a", fnv1a(config_text)},
                     {"seed", seed},
                     {"format_version", 1}};
    const std::string path = (fs::path(dir) / "manifest.json").string();
    write_text_file(path, manifest.dump(2) + "\n");
    return path;
}

std::vector<std::string> verify_manifest(const std::string& dir) {
    const std::string path = (fs::path(dir) / "manifest.json").string();
    json manifest = json::parse(read_text_file(path));
    std::vector<std::string> problems;
    for (const auto& art : manifest.at("artifacts")) {
        const std::string name = art.at("name").get<std::string>();
        const fs::path file = fs::path(dir) / name;
        if (!fs::is_regular_file(file)) {
            problems.push_back(name + ": missing");
            continue;
        }
        const std::string bytes = read_text_file(file.string());
        if (fnv1a(bytes) != art.at("fnv1a").get<std::uint64_t>())
            problems.push_back(name + ": checksum mismatch");
        else if (bytes.size() != art.at("bytes").get<std::size_t>())
            problems.push_back(name + ": size mismatch");
    }
    return problems;
}

}  // namespace rpfcone
