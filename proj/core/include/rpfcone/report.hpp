#pragma once

// Report plumbing: deterministic text/CSV artifacts, content digests, and the
// per-directory manifest used to detect corrupted or stale outputs.

#include <cstdint>
#include <string>
#include <vector>

namespace rpfcone {

// FNV-1a digest of a byte string / of a file's contents.
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Fixed header schema; every row must match the header width.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Writes <dir>/manifest.json listing every artifact (name, size, digest)
// plus the config hash and seed; returns the manifest path.
std::string emit_manifest(const std::string& dir, const std::string& config_text,
                          std::uint64_t seed);

// Re-digests the artifacts listed in <dir>/manifest.json; returns one message
// per mismatch or missing file (empty means clean).
std::vector<std::string> verify_manifest(const std::string& dir);

}  // namespace rpfcone
