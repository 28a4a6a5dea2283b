#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fdam {

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

// Writes <out_dir>/manifest.json describing a finished run: artifact version,
// command name, effective seed, verbatim config snapshot, and each output
// file (path relative to out_dir) with its content hash. Returns the manifest
// path.
std::string write_manifest(const std::string& out_dir, const std::string& command,
                           std::uint64_t seed, const nlohmann::json& config_snapshot,
                           const std::vector<std::string>& output_files);

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace fdam
