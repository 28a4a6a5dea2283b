#include "fdam/manifest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "fdam/tensor_io.hpp"

namespace fdam {

std::string sha256_file(const std::string& path) {
    const std::string bytes = read_text_file(path);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error(path + ": SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string write_manifest(const std::string& out_dir, const std::string& command,
                           std::uint64_t seed, const nlohmann::json& config_snapshot,
                           const std::vector<std::string>& output_files) {
    nlohmann::json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["command"] = command;
    manifest["seed"] = seed;
    manifest["config"] = config_snapshot;
    nlohmann::json outputs = nlohmann::json::array();
    for (const std::string& name : output_files) {
        nlohmann::json entry;
        entry["path"] = name;
        entry["sha256"] = sha256_file(out_dir + "/" + name);
        outputs.push_back(entry);
    }
    manifest["outputs"] = outputs;
    const std::string path = out_dir + "/manifest.json";
    write_text_file(path, manifest.dump(2) + "\n");
    return path;
}

}  // namespace fdam
