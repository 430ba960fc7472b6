#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace linknet {

// Reproducibility record of one pipeline run: content digests of the
// configuration and every input file, plus per-stage record counts.
struct RunManifest {
    std::string toolkit_version;
    std::string config_digest;
    std::map<std::string, std::string> input_digests;  // path -> digest
    std::int64_t generated_at_ms = 0;
    std::map<std::string, std::int64_t> counts;        // stage -> records

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

void save_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

extern const char* kToolkitVersion;

}  // namespace linknet
