#include "linknet/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "linknet/errors.hpp"

namespace linknet {

const char* kToolkitVersion = "0.1.0";

std::string RunManifest::to_json() const {
    nlohmann::ordered_json doc;
    doc["toolkit_version"] = toolkit_version;
    doc["config_digest"] = config_digest;
    doc["input_digests"] = input_digests;
    doc["generated_at_ms"] = generated_at_ms;
    doc["counts"] = counts;
    return doc.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid manifest JSON: ") + e.what());
    }
    RunManifest manifest;
    manifest.toolkit_version = doc.value("toolkit_version", "");
    manifest.config_digest = doc.value("config_digest", "");
    manifest.input_digests =
        doc.value("input_digests", std::map<std::string, std::string>{});
    manifest.generated_at_ms = doc.value("generated_at_ms", std::int64_t{0});
    manifest.counts = doc.value("counts", std::map<std::string, std::int64_t>{});
    return manifest;
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest: " + path);
    out << manifest.to_json();
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read manifest: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return RunManifest::from_json(buf.str());
}

}  // namespace linknet
