#pragma once

// JSON manifests that chain the pipeline stages together.

#include "btf/core.hpp"
#include "btf/lag_selection.hpp"
#include "btf/design.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace btfcli {

using Json = nlohmann::ordered_json;

inline constexpr int kManifestVersion = 1;

/// {"path": ..., "sha256": ...}
Json input_record(const std::filesystem::path& path);

/// Header shared by every manifest.
Json manifest_header(const std::string& kind, const std::string& command, std::uint64_t seed);

Json load_manifest(const std::filesystem::path& path, const std::string& kind);
void save_json(const std::filesystem::path& path, const Json& json);

/// Returns j[key]; throws btf::SchemaError naming the key when it is absent.
const Json& require(const Json& j, const std::string& key);

/// Throws btf::SchemaError when `path` no longer hashes to the recorded digest.
void verify_input(const Json& record, const std::filesystem::path& path);

Json to_json(const btf::DataSplit& split);
btf::DataSplit split_from_json(const Json& j);

Json to_json(const btf::Hyperparams& h);
btf::Hyperparams hyper_from_json(const Json& j);

Json to_json(const btf::Partition& p);
btf::Partition partition_from_json(const Json& j);

Json to_json(const std::vector<btf::Predictor>& predictors);

} // namespace btfcli
