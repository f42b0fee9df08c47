#include "btfcli/manifest.hpp"

#include "btfcli/digest.hpp"

#include "btf/error.hpp"

#include <fstream>

namespace btfcli {

namespace fs = std::filesystem;

Json input_record(const fs::path& path) {
  return Json{{"path", path.string()}, {"sha256", sha256_file(path)}};
}

Json manifest_header(const std::string& kind, const std::string& command, std::uint64_t seed) {
  return Json{{"format", "btfcount-manifest"},
              {"version", kManifestVersion},
              {"kind", kind},
              {"command", command},
              {"seed", seed}};
}

Json load_manifest(const fs::path& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw btf::SchemaError("cannot read manifest " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw btf::SchemaError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "btfcount-manifest") {
    throw btf::SchemaError(path.string() + ": not a btfcount manifest");
  }
  if (j.value("version", 0) != kManifestVersion) {
    throw btf::SchemaError(path.string() + ": unsupported manifest version");
  }
  if (!kind.empty() && j.value("kind", "") != kind) {
    throw btf::SchemaError(path.string() + ": expected a '" + kind + "' manifest, found '" +
                           j.value("kind", "") + "'");
  }
  return j;
}

void save_json(const fs::path& path, const Json& json) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw btf::SchemaError("cannot write " + path.string());
  out << json.dump(2) << '\n';
}

const Json& require(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) {
    throw btf::SchemaError("manifest missing field '" + key + "'");
  }
  return j.at(key);
}

void verify_input(const Json& record, const fs::path& path) {
  const auto expected = require(record, "sha256").get<std::string>();
  if (sha256_file(path) != expected) {
    throw btf::SchemaError(path.string() + " does not match the digest recorded in the manifest");
  }
}

Json to_json(const btf::DataSplit& s) {
  return Json{{"pre_training", s.pre_training_len},
              {"training", s.training_len},
              {"test", s.test_len},
              {"max_lag", s.max_lag}};
}

btf::DataSplit split_from_json(const Json& j) {
  const auto pre = require(j, "pre_training").get<std::size_t>();
  const auto train = require(j, "training").get<std::size_t>();
  const auto test = require(j, "test").get<std::size_t>();
  const auto q = require(j, "max_lag").get<std::size_t>();
  return btf::make_split(pre + train + test, pre, train, q);
}

Json to_json(const btf::Hyperparams& h) {
  Json j{{"gamma", h.gamma}, {"phi", h.phi}};
  j["a"] = h.a ? Json(*h.a) : Json(nullptr);
  j["b"] = h.b;
  j["alpha0"] = h.alpha0;
  j["truncation"] = h.truncation;
  j["cell_cap"] = h.cell_cap;
  return j;
}

btf::Hyperparams hyper_from_json(const Json& j) {
  btf::Hyperparams h;
  h.gamma = require(j, "gamma").get<double>();
  h.phi = require(j, "phi").get<double>();
  if (const auto& a = require(j, "a"); !a.is_null()) h.a = a.get<double>();
  h.b = require(j, "b").get<double>();
  h.alpha0 = require(j, "alpha0").get<double>();
  h.truncation = require(j, "truncation").get<std::size_t>();
  h.cell_cap = require(j, "cell_cap").get<std::uint64_t>();
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw btf::SchemaError(e.what());
  }
  return h;
}

Json to_json(const btf::Partition& p) { return Json{{"k", p.k}, {"assign", p.assign}}; }

btf::Partition partition_from_json(const Json& j) {
  btf::Partition p;
  p.k = require(j, "k").get<std::vector<int>>();
  p.assign = require(j, "assign").get<std::vector<std::vector<int>>>();
  if (p.k.size() != p.assign.size()) throw btf::SchemaError("partition k and assign differ");
  try {
    p.validate();
  } catch (const std::logic_error& e) {
    throw btf::SchemaError(std::string("invalid partition: ") + e.what());
  }
  return p;
}

Json to_json(const std::vector<btf::Predictor>& predictors) {
  Json out = Json::array();
  for (const auto& p : predictors) {
    out.push_back(Json{{"series", p.series}, {"lag", p.lag}, {"levels", p.levels}});
  }
  return out;
}

} // namespace btfcli
