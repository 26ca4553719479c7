// SPDX-License-Identifier: Apache-2.0
#include "exprkit/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "exprkit/error.hpp"

namespace exprkit {

void write_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(run_dir, ec);
  if (ec) throw IOError("cannot create " + run_dir.string());
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["toolkit_version"] = manifest.toolkit_version;
  j["wall_clock_seconds"] = manifest.wall_clock_seconds;
  const std::filesystem::path path = run_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

} // namespace exprkit
