// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace exprkit {

// Every CLI run writes exactly one manifest into its output directory.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string toolkit_version;
  double wall_clock_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest);

} // namespace exprkit
