// SPDX-License-Identifier: Apache-2.0
#include "exprkit/model/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "exprkit/error.hpp"

namespace exprkit {

namespace {
constexpr std::uint32_t kSupportedVersion = 1;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  nlohmann::json j;
  j["format_version"] = ckpt.format_version;
  j["config_hash"] = ckpt.config_hash;
  j["config_text"] = ckpt.config_text;
  j["iteration"] = ckpt.iteration;
  j["pretext"] = ckpt.pretext;
  j["weights_origin"] = ckpt.weights_origin;
  j["backbone"] = ckpt.backbone_name;
  j["input_resolution"] = ckpt.input_resolution;
  j["head"] = {{"n_conv", ckpt.head.n_conv},
               {"kernel", ckpt.head.kernel},
               {"stride", ckpt.head.stride},
               {"hidden_channels", ckpt.head.hidden_channels},
               {"n_classes", ckpt.head.n_classes}};
  j["norm_mean"] = ckpt.norm_mean;
  j["norm_std"] = ckpt.norm_std;

  nlohmann::json arrays = nlohmann::json::object();
  for (const auto& [name, array] : ckpt.arrays) {
    std::vector<std::uint8_t> bytes(array.data.size() * sizeof(float));
    std::memcpy(bytes.data(), array.data.data(), bytes.size());
    arrays[name] = {{"shape", array.shape}, {"data", nlohmann::json::binary(std::move(bytes))}};
  }
  j["arrays"] = std::move(arrays);

  const std::vector<std::uint8_t> packed = nlohmann::json::to_msgpack(j);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write checkpoint: " + path.string());
  out.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size()));
  if (!out) throw IOError("short write on checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot read checkpoint: " + path.string());
  std::vector<std::uint8_t> packed((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::from_msgpack(packed);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint " + path.string() + ": " + e.what());
  }

  Checkpoint ckpt;
  try {
    ckpt.format_version = j.at("format_version").get<std::uint32_t>();
    if (ckpt.format_version != kSupportedVersion)
      throw FormatError("unsupported checkpoint version " + std::to_string(ckpt.format_version));
    ckpt.config_hash = j.at("config_hash").get<std::string>();
    ckpt.config_text = j.at("config_text").get<std::string>();
    ckpt.iteration = j.at("iteration").get<std::uint64_t>();
    ckpt.pretext = j.at("pretext").get<std::string>();
    ckpt.weights_origin = j.at("weights_origin").get<std::string>();
    ckpt.backbone_name = j.at("backbone").get<std::string>();
    ckpt.input_resolution = j.at("input_resolution").get<int>();
    const auto& h = j.at("head");
    ckpt.head.n_conv = h.at("n_conv").get<int>();
    ckpt.head.kernel = h.at("kernel").get<int>();
    ckpt.head.stride = h.at("stride").get<int>();
    ckpt.head.hidden_channels = h.at("hidden_channels").get<int>();
    ckpt.head.n_classes = h.at("n_classes").get<int>();
    ckpt.norm_mean = j.at("norm_mean").get<std::array<float, 3>>();
    ckpt.norm_std = j.at("norm_std").get<std::array<float, 3>>();
    for (const auto& [name, entry] : j.at("arrays").items()) {
      ArrayF32 array;
      array.shape = entry.at("shape").get<std::vector<int>>();
      const auto& bin = entry.at("data").get_binary();
      if (bin.size() % sizeof(float) != 0)
        throw FormatError("array '" + name + "' has a truncated payload");
      array.data.resize(bin.size() / sizeof(float));
      std::memcpy(array.data.data(), bin.data(), bin.size());
      ckpt.arrays.emplace(name, std::move(array));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint " + path.string() + ": " + e.what());
  }
  return ckpt;
}

} // namespace exprkit
