// SPDX-License-Identifier: Apache-2.0
#include "exprkit/train/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "exprkit/error.hpp"
#include "exprkit/rng.hpp"

namespace exprkit {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': bad number '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': bad integer '" + value + "'");
  return v;
}

std::array<double, 3> parse_triple(const std::string& key, const std::string& value) {
  std::array<double, 3> out{};
  std::stringstream ss(value);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw ConfigError("key '" + key + "': expected 3 comma-separated values");
    out[static_cast<std::size_t>(i++)] = parse_double(key, strip(item));
  }
  if (i != 3) throw ConfigError("key '" + key + "': expected 3 comma-separated values");
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_triple(const std::array<double, 3>& v) {
  return fmt_double(v[0]) + "," + fmt_double(v[1]) + "," + fmt_double(v[2]);
}

} // namespace

void RunConfig::validate() const {
  if (train.base_lr <= 0) throw ConfigError("base_lr must be > 0");
  if (train.total_iters < 1) throw ConfigError("total_iters must be >= 1");
  if (train.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (train.momentum < 0 || train.momentum >= 1) throw ConfigError("momentum must be in [0,1)");
  if (train.weight_decay < 0) throw ConfigError("weight_decay must be >= 0");
  if (train.freeze_k < 0 || train.freeze_k > 4) throw ConfigError("freeze_k must be in [0,4]");
  if (train.eval_every < 0) throw ConfigError("eval_every must be >= 0");
  if (train.amp != "off" && train.amp != "false" && train.amp != "0")
    throw ConfigError("amp must stay off (mixed precision is not supported)");
  if (data.temporal_stride < 1) throw ConfigError("temporal_stride must be >= 1");
  augment_config().validate();
  model.head.validate();
  for (int c = 0; c < 3; ++c)
    if (std_at(c) <= 0) throw ConfigError("pixel std must be > 0");
  if (eval.batch_size < 1) throw ConfigError("eval batch_size must be >= 1");
  if (pretrain.steps < 1) throw ConfigError("pretrain steps must be >= 1");
  if (pretrain.base_lr <= 0) throw ConfigError("pretrain base_lr must be > 0");
  if (pretrain.batch_size < 2) throw ConfigError("pretrain batch_size must be >= 2");
  if (pretrain.temperature <= 0) throw ConfigError("temperature must be > 0");
  if (pretrain.warp_magnitude < 0) throw ConfigError("warp_magnitude must be >= 0");
  if (pretrain.warp_grid < 2) throw ConfigError("warp_grid must be >= 2");
  if (pretrain.view_size < 1) throw ConfigError("view_size must be >= 1");
  if (pretrain.warp_polarity != "negative" && pretrain.warp_polarity != "positive")
    throw ConfigError("warp_polarity must be 'negative' or 'positive'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"data",
       {
           {"split", [](RunConfig& c, const std::string&, const std::string& v) { c.data.split = v; }},
           {"eval_split",
            [](RunConfig& c, const std::string&, const std::string& v) { c.data.eval_split = v; }},
           {"temporal_stride",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.data.temporal_stride = static_cast<int>(parse_int(k, v));
            }},
           {"crop_size",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.data.crop_size = static_cast<int>(parse_int(k, v));
            }},
           {"crop_padding",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.data.crop_padding = static_cast<int>(parse_int(k, v));
            }},
           {"hflip_probability",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.data.hflip_probability = parse_double(k, v);
            }},
           {"mean",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.data.mean = parse_triple(k, v);
            }},
           {"std",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.data.std = parse_triple(k, v);
            }},
       }},
      {"model",
       {
           {"backbone",
            [](RunConfig& c, const std::string&, const std::string& v) { c.model.backbone = v; }},
           {"input_resolution",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.model.input_resolution = static_cast<int>(parse_int(k, v));
            }},
           {"n_conv",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.model.head.n_conv = static_cast<int>(parse_int(k, v));
            }},
           {"kernel",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.model.head.kernel = static_cast<int>(parse_int(k, v));
            }},
           {"stride",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.model.head.stride = static_cast<int>(parse_int(k, v));
            }},
           {"hidden_channels",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.model.head.hidden_channels = static_cast<int>(parse_int(k, v));
            }},
           {"n_classes",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.model.head.n_classes = static_cast<int>(parse_int(k, v));
            }},
       }},
      {"train",
       {
           {"base_lr",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.base_lr = parse_double(k, v);
            }},
           {"total_iters",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.total_iters = static_cast<int>(parse_int(k, v));
            }},
           {"batch_size",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.batch_size = static_cast<int>(parse_int(k, v));
            }},
           {"momentum",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.momentum = parse_double(k, v);
            }},
           {"weight_decay",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.weight_decay = parse_double(k, v);
            }},
           {"freeze_k",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.freeze_k = static_cast<int>(parse_int(k, v));
            }},
           {"seed",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.seed = static_cast<std::uint64_t>(parse_int(k, v));
            }},
           {"eval_every",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.train.eval_every = static_cast<int>(parse_int(k, v));
            }},
           {"amp", [](RunConfig& c, const std::string&, const std::string& v) { c.train.amp = v; }},
       }},
      {"eval",
       {
           {"batch_size",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.eval.batch_size = static_cast<int>(parse_int(k, v));
            }},
           {"split", [](RunConfig& c, const std::string&, const std::string& v) { c.eval.split = v; }},
       }},
      {"pretrain",
       {
           {"steps",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.steps = static_cast<int>(parse_int(k, v));
            }},
           {"base_lr",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.base_lr = parse_double(k, v);
            }},
           {"batch_size",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.batch_size = static_cast<int>(parse_int(k, v));
            }},
           {"temperature",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.temperature = parse_double(k, v);
            }},
           {"warp_magnitude",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.warp_magnitude = parse_double(k, v);
            }},
           {"warp_grid",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.warp_grid = static_cast<int>(parse_int(k, v));
            }},
           {"view_size",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.view_size = static_cast<int>(parse_int(k, v));
            }},
           {"warp_polarity",
            [](RunConfig& c, const std::string&, const std::string& v) {
              c.pretrain.warp_polarity = v;
            }},
           {"momentum",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.momentum = parse_double(k, v);
            }},
           {"weight_decay",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.pretrain.weight_decay = parse_double(k, v);
            }},
       }},
  };

  std::stringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = strip(s.substr(1, s.size() - 2));
      if (!schema.count(section))
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = strip(s.substr(0, eq));
    const std::string value = strip(s.substr(eq + 1));
    const auto& keys = schema.at(section);
    const auto it = keys.find(key);
    if (it == keys.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "' in [" +
                        section + "]");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_config_text(const RunConfig& c) {
  std::string out;
  out += "[data]\n";
  out += "crop_padding = " + std::to_string(c.data.crop_padding) + "\n";
  out += "crop_size = " + std::to_string(c.data.crop_size) + "\n";
  out += "eval_split = " + c.data.eval_split + "\n";
  out += "hflip_probability = " + fmt_double(c.data.hflip_probability) + "\n";
  out += "mean = " + fmt_triple(c.data.mean) + "\n";
  out += "split = " + c.data.split + "\n";
  out += "std = " + fmt_triple(c.data.std) + "\n";
  out += "temporal_stride = " + std::to_string(c.data.temporal_stride) + "\n";
  out += "[model]\n";
  out += "backbone = " + c.model.backbone + "\n";
  out += "hidden_channels = " + std::to_string(c.model.head.hidden_channels) + "\n";
  out += "input_resolution = " + std::to_string(c.model.input_resolution) + "\n";
  out += "kernel = " + std::to_string(c.model.head.kernel) + "\n";
  out += "n_classes = " + std::to_string(c.model.head.n_classes) + "\n";
  out += "n_conv = " + std::to_string(c.model.head.n_conv) + "\n";
  out += "stride = " + std::to_string(c.model.head.stride) + "\n";
  out += "[train]\n";
  out += "amp = " + c.train.amp + "\n";
  out += "base_lr = " + fmt_double(c.train.base_lr) + "\n";
  out += "batch_size = " + std::to_string(c.train.batch_size) + "\n";
  out += "eval_every = " + std::to_string(c.train.eval_every) + "\n";
  out += "freeze_k = " + std::to_string(c.train.freeze_k) + "\n";
  out += "momentum = " + fmt_double(c.train.momentum) + "\n";
  out += "seed = " + std::to_string(c.train.seed) + "\n";
  out += "total_iters = " + std::to_string(c.train.total_iters) + "\n";
  out += "weight_decay = " + fmt_double(c.train.weight_decay) + "\n";
  out += "[eval]\n";
  out += "batch_size = " + std::to_string(c.eval.batch_size) + "\n";
  out += "split = " + c.eval.split + "\n";
  out += "[pretrain]\n";
  out += "base_lr = " + fmt_double(c.pretrain.base_lr) + "\n";
  out += "batch_size = " + std::to_string(c.pretrain.batch_size) + "\n";
  out += "momentum = " + fmt_double(c.pretrain.momentum) + "\n";
  out += "steps = " + std::to_string(c.pretrain.steps) + "\n";
  out += "temperature = " + fmt_double(c.pretrain.temperature) + "\n";
  out += "view_size = " + std::to_string(c.pretrain.view_size) + "\n";
  out += "warp_grid = " + std::to_string(c.pretrain.warp_grid) + "\n";
  out += "warp_magnitude = " + fmt_double(c.pretrain.warp_magnitude) + "\n";
  out += "warp_polarity = " + c.pretrain.warp_polarity + "\n";
  out += "weight_decay = " + fmt_double(c.pretrain.weight_decay) + "\n";
  return out;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config_text(config))));
  return buf;
}

} // namespace exprkit
