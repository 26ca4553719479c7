// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "exprkit/model/assembly.hpp"

namespace exprkit {

// Checkpointed arrays are 32-bit floats under the canonical naming scheme.
struct ArrayF32 {
  std::vector<int> shape;
  std::vector<float> data;
};
using NamedArrays = std::map<std::string, ArrayF32>;

// Outcome of matching a weight file against a model: the four lists are
// disjoint and together cover the union of model and file names.
struct MatchReport {
  std::vector<std::string> matched;
  std::vector<std::string> missing;        // model names absent from the file
  std::vector<std::string> unexpected;     // file names absent from the model
  std::vector<std::string> shape_mismatch; // present on both sides, wrong shape

  bool all_matched() const {
    return missing.empty() && unexpected.empty() && shape_mismatch.empty();
  }
};

// Prefix rewrite rules applied to incoming names before matching.
using RenameRules = std::vector<std::pair<std::string, std::string>>;

inline std::string apply_renames(const std::string& name, const RenameRules& rules) {
  for (const auto& [from, to] : rules)
    if (name.rfind(from, 0) == 0) return to + name.substr(from.size());
  return name;
}

template <typename T>
NamedArrays export_arrays(ModelAssembly<T>& model) {
  NamedArrays out;
  for (const Param<T>* p : model.params()) {
    ArrayF32 a;
    a.shape = p->shape;
    a.data.reserve(p->value.size());
    for (const T v : p->value) a.data.push_back(static_cast<float>(v));
    out.emplace(p->name, std::move(a));
  }
  return out;
}

// Copies every matching array into the model; mismatched shapes leave the
// parameter untouched. Copying is bit-exact for float models.
template <typename T>
MatchReport import_weights(ModelAssembly<T>& model, const NamedArrays& arrays,
                           const RenameRules& renames = {}) {
  MatchReport report;
  std::map<std::string, const ArrayF32*> incoming;
  for (const auto& [name, array] : arrays) incoming.emplace(apply_renames(name, renames), &array);

  std::map<std::string, Param<T>*> model_params;
  for (Param<T>* p : model.params()) model_params.emplace(p->name, p);

  for (const auto& [name, array] : incoming) {
    const auto it = model_params.find(name);
    if (it == model_params.end()) {
      report.unexpected.push_back(name);
      continue;
    }
    if (it->second->shape != array->shape) {
      report.shape_mismatch.push_back(name);
      continue;
    }
    for (std::size_t i = 0; i < array->data.size(); ++i)
      it->second->value[i] = static_cast<T>(array->data[i]);
    report.matched.push_back(name);
  }
  for (const auto& [name, p] : model_params)
    if (!incoming.count(name)) report.missing.push_back(name);
  return report;
}

// Stable digest over names, shapes and raw bytes; identifies a weight set.
std::string weights_digest(const NamedArrays& arrays);

} // namespace exprkit
