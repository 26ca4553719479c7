// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/label_space.hpp"

#include <algorithm>
#include <cctype>

namespace exprkit {

namespace {
std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}
} // namespace

LabelSpace::LabelSpace()
    : classes_{"anger", "disgust", "fear", "happiness",
               "sadness", "surprise", "neutral", "other"} {}

const LabelSpace& LabelSpace::canonical() {
  static const LabelSpace space;
  return space;
}

std::optional<int> LabelSpace::id_of(const std::string& name) const {
  const std::string needle = lower(name);
  for (int i = 0; i < kNumClasses; ++i)
    if (classes_[static_cast<std::size_t>(i)] == needle) return i;
  return std::nullopt;
}

} // namespace exprkit
