// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>

namespace exprkit {

inline constexpr int kNumClasses = 8;
inline constexpr int kInvalidLabel = -1;

// The eight expression categories in canonical order. Ids are positions in
// this list; annotation headers in other orders are remapped onto it.
class LabelSpace {
public:
  static const LabelSpace& canonical();

  const std::array<std::string, kNumClasses>& classes() const { return classes_; }
  const std::string& name(int id) const { return classes_.at(static_cast<std::size_t>(id)); }

  // Case-insensitive lookup; nullopt when the name is unknown.
  std::optional<int> id_of(const std::string& name) const;

private:
  LabelSpace();
  std::array<std::string, kNumClasses> classes_;
};

} // namespace exprkit
