// SPDX-License-Identifier: Apache-2.0
#include "exprkit/model/weights.hpp"

#include <cstdio>
#include <cstring>

#include "exprkit/rng.hpp"

namespace exprkit {

std::string weights_digest(const NamedArrays& arrays) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix_bytes = [&h](const void* ptr, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(ptr);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [name, array] : arrays) {
    mix_bytes(name.data(), name.size());
    for (const int d : array.shape) mix_bytes(&d, sizeof(d));
    mix_bytes(array.data.data(), array.data.size() * sizeof(float));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

} // namespace exprkit
