// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "exprkit/rng.hpp"

using namespace exprkit;

TEST_CASE("derived streams are reproducible and label-sensitive") {
  const RngStream root(42);
  RngStream a = root.derive("augment", 1, 2);
  RngStream b = root.derive("augment", 1, 2);
  RngStream c = root.derive("augment", 1, 3);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() == b.next_u64());
  RngStream a2 = root.derive("augment", 1, 2);
  CHECK(a2.next_u64() != c.next_u64());
}

TEST_CASE("uniform_u64 stays in range and covers values") {
  RngStream rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform_u64(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("uniform_real in [0,1), normal has sane moments") {
  RngStream rng(11);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform_real();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double g = rng.normal();
    sum += g;
    sumsq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);
}
