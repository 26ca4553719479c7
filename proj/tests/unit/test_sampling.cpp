// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "exprkit/dataset/sampling.hpp"
#include "exprkit/error.hpp"

using namespace exprkit;

namespace {

std::vector<FrameSample> make_video(const std::string& vid, int frames) {
  std::vector<FrameSample> out;
  for (int f = 0; f < frames; ++f) out.push_back({vid, f, {}, 0});
  return out;
}

} // namespace

TEST_CASE("one draw per group of ten") {
  const auto samples = make_video("v", 100);
  RngStream rng(5);
  const auto picked = temporal_subsample(samples, 10, rng);
  REQUIRE(picked.size() == 10);
  for (int g = 0; g < 10; ++g) {
    CHECK(picked[static_cast<std::size_t>(g)].frame_index >= 10 * g);
    CHECK(picked[static_cast<std::size_t>(g)].frame_index < 10 * (g + 1));
  }
}

TEST_CASE("stride one is the identity") {
  const auto samples = make_video("v", 17);
  RngStream rng(5);
  const auto picked = temporal_subsample(samples, 1, rng);
  REQUIRE(picked.size() == 17);
  for (int f = 0; f < 17; ++f) CHECK(picked[static_cast<std::size_t>(f)].frame_index == f);
}

TEST_CASE("trailing partial group contributes one sample") {
  // brute-force group enumeration: 23 frames, stride 10 -> groups [0,10), [10,20), [20,23)
  const auto samples = make_video("v", 23);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    const auto picked = temporal_subsample(samples, 10, rng);
    REQUIRE(picked.size() == 3);
    CHECK(picked[0].frame_index < 10);
    CHECK(picked[1].frame_index >= 10);
    CHECK(picked[1].frame_index < 20);
    CHECK(picked[2].frame_index >= 20);
    CHECK(picked[2].frame_index < 23);
  }
}

TEST_CASE("cardinality law over multiple videos") {
  std::vector<FrameSample> samples;
  const std::vector<std::pair<std::string, int>> videos = {
      {"a", 100}, {"b", 23}, {"c", 10}, {"d", 1}, {"e", 9}};
  std::size_t expected = 0;
  for (const auto& [vid, n] : videos) {
    const auto v = make_video(vid, n);
    samples.insert(samples.end(), v.begin(), v.end());
    expected += static_cast<std::size_t>((n + 9) / 10);
  }
  RngStream rng(9);
  CHECK(temporal_subsample(samples, 10, rng).size() == expected);
}

TEST_CASE("equal seeds agree; different seeds vary") {
  const auto samples = make_video("v", 100);
  RngStream r1(123), r2(123);
  const auto p1 = temporal_subsample(samples, 10, r1);
  const auto p2 = temporal_subsample(samples, 10, r2);
  REQUIRE(p1.size() == p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i].frame_index == p2[i].frame_index);

  std::set<std::vector<int>> distinct;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(seed);
    std::vector<int> key;
    for (const auto& s : temporal_subsample(samples, 10, rng)) key.push_back(s.frame_index);
    distinct.insert(key);
  }
  CHECK(distinct.size() >= 2);
}

TEST_CASE("stride below one is rejected") {
  const auto samples = make_video("v", 5);
  RngStream rng(1);
  CHECK_THROWS_AS(temporal_subsample(samples, 0, rng), ConfigError);
}
