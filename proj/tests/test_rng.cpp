#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "dpboot/rng.hpp"

using dpboot::RngStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using Block = std::array<std::uint32_t, 4>;
  CHECK(dpboot::philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(dpboot::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu}) ==
        Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(dpboot::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u}) ==
        Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("identical (seed, stream) pairs give identical sequences") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("stream id and seed both change the sequence") {
  RngStream base(42, 7), other_stream(42, 8), other_seed(43, 7);
  std::vector<std::uint64_t> x, y, z;
  for (int i = 0; i < 64; ++i) {
    x.push_back(base.next_u64());
    y.push_back(other_stream.next_u64());
    z.push_back(other_seed.next_u64());
  }
  CHECK(x != y);
  CHECK(x != z);
}

TEST_CASE("uniform stays inside the open unit interval with the right moments") {
  RngStream src(1, 0);
  const int count = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double u = src.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / count;
  const double var = sumsq / count - mean * mean;
  // 5 standard errors of the sample mean (sd 1/sqrt(12)).
  CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / count));
  CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("neighbouring streams are uncorrelated") {
  const int count = 50000;
  double sxy = 0.0;
  RngStream a(9, 100), b(9, 101);
  for (int i = 0; i < count; ++i) sxy += (a.uniform() - 0.5) * (b.uniform() - 0.5);
  const double corr = (sxy / count) * 12.0;
  CHECK(std::abs(corr) < 5.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("derive_seed separates tags") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t tag = 0; tag < 1000; ++tag) seen.insert(dpboot::derive_seed(5, tag));
  CHECK(seen.size() == 1000);
  CHECK(dpboot::derive_seed(5, 1) == dpboot::derive_seed(5, 1));
  CHECK(dpboot::derive_seed(5, 1) != dpboot::derive_seed(6, 1));
}

TEST_CASE("uniform_index covers the range and never overflows it") {
  struct Fixed {
    double u;
    double uniform() { return u; }
  };
  Fixed low{1e-300}, high{1.0 - 0x1.0p-53};
  CHECK(dpboot::uniform_index(low, 5) == 0);
  CHECK(dpboot::uniform_index(high, 5) == 4);

  RngStream src(3, 3);
  std::array<int, 4> counts{};
  for (int i = 0; i < 40000; ++i) ++counts[dpboot::uniform_index(src, 4)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 5 * std::sqrt(40000 * 0.25 * 0.75));
}
