#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dpboot/core.hpp"
#include "dpboot/rng.hpp"

namespace testgen {

/// Random dataset of 1..max_n values; roughly a third of draws repeat an
/// earlier value so ties are exercised.
inline dpboot::Dataset random_dataset(std::uint64_t seed, std::size_t max_n = 40) {
  dpboot::RngStream src(seed, 0xDA7A);
  const std::size_t n = 1 + dpboot::uniform_index(src, max_n);
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    if (!v.empty() && src.uniform() < 0.33) {
      v.push_back(v[dpboot::uniform_index(src, v.size())]);
    } else {
      v.push_back(std::round((src.uniform() - 0.5) * 2000.0) / 16.0);
    }
  }
  return dpboot::Dataset(std::move(v));
}

/// Random dataset of n distinct values.
inline dpboot::Dataset distinct_dataset(std::size_t n, std::uint64_t seed) {
  dpboot::RngStream src(seed, 0xD15);
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<double>(i) + src.uniform() * 0.5);
  return dpboot::Dataset(std::move(v));
}

/// Replays a fixed list of deviates, cycling when exhausted.
struct ScriptedUniforms {
  std::vector<double> script;
  std::size_t next = 0;
  double uniform() {
    const double u = script[next % script.size()];
    ++next;
    return u;
  }
};

}  // namespace testgen
