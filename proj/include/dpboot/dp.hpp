#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dpboot/core.hpp"

namespace dpboot {

inline constexpr double kDefaultEpsilon = 1e-10;

/// Posterior of DP(alpha, F0) after observing `data`:
/// DP(alpha + n, alpha/(alpha+n) F0 + n/(alpha+n) F_n).
///
/// A mixture prior base is flattened into the result so that repeated
/// updates stay at nesting depth 2. Requires alpha > 0; the alpha = 0 case
/// goes through dp0_posterior.
DPParams conjugate_update(const DPParams& prior, const Dataset& data);

/// DP(n, F_n): the posterior under the DP(0) limiting prior.
DPParams dp0_posterior(const Dataset& data);

namespace detail {

void check_sampler_params(const DPParams& dp, double epsilon);
void check_sampler_params(const DPParams& dp);

}  // namespace detail

/// Stick-breaking realization of F ~ DP(alpha, F0), truncated once the
/// unallocated mass drops below `epsilon`.
///
/// Each stick consumes one deviate u and sets v = 1 - u^(1/alpha), i.e. a
/// Beta(1, alpha) draw by inverse CDF; its atom is then drawn from F0.
template <UniformSource Source>
DiscreteMeasure stick_break(const DPParams& dp, double epsilon, Source& src) {
  detail::check_sampler_params(dp, epsilon);
  const double inv_alpha = 1.0 / dp.alpha();
  DiscreteMeasure m;
  double remaining = 1.0;
  while (true) {
    // log(u) / alpha keeps 1 - v = u^(1/alpha) away from rounding to 1 for large alpha.
    const double log_keep = std::log(src.uniform()) * inv_alpha;
    const double v = -std::expm1(log_keep);
    m.weights.push_back(v * remaining);
    m.atoms.push_back(base_sample(dp.base(), src));
    remaining *= std::exp(log_keep);
    if (remaining < epsilon) break;
  }
  m.residual = remaining;
  return m;
}

/// `count` IID draws from the kept atoms, weights renormalized by their sum.
template <UniformSource Source>
Dataset measure_sample(const DiscreteMeasure& m, std::size_t count, Source& src) {
  if (count == 0) throw InvalidInput("sample count must be >= 1");
  m.validate();
  std::vector<double> cumulative(m.weights.size());
  double running = 0.0;
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    running += m.weights[k];
    cumulative[k] = running;
  }
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double target = src.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    out.push_back(m.atoms[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return Dataset(std::move(out));
}

/// Blackwell-MacQueen urn: draw i+1 is fresh from F0 with probability
/// alpha/(alpha+i), otherwise a copy of a uniformly chosen earlier draw.
/// Yields the joint predictive of `count` observations without realizing F.
template <UniformSource Source>
Dataset polya_urn_predictive(const DPParams& dp, std::size_t count, Source& src) {
  detail::check_sampler_params(dp);
  if (count == 0) throw InvalidInput("sample count must be >= 1");
  std::vector<double> draws;
  draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double seen = static_cast<double>(i);
    if (i == 0 || src.uniform() * (dp.alpha() + seen) < dp.alpha()) {
      draws.push_back(base_sample(dp.base(), src));
    } else {
      draws.push_back(draws[uniform_index(src, i)]);
    }
  }
  return Dataset(std::move(draws));
}

}  // namespace dpboot
