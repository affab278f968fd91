#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dpboot/core.hpp"
#include "dpboot/dp.hpp"

namespace dpboot {

enum class Method { Frequentist, BayesianDirichlet, DpStickBreak, PolyaUrn };

/// CLI names: frequentist, bayesian, dp-stickbreak, polya-urn.
std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

/// How one stick-breaking realization F ~ DP(n, F_n) turns into a value of
/// the functional.
enum class DpReading {
  /// Evaluate the functional on F itself (atoms weighted by stick mass).
  Measure,
  /// Draw n IID points from F and evaluate the functional on them.
  IidDraws,
  /// Take the first n stick-breaking atoms, unweighted.
  LeadingAtoms,
};

std::string_view to_string(DpReading reading) noexcept;
DpReading parse_dp_reading(std::string_view text);

struct ResampleOptions {
  double epsilon = kDefaultEpsilon;
  DpReading dp_reading = DpReading::Measure;
  /// Worker threads for replications; 0 uses the hardware concurrency.
  unsigned threads = 1;
};

/// n draws with replacement, uniform over the observations.
template <UniformSource Source>
Dataset frequentist_bootstrap(const Dataset& data, Source& src) {
  std::vector<double> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.push_back(data[uniform_index(src, data.size())]);
  return Dataset(std::move(out));
}

/// Dirichlet(1, ..., 1) weights: normalized unit exponentials -ln(u).
template <UniformSource Source>
std::vector<double> bayesian_bootstrap_weights(std::size_t n, Source& src) {
  if (n == 0) throw InvalidInput("weight vector length must be >= 1");
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& wi : w) {
    wi = -std::log(src.uniform());
    total += wi;
  }
  for (auto& wi : w) wi /= total;
  return w;
}

/// n IID draws from a fresh stick-breaking realization of DP(n, F_n).
template <UniformSource Source>
Dataset dp_bootstrap_sample(const Dataset& data, double epsilon, Source& src) {
  const auto measure = stick_break(dp0_posterior(data), epsilon, src);
  return measure_sample(measure, data.size(), src);
}

/// The first n atoms of a stick-breaking realization of DP(n, F_n).
/// Throws InvalidInput when epsilon truncates before n atoms exist.
template <UniformSource Source>
Dataset dp_leading_atoms(const Dataset& data, double epsilon, Source& src) {
  auto measure = stick_break(dp0_posterior(data), epsilon, src);
  if (measure.atoms.size() < data.size()) {
    throw InvalidInput("epsilon truncates the stick-breaking before n atoms");
  }
  measure.atoms.resize(data.size());
  return Dataset(std::move(measure.atoms));
}

/// B replicated functional values under one resampling scheme.
struct Ensemble {
  Method method;
  Functional functional;
  std::vector<double> values;
  std::uint64_t master_seed;
  std::size_t n;

  std::size_t b() const noexcept { return values.size(); }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// One replication: resample `data` under `method` with `src` and evaluate `f`.
double replicate(Method method, const Dataset& data, const Functional& f,
                 const ResampleOptions& options, RngStream& src);

/// Replication b draws from RngStream(master_seed, b) and writes slot b, so
/// the result does not depend on thread count or scheduling.
Ensemble make_ensemble(Method method, const Dataset& data, std::size_t b, const Functional& f,
                       std::uint64_t master_seed, const ResampleOptions& options = {});

}  // namespace dpboot
