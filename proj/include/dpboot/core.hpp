#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dpboot/error.hpp"
#include "dpboot/rng.hpp"

namespace dpboot {

/// Finite real observations y_1..y_n, n >= 1. Order is preserved.
class Dataset {
 public:
  /// Throws InvalidInput if `values` is empty or holds a non-finite value.
  explicit Dataset(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> values_;
};

struct EcdfPoint {
  double value;
  std::size_t count;

  friend bool operator==(const EcdfPoint&, const EcdfPoint&) = default;
};

/// Step-function CDF of a dataset. Ties are kept as multiplicities.
class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(const Dataset& data);

  std::span<const EcdfPoint> points() const noexcept { return points_; }
  std::size_t n() const noexcept { return n_; }

  /// Fraction of observations <= x.
  double eval(double x) const noexcept;

  /// k-th smallest observation counting multiplicity, k in [0, n).
  double order_statistic(std::size_t k) const noexcept;

  friend bool operator==(const EmpiricalCDF& a, const EmpiricalCDF& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<EcdfPoint> points_;
  std::vector<std::size_t> cumulative_;  // running count through each point
  std::size_t n_ = 0;
};

EmpiricalCDF ecdf_build(const Dataset& data);
double ecdf_eval(const EmpiricalCDF& ecdf, double x) noexcept;

// ---------------------------------------------------------------------------
// Base measures

enum class Family { Normal, Uniform };

struct EmpiricalBase {
  EmpiricalCDF ecdf;

  friend bool operator==(const EmpiricalBase&, const EmpiricalBase&) = default;
};

/// Normal(mean, sd) or Uniform(lo, hi).
class ParametricBase {
 public:
  static ParametricBase normal(double mean, double sd);
  static ParametricBase uniform(double lo, double hi);

  Family family() const noexcept { return family_; }
  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }

  /// Inverse CDF at u in (0, 1).
  double quantile(double u) const;

  friend bool operator==(const ParametricBase&, const ParametricBase&) = default;

 private:
  ParametricBase(Family family, double first, double second)
      : family_(family), first_(first), second_(second) {}

  Family family_;
  double first_;
  double second_;
};

/// A mixture component is never itself a mixture, so nesting depth is at most 2.
using SimpleMeasure = std::variant<EmpiricalBase, ParametricBase>;

struct MixtureComponent {
  double weight;
  SimpleMeasure measure;

  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

class MixtureBase {
 public:
  /// Weights must lie in (0, 1] and sum to 1 within kMixtureWeightTolerance.
  explicit MixtureBase(std::vector<MixtureComponent> components);

  std::span<const MixtureComponent> components() const noexcept { return components_; }

  friend bool operator==(const MixtureBase&, const MixtureBase&) = default;

 private:
  std::vector<MixtureComponent> components_;
};

inline constexpr double kMixtureWeightTolerance = 1e-12;

using BaseMeasure = std::variant<EmpiricalBase, ParametricBase, MixtureBase>;

/// Human-readable tag: "empirical", "normal:MU,SD", "uniform:LO,HI", "mixture".
std::string describe(const SimpleMeasure& measure);

// ---------------------------------------------------------------------------
// DP parameters and realizations

/// DP(alpha, F0). alpha == 0 marks the DP(0) prior; samplers reject it.
class DPParams {
 public:
  DPParams(double alpha, BaseMeasure base);

  double alpha() const noexcept { return alpha_; }
  const BaseMeasure& base() const noexcept { return base_; }

  friend bool operator==(const DPParams&, const DPParams&) = default;

 private:
  double alpha_;
  BaseMeasure base_;
};

/// Truncated random discrete distribution: sum(weights) + residual == 1.
struct DiscreteMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;
  double residual = 0.0;

  /// Throws InvalidInput when the atom/weight/residual invariants fail.
  void validate() const;
};

inline constexpr double kMassTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Functionals

struct Functional {
  enum class Kind { Mean, Median, StdDev, Quantile };

  Kind kind = Kind::Mean;
  double p = 0.5;  // used by Quantile only

  static Functional mean() { return {Kind::Mean, 0.5}; }
  static Functional median() { return {Kind::Median, 0.5}; }
  static Functional stddev() { return {Kind::StdDev, 0.5}; }
  static Functional quantile(double p);

  /// Throws InvalidInput for a Quantile with p outside (0, 1).
  void validate() const;

  friend bool operator==(const Functional&, const Functional&) = default;
};

/// Parses "mean", "median", "sd" or "q:P".
Functional parse_functional(std::string_view text);
std::string to_string(const Functional& f);

/// Evaluates a statistic of a (possibly weighted) point set.
///
/// Without weights every point has weight 1. StdDev is the population
/// form; Median and Quantile(p) return the smallest value whose normalized
/// cumulative weight reaches p (left-continuous inverse CDF).
double apply_functional(const Functional& f, std::span<const double> values,
                        std::optional<std::span<const double>> weights = std::nullopt);

// ---------------------------------------------------------------------------
// Sampling from base measures

namespace detail {

template <UniformSource Source>
double sample_empirical(const EmpiricalCDF& ecdf, Source& src) {
  return ecdf.order_statistic(uniform_index(src, ecdf.n()));
}

template <UniformSource Source>
double sample_simple(const SimpleMeasure& measure, Source& src) {
  if (const auto* emp = std::get_if<EmpiricalBase>(&measure)) {
    return sample_empirical(emp->ecdf, src);
  }
  return std::get<ParametricBase>(measure).quantile(src.uniform());
}

}  // namespace detail

/// One draw from F0. Mixtures consume one deviate for the component choice.
template <UniformSource Source>
double base_sample(const BaseMeasure& base, Source& src) {
  if (const auto* emp = std::get_if<EmpiricalBase>(&base)) {
    return detail::sample_empirical(emp->ecdf, src);
  }
  if (const auto* par = std::get_if<ParametricBase>(&base)) {
    return par->quantile(src.uniform());
  }
  const auto components = std::get<MixtureBase>(base).components();
  const double u = src.uniform();
  double cumulative = 0.0;
  for (const auto& c : components) {
    cumulative += c.weight;
    if (u < cumulative) return detail::sample_simple(c.measure, src);
  }
  return detail::sample_simple(components.back().measure, src);
}

}  // namespace dpboot
