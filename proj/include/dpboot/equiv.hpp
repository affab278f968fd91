#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dpboot/resample.hpp"

namespace dpboot {

/// Sup-norm distance between the two empirical CDFs, computed exactly by a
/// merge over the sorted samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// 1-D earth mover's distance between the empirical distributions.
///
/// Equal lengths: mean absolute difference of matched order statistics.
/// Unequal lengths: mean absolute difference of the two left-continuous
/// inverse CDFs over max(|a|, |b|) quantile midpoints.
double wasserstein1(std::span<const double> a, std::span<const double> b);

/// One-sample KS statistic sup |F_sample - cdf|.
double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Asymptotic p-value of a one-sample KS statistic `d` on `n` points, with
/// the Stephens small-sample correction.
double ks_one_sample_pvalue(double d, std::size_t n);

struct DistanceReport {
  double ks = 0.0;
  double wasserstein1 = 0.0;
  std::size_t b = 0;
};

DistanceReport distance(std::span<const double> a, std::span<const double> b);
DistanceReport distance(const Ensemble& a, const Ensemble& b);

enum class Verdict { Indistinguishable, Distinguishable };

std::string_view to_string(Verdict verdict) noexcept;

double median(std::span<const double> values);

/// Indistinguishable iff the cross distance is within `threshold_factor`
/// times the median self distance, for KS and Wasserstein-1 both.
Verdict decide(const DistanceReport& cross, std::span<const DistanceReport> self_baseline,
               double threshold_factor);

struct EquivalenceReport {
  DistanceReport cross;
  std::vector<DistanceReport> self_baseline;
  double threshold_factor = 2.0;
  Verdict verdict = Verdict::Distinguishable;

  double self_ks_median() const;
  double self_w1_median() const;
};

struct CompareOptions {
  std::size_t b = 2000;
  Functional functional = Functional::mean();
  std::uint64_t master_seed = 0;
  double threshold_factor = 2.0;
  std::size_t reps = 5;
  ResampleOptions resample;
};

/// Distances between `reps` consecutive pairs of reps+1 independent
/// ensembles of the same method: the Monte Carlo noise floor.
std::vector<DistanceReport> self_calibrate(Method method, const Dataset& data,
                                           const CompareOptions& options);

/// Cross distance between one ensemble of each arm, judged against the
/// self baseline of arm A.
EquivalenceReport compare(Method method_a, const Dataset& data_a, Method method_b,
                          const Dataset& data_b, const CompareOptions& options);

EquivalenceReport compare(Method method_a, Method method_b, const Dataset& data,
                          const CompareOptions& options);

struct ConvergenceRow {
  std::size_t n;
  double cross_ks;
  double cross_w1;
  double self_ks_median;
  double self_w1_median;
  Verdict verdict;
};

/// Frequentist vs stick-breaking comparison on a fresh dataset of each size
/// in `n_grid`, drawn from `generator`. Rows follow grid order.
std::vector<ConvergenceRow> convergence_experiment(std::span<const std::size_t> n_grid,
                                                   const BaseMeasure& generator,
                                                   const CompareOptions& options);

/// Dataset of size n drawn from `generator`, as used by convergence_experiment.
Dataset synthesize_dataset(const BaseMeasure& generator, std::size_t n, std::uint64_t master_seed);

}  // namespace dpboot
