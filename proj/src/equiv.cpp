#include "dpboot/equiv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dpboot {

namespace {

constexpr std::uint64_t kTagArmA = 1;
constexpr std::uint64_t kTagArmB = 2;
constexpr std::uint64_t kTagSelf = 3;
constexpr std::uint64_t kTagData = 4;
constexpr std::uint64_t kTagRow = 5;

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

void require_nonempty(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("distance needs two nonempty samples");
}

}  // namespace

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b);
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  // |i/na - j/nb| kept as the integer |i*nb - j*na| until the final division.
  const std::uint64_t na = sa.size();
  const std::uint64_t nb = sb.size();
  std::uint64_t i = 0, j = 0, sup = 0;
  while (i < na && j < nb) {
    const double x = std::min(sa[i], sb[j]);
    while (i < na && sa[i] == x) ++i;
    while (j < nb && sb[j] == x) ++j;
    const std::uint64_t lhs = i * nb;
    const std::uint64_t rhs = j * na;
    sup = std::max(sup, lhs > rhs ? lhs - rhs : rhs - lhs);
  }
  return static_cast<double>(sup) / (static_cast<double>(na) * static_cast<double>(nb));
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b);
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  double sum = 0.0;
  if (sa.size() == sb.size()) {
    for (std::size_t i = 0; i < sa.size(); ++i) sum += std::abs(sa[i] - sb[i]);
    return sum / static_cast<double>(sa.size());
  }
  const std::size_t grid = std::max(sa.size(), sb.size());
  const auto inverse = [](const std::vector<double>& s, double t) {
    const auto k = static_cast<std::size_t>(std::ceil(t * static_cast<double>(s.size())));
    return s[std::clamp<std::size_t>(k, 1, s.size()) - 1];
  };
  for (std::size_t k = 0; k < grid; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
    sum += std::abs(inverse(sa, t) - inverse(sb, t));
  }
  return sum / static_cast<double>(grid);
}

double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InvalidInput("KS test needs a nonempty sample");
  const auto s = sorted_copy(sample);
  const double n = static_cast<double>(s.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    sup = std::max({sup, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return sup;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form converges fast for small lambda.
    const double factor = std::sqrt(2.0 * std::numbers::pi) / lambda;
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * c);
    }
    return std::clamp(1.0 - factor * cdf, 0.0, 1.0);
  }
  double tail = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    tail += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * tail, 0.0, 1.0);
}

double ks_one_sample_pvalue(double d, std::size_t n) {
  const double root = std::sqrt(static_cast<double>(n));
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

DistanceReport distance(std::span<const double> a, std::span<const double> b) {
  return {ks_two_sample(a, b), wasserstein1(a, b), std::max(a.size(), b.size())};
}

DistanceReport distance(const Ensemble& a, const Ensemble& b) { return distance(a.values, b.values); }

std::string_view to_string(Verdict verdict) noexcept {
  return verdict == Verdict::Indistinguishable ? "indistinguishable" : "distinguishable";
}

double median(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("median of an empty sequence");
  auto s = sorted_copy(values);
  const std::size_t mid = s.size() / 2;
  if (s.size() % 2 == 1) return s[mid];
  return 0.5 * (s[mid - 1] + s[mid]);
}

namespace {

double median_of(std::span<const DistanceReport> reports, double DistanceReport::*field) {
  std::vector<double> v;
  v.reserve(reports.size());
  for (const auto& r : reports) v.push_back(r.*field);
  return median(v);
}

}  // namespace

Verdict decide(const DistanceReport& cross, std::span<const DistanceReport> self_baseline,
               double threshold_factor) {
  const double ks_limit = threshold_factor * median_of(self_baseline, &DistanceReport::ks);
  const double w1_limit = threshold_factor * median_of(self_baseline, &DistanceReport::wasserstein1);
  return cross.ks <= ks_limit && cross.wasserstein1 <= w1_limit ? Verdict::Indistinguishable
                                                                 : Verdict::Distinguishable;
}

double EquivalenceReport::self_ks_median() const {
  return median_of(self_baseline, &DistanceReport::ks);
}

double EquivalenceReport::self_w1_median() const {
  return median_of(self_baseline, &DistanceReport::wasserstein1);
}

std::vector<DistanceReport> self_calibrate(Method method, const Dataset& data,
                                           const CompareOptions& options) {
  if (options.reps < 3) throw InvalidInput("self calibration needs reps >= 3");
  std::vector<DistanceReport> out;
  out.reserve(options.reps);
  Ensemble previous = make_ensemble(method, data, options.b, options.functional,
                                    derive_seed(options.master_seed, 0), options.resample);
  for (std::size_t k = 1; k <= options.reps; ++k) {
    Ensemble next = make_ensemble(method, data, options.b, options.functional,
                                  derive_seed(options.master_seed, k), options.resample);
    out.push_back(distance(previous, next));
    previous = std::move(next);
  }
  return out;
}

EquivalenceReport compare(Method method_a, const Dataset& data_a, Method method_b,
                          const Dataset& data_b, const CompareOptions& options) {
  if (!(options.threshold_factor > 0.0)) throw InvalidInput("threshold factor must be > 0");
  const auto a = make_ensemble(method_a, data_a, options.b, options.functional,
                               derive_seed(options.master_seed, kTagArmA), options.resample);
  const auto b = make_ensemble(method_b, data_b, options.b, options.functional,
                               derive_seed(options.master_seed, kTagArmB), options.resample);
  CompareOptions self_options = options;
  self_options.master_seed = derive_seed(options.master_seed, kTagSelf);

  EquivalenceReport report;
  report.cross = distance(a, b);
  report.self_baseline = self_calibrate(method_a, data_a, self_options);
  report.threshold_factor = options.threshold_factor;
  report.verdict = decide(report.cross, report.self_baseline, report.threshold_factor);
  return report;
}

EquivalenceReport compare(Method method_a, Method method_b, const Dataset& data,
                          const CompareOptions& options) {
  return compare(method_a, data, method_b, data, options);
}

Dataset synthesize_dataset(const BaseMeasure& generator, std::size_t n, std::uint64_t master_seed) {
  if (n == 0) throw InvalidInput("dataset size must be >= 1");
  RngStream src(derive_seed(master_seed, kTagData), n);
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(base_sample(generator, src));
  return Dataset(std::move(values));
}

std::vector<ConvergenceRow> convergence_experiment(std::span<const std::size_t> n_grid,
                                                   const BaseMeasure& generator,
                                                   const CompareOptions& options) {
  if (n_grid.empty()) throw InvalidInput("n grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw InvalidInput("n grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidInput("n grid must be increasing");
  }
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    const auto data = synthesize_dataset(generator, n, options.master_seed);
    CompareOptions row_options = options;
    row_options.master_seed = derive_seed(derive_seed(options.master_seed, kTagRow), n);
    const auto report = compare(Method::Frequentist, Method::DpStickBreak, data, row_options);
    rows.push_back({n, report.cross.ks, report.cross.wasserstein1, report.self_ks_median(),
                    report.self_w1_median(), report.verdict});
  }
  return rows;
}

}  // namespace dpboot
