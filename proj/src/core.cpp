#include "dpboot/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/erf.hpp>

namespace dpboot {

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("dataset must contain at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("dataset value at index " + std::to_string(i) + " is not finite");
    }
  }
}

EmpiricalCDF::EmpiricalCDF(const Dataset& data) : n_(data.size()) {
  std::vector<double> sorted(data.values().begin(), data.values().end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    if (!points_.empty() && points_.back().value == v) {
      ++points_.back().count;
    } else {
      points_.push_back({v, 1});
    }
  }
  cumulative_.reserve(points_.size());
  std::size_t running = 0;
  for (const auto& p : points_) {
    running += p.count;
    cumulative_.push_back(running);
  }
}

double EmpiricalCDF::eval(double x) const noexcept {
  const auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                   [](double v, const EcdfPoint& p) { return v < p.value; });
  if (it == points_.begin()) return 0.0;
  const auto idx = static_cast<std::size_t>(it - points_.begin()) - 1;
  if (cumulative_[idx] == n_) return 1.0;
  return static_cast<double>(cumulative_[idx]) / static_cast<double>(n_);
}

double EmpiricalCDF::order_statistic(std::size_t k) const noexcept {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), k);
  return points_[static_cast<std::size_t>(it - cumulative_.begin())].value;
}

EmpiricalCDF ecdf_build(const Dataset& data) { return EmpiricalCDF(data); }

double ecdf_eval(const EmpiricalCDF& ecdf, double x) noexcept { return ecdf.eval(x); }

// ---------------------------------------------------------------------------

ParametricBase ParametricBase::normal(double mean, double sd) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd <= 0.0) {
    throw InvalidInput("normal base requires finite mean and sd > 0");
  }
  return {Family::Normal, mean, sd};
}

ParametricBase ParametricBase::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InvalidInput("uniform base requires finite lo < hi");
  }
  return {Family::Uniform, lo, hi};
}

double ParametricBase::quantile(double u) const {
  if (family_ == Family::Uniform) return first_ + u * (second_ - first_);
  return first_ - second_ * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

MixtureBase::MixtureBase(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidInput("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || c.weight > 1.0) {
      throw InvalidInput("mixture weights must lie in (0, 1]");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kMixtureWeightTolerance) {
    throw InvalidInput("mixture weights must sum to 1");
  }
}

namespace {

std::string format_param(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

}  // namespace

std::string describe(const SimpleMeasure& measure) {
  if (std::holds_alternative<EmpiricalBase>(measure)) return "empirical";
  const auto& p = std::get<ParametricBase>(measure);
  const char* name = p.family() == Family::Normal ? "normal:" : "uniform:";
  return name + format_param(p.first()) + "," + format_param(p.second());
}

// ---------------------------------------------------------------------------

DPParams::DPParams(double alpha, BaseMeasure base) : alpha_(alpha), base_(std::move(base)) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidInput("concentration alpha must be finite and >= 0");
  }
}

void DiscreteMeasure::validate() const {
  if (atoms.empty() || atoms.size() != weights.size()) {
    throw InvalidInput("discrete measure needs equal, nonzero numbers of atoms and weights");
  }
  if (!(residual >= 0.0)) throw InvalidInput("discrete measure residual must be >= 0");
  double total = residual;
  for (double w : weights) {
    if (!(w > 0.0) || w > 1.0) throw InvalidInput("discrete measure weights must lie in (0, 1]");
    total += w;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw InvalidInput("discrete measure mass does not sum to 1");
  }
}

// ---------------------------------------------------------------------------

Functional Functional::quantile(double p) {
  Functional f{Kind::Quantile, p};
  f.validate();
  return f;
}

void Functional::validate() const {
  if (kind == Kind::Quantile && !(p > 0.0 && p < 1.0)) {
    throw InvalidInput("quantile level must lie strictly between 0 and 1");
  }
}

Functional parse_functional(std::string_view text) {
  if (text == "mean") return Functional::mean();
  if (text == "median") return Functional::median();
  if (text == "sd") return Functional::stddev();
  if (text.starts_with("q:")) {
    const auto body = text.substr(2);
    double p = 0.0;
    const auto res = std::from_chars(body.data(), body.data() + body.size(), p);
    if (res.ec != std::errc{} || res.ptr != body.data() + body.size()) {
      throw InvalidInput("malformed quantile functional '" + std::string(text) + "'");
    }
    return Functional::quantile(p);
  }
  throw InvalidInput("unknown functional '" + std::string(text) + "'");
}

std::string to_string(const Functional& f) {
  switch (f.kind) {
    case Functional::Kind::Mean: return "mean";
    case Functional::Kind::Median: return "median";
    case Functional::Kind::StdDev: return "sd";
    case Functional::Kind::Quantile: return "q:" + format_param(f.p);
  }
  return "unknown";
}

namespace {

// Relative slack when testing cumulative weight >= p * total, so that
// normalized uniform weights pick the same order statistic as unit weights.
constexpr double kQuantileSlack = 1e-12;

double weighted_quantile(double p, std::span<const double> values,
                         std::span<const double> weights, double total) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double target = p * total * (1.0 - kQuantileSlack);
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    cumulative += weights[idx];
    if (weights[idx] > 0.0 && cumulative >= target) return values[idx];
  }
  // Only reachable through rounding; return the largest positively weighted value.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (weights[*it] > 0.0) return values[*it];
  }
  return values[order.back()];
}

}  // namespace

double apply_functional(const Functional& f, std::span<const double> values,
                        std::optional<std::span<const double>> weights) {
  f.validate();
  if (values.empty()) throw InvalidInput("functional needs at least one value");
  std::vector<double> unit;
  if (!weights) {
    unit.assign(values.size(), 1.0);
    weights = unit;
  }
  const auto w = *weights;
  if (w.size() != values.size()) throw InvalidInput("weights and values differ in length");
  double total = 0.0;
  for (double wi : w) {
    if (!(wi >= 0.0) || !std::isfinite(wi)) throw InvalidInput("weights must be finite and >= 0");
    total += wi;
  }
  if (!(total > 0.0)) throw InvalidInput("weights must not all be zero");

  switch (f.kind) {
    case Functional::Kind::Mean:
    case Functional::Kind::StdDev: {
      // Shifted by the first value: exact for constant inputs.
      const double shift = values[0];
      double offset = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) offset += w[i] * (values[i] - shift);
      const double mean = shift + offset / total;
      if (f.kind == Functional::Kind::Mean) return mean;
      double ss = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean;
        ss += w[i] * d * d;
      }
      return std::sqrt(ss / total);
    }
    case Functional::Kind::Median:
      return weighted_quantile(0.5, values, w, total);
    case Functional::Kind::Quantile:
      return weighted_quantile(f.p, values, w, total);
  }
  return 0.0;
}

}  // namespace dpboot
