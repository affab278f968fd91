#include "dpboot/dp.hpp"

namespace dpboot {

DPParams conjugate_update(const DPParams& prior, const Dataset& data) {
  if (!(prior.alpha() > 0.0)) {
    throw InvalidInput("conjugate_update needs alpha > 0; use dp0_posterior for the DP(0) prior");
  }
  const double alpha = prior.alpha();
  const double n = static_cast<double>(data.size());
  const double total = alpha + n;
  const double prior_weight = alpha / total;

  std::vector<MixtureComponent> components;
  std::visit(
      [&](const auto& base) {
        using T = std::decay_t<decltype(base)>;
        if constexpr (std::is_same_v<T, MixtureBase>) {
          for (const auto& c : base.components()) {
            components.push_back({c.weight * prior_weight, c.measure});
          }
        } else {
          components.push_back({prior_weight, base});
        }
      },
      prior.base());
  components.push_back({n / total, EmpiricalBase{ecdf_build(data)}});
  return DPParams(total, MixtureBase(std::move(components)));
}

DPParams dp0_posterior(const Dataset& data) {
  return DPParams(static_cast<double>(data.size()), EmpiricalBase{ecdf_build(data)});
}

namespace detail {

void check_sampler_params(const DPParams& dp) {
  if (!(dp.alpha() > 0.0)) throw InvalidInput("sampling requires alpha > 0");
}

void check_sampler_params(const DPParams& dp, double epsilon) {
  check_sampler_params(dp);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidInput("truncation epsilon must lie in (0, 1)");
  }
}

}  // namespace detail

}  // namespace dpboot
