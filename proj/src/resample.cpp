#include "dpboot/resample.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace dpboot {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Frequentist: return "frequentist";
    case Method::BayesianDirichlet: return "bayesian";
    case Method::DpStickBreak: return "dp-stickbreak";
    case Method::PolyaUrn: return "polya-urn";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (auto m : {Method::Frequentist, Method::BayesianDirichlet, Method::DpStickBreak,
                 Method::PolyaUrn}) {
    if (text == to_string(m)) return m;
  }
  throw InvalidInput("unknown method '" + std::string(text) + "'");
}

std::string_view to_string(DpReading reading) noexcept {
  switch (reading) {
    case DpReading::Measure: return "measure";
    case DpReading::IidDraws: return "iid";
    case DpReading::LeadingAtoms: return "atoms";
  }
  return "unknown";
}

DpReading parse_dp_reading(std::string_view text) {
  for (auto r : {DpReading::Measure, DpReading::IidDraws, DpReading::LeadingAtoms}) {
    if (text == to_string(r)) return r;
  }
  throw InvalidInput("unknown stick-breaking reading '" + std::string(text) + "'");
}

double replicate(Method method, const Dataset& data, const Functional& f,
                 const ResampleOptions& options, RngStream& src) {
  switch (method) {
    case Method::Frequentist:
      return apply_functional(f, frequentist_bootstrap(data, src).values());
    case Method::BayesianDirichlet: {
      const auto w = bayesian_bootstrap_weights(data.size(), src);
      return apply_functional(f, data.values(), std::span<const double>(w));
    }
    case Method::DpStickBreak:
      switch (options.dp_reading) {
        case DpReading::Measure: {
          const auto m = stick_break(dp0_posterior(data), options.epsilon, src);
          return apply_functional(f, m.atoms, std::span<const double>(m.weights));
        }
        case DpReading::IidDraws:
          return apply_functional(f, dp_bootstrap_sample(data, options.epsilon, src).values());
        case DpReading::LeadingAtoms:
          return apply_functional(f, dp_leading_atoms(data, options.epsilon, src).values());
      }
      break;
    case Method::PolyaUrn:
      return apply_functional(f, polya_urn_predictive(dp0_posterior(data), data.size(), src).values());
  }
  throw InvalidInput("unsupported method");
}

namespace {

template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Ensemble make_ensemble(Method method, const Dataset& data, std::size_t b, const Functional& f,
                       std::uint64_t master_seed, const ResampleOptions& options) {
  if (b == 0) throw InvalidInput("replication count B must be >= 1");
  f.validate();
  if (method == Method::DpStickBreak && !(options.epsilon > 0.0 && options.epsilon < 1.0)) {
    throw InvalidInput("truncation epsilon must lie in (0, 1)");
  }
  Ensemble e{method, f, std::vector<double>(b), master_seed, data.size()};
  parallel_for(b, options.threads, [&](std::size_t i) {
    RngStream src(master_seed, i);
    e.values[i] = replicate(method, data, f, options, src);
  });
  return e;
}

}  // namespace dpboot
