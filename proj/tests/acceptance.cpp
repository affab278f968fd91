// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpboot/cli.hpp"
#include "dpboot/dp.hpp"
#include "dpboot/equiv.hpp"
#include "dpboot/resample.hpp"

using namespace dpboot;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Dataset distinct_uniform(std::size_t n, std::uint64_t seed) {
  return synthesize_dataset(ParametricBase::uniform(0, 1), n, seed);
}

double beta1_cdf(double x, double b) { return 1.0 - std::pow(1.0 - x, b); }

// 1. Conjugate update exactness.
Outcome conjugate_exactness() {
  const auto post = conjugate_update(DPParams(2.0, ParametricBase::normal(0, 1)), Dataset({1, 2, 3}));
  const auto& mix = std::get<MixtureBase>(post.base());
  const double w0 = mix.components()[0].weight;
  const double w1 = mix.components()[1].weight;
  const bool ok = post.alpha() == 5.0 && mix.components().size() == 2 && std::abs(w0 - 0.4) <= 1e-15 &&
                  std::abs(w1 - 0.6) <= 1e-15;
  return {ok, fmt("alpha'=%.17g weights=(%.17g, %.17g)", post.alpha(), w0, w1)};
}

// 2. DP(0) route and its small-alpha agreement.
Outcome dp0_route() {
  double worst = 0.0;
  bool shape_ok = true;
  for (std::size_t n : {1u, 4u, 25u, 100u}) {
    const auto data = distinct_uniform(n, 1000 + n);
    const auto dp0 = dp0_posterior(data);
    shape_ok = shape_ok && dp0.alpha() == static_cast<double>(n) &&
               std::holds_alternative<EmpiricalBase>(dp0.base());
    const auto near = conjugate_update(DPParams(1e-9, ParametricBase::normal(0, 1)), data);
    const auto& mix = std::get<MixtureBase>(near.base());
    // Flattened: prior mass, then per-atom mass against 1/n each.
    worst = std::max(worst, mix.components()[0].weight);
    worst = std::max(worst, std::abs(near.alpha() - dp0.alpha()) / dp0.alpha());
    const auto& emp = std::get<EmpiricalBase>(mix.components()[1].measure).ecdf;
    for (const auto& p : emp.points()) {
      const double near_mass = mix.components()[1].weight * static_cast<double>(p.count) / static_cast<double>(n);
      const double dp0_mass = static_cast<double>(p.count) / static_cast<double>(n);
      worst = std::max(worst, std::abs(near_mass - dp0_mass));
    }
  }
  return {shape_ok && worst <= 1e-5, fmt("max flattened weight gap %.3g (tol 1e-5)", worst)};
}

// 3. Posterior mass on one atom ~ Beta(1, n-1), both routes.
Outcome posterior_mass_law() {
  const std::size_t n = 25;
  const int reps = 5000;
  const auto data = distinct_uniform(n, 3);
  const auto dp = dp0_posterior(data);
  const double y1 = data[0];
  std::vector<double> stick_mass, dirichlet_mass;
  for (int r = 0; r < reps; ++r) {
    RngStream src(0xACCE55, r);
    const auto m = stick_break(dp, kDefaultEpsilon, src);
    double on = 0.0;
    for (std::size_t k = 0; k < m.atoms.size(); ++k) {
      if (m.atoms[k] == y1) on += m.weights[k];
    }
    stick_mass.push_back(on / (1.0 - m.residual));
    RngStream wsrc(0xB00757, r);
    dirichlet_mass.push_back(bayesian_bootstrap_weights(n, wsrc)[0]);
  }
  const auto cdf = [&](double x) { return beta1_cdf(x, n - 1.0); };
  const double p_stick = ks_one_sample_pvalue(ks_one_sample(stick_mass, cdf), stick_mass.size());
  const double p_dir = ks_one_sample_pvalue(ks_one_sample(dirichlet_mass, cdf), dirichlet_mass.size());
  return {p_stick >= 0.01 && p_dir >= 0.01,
          fmt("KS p-values: stick-breaking %.3f, Dirichlet %.3f (need >= 0.01)", p_stick, p_dir)};
}

int count_indistinguishable(Method a, Method b, const ResampleOptions& resample) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto data = distinct_uniform(25, seed);
    CompareOptions o;
    o.b = 2000;
    o.functional = Functional::mean();
    o.threshold_factor = 2.0;
    o.reps = 5;
    o.master_seed = seed;
    o.resample = resample;
    hits += compare(a, b, data, o).verdict == Verdict::Indistinguishable;
  }
  return hits;
}

// 4. Frequentist bootstrap vs stick-breaking at n = 25.
Outcome n25_claim() {
  const int hits = count_indistinguishable(Method::Frequentist, Method::DpStickBreak, ResampleOptions{});
  return {hits >= 90, fmt("%d/100 seeds indistinguishable (need >= 90)", hits)};
}

// 5. Convergence trend over n.
Outcome convergence_trend() {
  CompareOptions o;
  o.b = 2000;
  o.master_seed = 2023;
  const std::vector<std::size_t> grid{10, 25, 100, 400};
  const auto rows = convergence_experiment(grid, ParametricBase::uniform(0, 1), o);
  const auto& first = rows.front();
  const auto& last = rows.back();
  const bool ks_ok = last.cross_ks <= first.cross_ks + 2.0 * first.self_ks_median;
  const bool w1_ok = last.cross_w1 <= first.cross_w1 + 2.0 * first.self_w1_median;
  std::string detail;
  for (const auto& r : rows) detail += fmt("n=%zu ks=%.4f w1=%.5f; ", r.n, r.cross_ks, r.cross_w1);
  detail += fmt("ks bound %.4f, w1 bound %.5f", first.cross_ks + 2.0 * first.self_ks_median,
                first.cross_w1 + 2.0 * first.self_w1_median);
  return {ks_ok && w1_ok, detail};
}

// 6. Two independent samplers of the same DP predictive.
Outcome urn_oracle() {
  ResampleOptions iid;
  iid.dp_reading = DpReading::IidDraws;
  const int hits = count_indistinguishable(Method::PolyaUrn, Method::DpStickBreak, iid);
  return {hits >= 90, fmt("%d/100 seeds indistinguishable (need >= 90)", hits)};
}

// 7. Metric oracles and the null KS exceedance rate.
Outcome metric_oracles() {
  const double ks = ks_two_sample(std::vector<double>{1, 3}, std::vector<double>{2, 4});
  const double w1 = wasserstein1(std::vector<double>{0, 1}, std::vector<double>{1, 2});
  const std::size_t b = 500;
  const int trials = 1000;
  const double critical = 1.63 * std::sqrt(2.0 / b);
  int exceed = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream sa(0x5EED, 2 * t), sb(0x5EED, 2 * t + 1);
    std::vector<double> x(b), y(b);
    for (auto& v : x) v = sa.uniform();
    for (auto& v : y) v = sb.uniform();
    exceed += ks_two_sample(x, y) > critical;
  }
  const double rate = exceed / static_cast<double>(trials);
  const double noise = 3.0 * std::sqrt(0.01 * 0.99 / trials);
  return {ks == 0.5 && w1 == 1.0 && std::abs(rate - 0.01) <= noise,
          fmt("ks=%.17g w1=%.17g null exceedance %.3f (0.01 +/- %.4f)", ks, w1, rate, noise)};
}

// 8. Byte-identical CLI output, with and without worker threads.
Outcome cli_determinism() {
  std::string data;
  for (int i = 0; i < 25; ++i) data += cli::format_double(distinct_uniform(25, 8)[i]) + "\n";
  const std::vector<std::vector<std::string>> commands{
      {"resample", "--input", "-", "--method", "frequentist", "--seed", "1"},
      {"resample", "--input", "-", "--method", "bayesian", "--seed", "1"},
      {"resample", "--input", "-", "--method", "dp-stickbreak", "--seed", "1"},
      {"resample", "--input", "-", "--method", "polya-urn", "--seed", "1"},
      {"posterior", "--input", "-", "--alpha", "2", "--base", "normal:0,1"},
      {"posterior", "--input", "-", "--alpha", "0"},
      {"compare", "--input", "-", "--seed", "4"},
      {"compare", "--input", "-", "--seed", "4", "--format", "json", "--functional", "sd"},
      {"experiment", "--n-grid", "10,25,100", "--b", "500", "--seed", "4"},
  };
  auto invoke = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "dpboot");
    std::istringstream in(data);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return std::make_pair(code, out.str());
  };
  int checked = 0;
  for (const auto& cmd : commands) {
    const auto a = invoke(cmd);
    const auto b = invoke(cmd);
    if (a.first != 0 || a != b) return {false, "mismatch on " + cmd[0]};
    if (cmd[0] == "compare" || cmd[0] == "experiment") {
      auto par = cmd;
      par.insert(par.end(), {"--threads", "4"});
      if (invoke(par) != a) return {false, "thread count changed " + cmd[0]};
    }
    ++checked;
  }
  return {true, fmt("%d commands byte-identical across runs and thread counts", checked)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 conjugate update exactness", conjugate_exactness},
      {"2 DP(0) posterior route", dp0_route},
      {"3 posterior mass law Beta(1, n-1)", posterior_mass_law},
      {"4 frequentist vs stick-breaking at n=25", n25_claim},
      {"5 convergence trend over n", convergence_trend},
      {"6 Polya urn vs stick-breaking oracle", urn_oracle},
      {"7 metric oracles and null KS rate", metric_oracles},
      {"8 CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = check();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
