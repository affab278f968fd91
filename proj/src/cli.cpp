#include "dpboot/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpboot/dp.hpp"
#include "dpboot/equiv.hpp"
#include "dpboot/resample.hpp"

namespace dpboot::cli {

namespace {

using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return v;
}

std::pair<double, double> parse_pair(std::string_view body, std::string_view whole) {
  const auto comma = body.find(',');
  const auto a = comma == std::string_view::npos ? std::nullopt : parse_double(trim(body.substr(0, comma)));
  const auto b = comma == std::string_view::npos ? std::nullopt : parse_double(trim(body.substr(comma + 1)));
  if (!a || !b) throw InvalidInput("malformed measure '" + std::string(whole) + "'");
  return {*a, *b};
}

Dataset load_dataset(const std::string& path, std::istream& in) {
  if (path == "-") return parse_dataset(in, "<stdin>");
  std::ifstream file(path);
  if (!file) throw InvalidInput("cannot read input file '" + path + "'");
  return parse_dataset(file, path);
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    std::size_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || v == 0) {
      throw InvalidInput("malformed n grid '" + text + "'");
    }
    grid.push_back(v);
  }
  if (grid.empty()) throw InvalidInput("n grid must not be empty");
  return grid;
}

/// Flags shared by compare and experiment.
struct CompareFlags {
  std::string method_a = "frequentist";
  std::string method_b = "dp-stickbreak";
  std::size_t b = 2000;
  std::string functional = "mean";
  std::uint64_t seed = 0;
  double threshold = 2.0;
  std::size_t reps = 5;
  double epsilon = kDefaultEpsilon;
  std::string format = "csv";
  std::string dp_reading = "measure";
  unsigned threads = 1;

  void attach(CLI::App& cmd, bool with_methods) {
    if (with_methods) {
      cmd.add_option("--method-a", method_a, "frequentist|bayesian|dp-stickbreak|polya-urn")
          ->capture_default_str();
      cmd.add_option("--method-b", method_b, "frequentist|bayesian|dp-stickbreak|polya-urn")
          ->capture_default_str();
    }
    cmd.add_option("--b", b, "Replications per ensemble")->capture_default_str();
    cmd.add_option("--functional", functional, "mean|median|sd|q:P")->capture_default_str();
    cmd.add_option("--seed", seed, "Master seed")->capture_default_str();
    cmd.add_option("--threshold", threshold, "Cross/self distance factor")->capture_default_str();
    cmd.add_option("--reps", reps, "Self-calibration pairs")->capture_default_str();
    cmd.add_option("--epsilon", epsilon, "Stick-breaking truncation mass")->capture_default_str();
    cmd.add_option("--format", format, "csv|json")->capture_default_str();
    cmd.add_option("--dp-reading", dp_reading, "measure|iid|atoms")->capture_default_str();
    cmd.add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();
  }

  CompareOptions options() const {
    if (b == 0) throw InvalidInput("--b must be >= 1");
    if (reps < 3) throw InvalidInput("--reps must be >= 3");
    if (!(threshold > 0.0)) throw InvalidInput("--threshold must be > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("--epsilon must lie in (0, 1)");
    if (format != "csv" && format != "json") throw InvalidInput("unknown format '" + format + "'");
    CompareOptions o;
    o.b = b;
    o.functional = parse_functional(functional);
    o.master_seed = seed;
    o.threshold_factor = threshold;
    o.reps = reps;
    o.resample.epsilon = epsilon;
    o.resample.dp_reading = parse_dp_reading(dp_reading);
    o.resample.threads = threads;
    return o;
  }
};

constexpr const char* kCompareColumns[] = {"method_a", "method_b", "n", "b", "functional",
                                           "cross_ks", "cross_w1", "self_ks_median",
                                           "self_w1_median", "threshold", "verdict"};

constexpr const char* kExperimentColumns[] = {"n",          "b",        "functional",
                                              "cross_ks",   "cross_w1", "self_ks_median",
                                              "self_w1_median", "threshold", "verdict"};

// Every field is kept as its CSV text; JSON numbers are re-parsed from it so
// both encodings carry identical values.
using Row = std::vector<std::pair<std::string, std::string>>;

void write_csv(std::ostream& out, std::span<const char* const> columns, std::span<const Row> rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].second;
    out << '\n';
  }
}

ordered_json row_json(const Row& row, std::span<const char* const> numeric) {
  ordered_json obj = ordered_json::object();
  for (const auto& [key, text] : row) {
    const bool is_number =
        std::find_if(numeric.begin(), numeric.end(), [&](const char* k) { return key == k; }) !=
        numeric.end();
    if (is_number) {
      obj[key] = ordered_json::parse(text);
    } else {
      obj[key] = text;
    }
  }
  return obj;
}

constexpr const char* kNumericColumns[] = {"n",        "b",           "cross_ks",
                                           "cross_w1", "self_ks_median", "self_w1_median",
                                           "threshold"};

int cmd_resample(const std::string& input, const std::string& method_name, std::uint64_t seed,
                 double epsilon, const std::string& output, std::istream& in, std::ostream& out) {
  const Method method = parse_method(method_name);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("--epsilon must lie in (0, 1)");
  const Dataset data = load_dataset(input, in);
  RngStream src(seed, 0);

  std::vector<double> result;
  switch (method) {
    case Method::Frequentist: {
      const auto r = frequentist_bootstrap(data, src);
      result.assign(r.values().begin(), r.values().end());
      break;
    }
    case Method::BayesianDirichlet:
      result = bayesian_bootstrap_weights(data.size(), src);
      break;
    case Method::DpStickBreak: {
      const auto r = dp_bootstrap_sample(data, epsilon, src);
      result.assign(r.values().begin(), r.values().end());
      break;
    }
    case Method::PolyaUrn: {
      const auto r = polya_urn_predictive(dp0_posterior(data), data.size(), src);
      result.assign(r.values().begin(), r.values().end());
      break;
    }
  }

  std::string text;
  for (double v : result) text += format_double(v) + '\n';
  if (output == "-") {
    out << text;
    return kExitOk;
  }
  std::ofstream file(output, std::ios::binary);
  if (!file || !(file << text)) throw InvalidInput("cannot write output file '" + output + "'");
  return kExitOk;
}

int cmd_posterior(const std::string& input, double alpha, const std::string& base_text,
                  std::istream& in, std::ostream& out) {
  if (!std::isfinite(alpha) || alpha < 0.0) throw InvalidInput("--alpha must be finite and >= 0");
  std::optional<BaseMeasure> base;
  if (base_text != "none") base = parse_parametric(base_text);
  if (alpha > 0.0 && !base) throw InvalidInput("--alpha > 0 requires a prior --base");
  const Dataset data = load_dataset(input, in);

  const DPParams posterior =
      (alpha == 0.0 || !base) ? dp0_posterior(data) : conjugate_update(DPParams(alpha, *base), data);

  ordered_json mixture = ordered_json::array();
  if (const auto* mix = std::get_if<MixtureBase>(&posterior.base())) {
    for (const auto& c : mix->components()) {
      mixture.push_back({{"weight", c.weight}, {"component", describe(c.measure)}});
    }
  } else {
    mixture.push_back({{"weight", 1.0}, {"component", "empirical"}});
  }
  ordered_json doc;
  doc["alpha_posterior"] = posterior.alpha();
  doc["mixture"] = std::move(mixture);
  doc["n"] = data.size();
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& input, const CompareFlags& flags, std::istream& in,
                std::ostream& out) {
  const Method a = parse_method(flags.method_a);
  const Method b = parse_method(flags.method_b);
  const CompareOptions options = flags.options();
  const Dataset data = load_dataset(input, in);

  const auto report = compare(a, b, data, options);
  const Row row = {
      {"method_a", std::string(to_string(a))},
      {"method_b", std::string(to_string(b))},
      {"n", std::to_string(data.size())},
      {"b", std::to_string(options.b)},
      {"functional", to_string(options.functional)},
      {"cross_ks", format_double(report.cross.ks)},
      {"cross_w1", format_double(report.cross.wasserstein1)},
      {"self_ks_median", format_double(report.self_ks_median())},
      {"self_w1_median", format_double(report.self_w1_median())},
      {"threshold", format_double(report.threshold_factor)},
      {"verdict", std::string(to_string(report.verdict))},
  };
  if (flags.format == "json") {
    out << row_json(row, kNumericColumns).dump(2) << '\n';
  } else {
    write_csv(out, kCompareColumns, std::span(&row, 1));
  }
  return kExitOk;
}

int cmd_experiment(const std::string& grid_text, const std::string& generator_text,
                   const CompareFlags& flags, std::ostream& out) {
  const auto grid = parse_grid(grid_text);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw InvalidInput("n grid must be strictly increasing");
  }
  const BaseMeasure generator = parse_parametric(generator_text);
  const CompareOptions options = flags.options();

  const auto table = convergence_experiment(grid, generator, options);
  std::vector<Row> rows;
  for (const auto& r : table) {
    rows.push_back({
        {"n", std::to_string(r.n)},
        {"b", std::to_string(options.b)},
        {"functional", to_string(options.functional)},
        {"cross_ks", format_double(r.cross_ks)},
        {"cross_w1", format_double(r.cross_w1)},
        {"self_ks_median", format_double(r.self_ks_median)},
        {"self_w1_median", format_double(r.self_w1_median)},
        {"threshold", format_double(options.threshold_factor)},
        {"verdict", std::string(to_string(r.verdict))},
    });
  }
  if (flags.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) arr.push_back(row_json(row, kNumericColumns));
    out << arr.dump(2) << '\n';
  } else {
    write_csv(out, kExperimentColumns, rows);
  }
  return kExitOk;
}

}  // namespace

Dataset parse_dataset(std::istream& in, std::string_view source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto v = parse_double(t);
    if (!v || !std::isfinite(*v)) {
      throw InvalidInput(std::string(source) + ":" + std::to_string(line_no) +
                         ": not a finite number: '" + std::string(t) + "'");
    }
    values.push_back(*v);
  }
  if (in.bad()) throw InvalidInput("error reading " + std::string(source));
  if (values.empty()) throw InvalidInput(std::string(source) + ": no observations");
  return Dataset(std::move(values));
}

BaseMeasure parse_parametric(std::string_view text) {
  if (text.starts_with("normal:")) {
    const auto [mu, sd] = parse_pair(text.substr(7), text);
    return ParametricBase::normal(mu, sd);
  }
  if (text.starts_with("uniform:")) {
    const auto [lo, hi] = parse_pair(text.substr(8), text);
    return ParametricBase::uniform(lo, hi);
  }
  throw InvalidInput("unknown measure '" + std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(len)};
}

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet-process posterior resampling and bootstrap equivalence checks", "dpboot"};
  app.require_subcommand(1);
  std::function<int()> action;

  // resample
  auto* resample = app.add_subcommand("resample", "Emit one resample (or Dirichlet weight vector)");
  std::string rs_input, rs_method = "frequentist", rs_output = "-";
  std::uint64_t rs_seed = 0;
  double rs_epsilon = kDefaultEpsilon;
  resample->add_option("--input", rs_input, "Data file, one value per line ('-' = stdin)")->required();
  resample->add_option("--method", rs_method, "frequentist|bayesian|dp-stickbreak|polya-urn")
      ->capture_default_str();
  resample->add_option("--seed", rs_seed, "Master seed")->capture_default_str();
  resample->add_option("--epsilon", rs_epsilon, "Stick-breaking truncation mass")->capture_default_str();
  resample->add_option("--output", rs_output, "Output file ('-' = stdout)")->capture_default_str();
  resample->callback([&] {
    action = [&] { return cmd_resample(rs_input, rs_method, rs_seed, rs_epsilon, rs_output, in, out); };
  });

  // posterior
  auto* posterior = app.add_subcommand("posterior", "Conjugate DP posterior as JSON");
  std::string po_input, po_base = "none";
  double po_alpha = 0.0;
  posterior->add_option("--input", po_input, "Data file ('-' = stdin)")->required();
  posterior->add_option("--alpha", po_alpha, "Prior concentration (0 = DP(0) route)")
      ->capture_default_str();
  posterior->add_option("--base", po_base, "normal:MU,SIGMA|uniform:LO,HI|none")->capture_default_str();
  posterior->callback([&] { action = [&] { return cmd_posterior(po_input, po_alpha, po_base, in, out); }; });

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Equivalence verdict between two methods");
  std::string cmp_input;
  CompareFlags cmp_flags;
  compare_cmd->add_option("--input", cmp_input, "Data file ('-' = stdin)")->required();
  cmp_flags.attach(*compare_cmd, true);
  compare_cmd->callback([&] { action = [&] { return cmd_compare(cmp_input, cmp_flags, in, out); }; });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Frequentist vs stick-breaking sweep over n");
  std::string ex_grid, ex_generator = "uniform:0,1";
  CompareFlags ex_flags;
  experiment->add_option("--n-grid", ex_grid, "Comma-separated increasing sample sizes")->required();
  experiment->add_option("--generator", ex_generator, "normal:MU,SIGMA|uniform:LO,HI")
      ->capture_default_str();
  ex_flags.attach(*experiment, false);
  experiment->callback([&] { action = [&] { return cmd_experiment(ex_grid, ex_generator, ex_flags, out); }; });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dpboot: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    err << "dpboot: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace dpboot::cli
