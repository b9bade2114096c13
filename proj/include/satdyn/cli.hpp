#pragma once

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "satdyn/satdyn.hpp"

namespace satdyn::cli {

// Exit-status contract: 0 success, 2 usage error, 3 domain error,
// 4 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNumerical = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All numeric output is printed with 17 significant digits so files
// round-trip bit-exactly through replay.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

inline Model parse_model(const std::string& name) {
  if (name == "standard") return Model::standard;
  if (name == "logistic" || name == "logistic_approx" || name == "logistic-approx") {
    return Model::logistic_approx;
  }
  if (name == "saturated" || name == "saturated_exact" || name == "saturated-exact") {
    return Model::saturated_exact;
  }
  if (name == "saturated_approx" || name == "saturated-approx") {
    return Model::saturated_approx;
  }
  throw UsageError("unknown model '" + name +
                   "' (expected standard | logistic | saturated | saturated_approx)");
}

// --------------------------------------------------------------------------
// flat key = value files: run manifests and config files share the format

inline std::map<std::string, std::string> read_key_values(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open '" + file.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("malformed line in '" + file.string() + "': " + line);
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

inline std::string iso_timestamp() {
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

inline void write_manifest(const std::filesystem::path& dir, const std::string& command,
                           const ManifestEntries& entries) {
  std::ofstream out(dir / "manifest.txt");
  if (!out) throw std::runtime_error("cannot write manifest in '" + dir.string() + "'");
  out << "# run manifest; replay with: satdyn replay " << (dir / "manifest.txt").string() << "\n";
  out << "# generated: " << iso_timestamp() << "\n";
  out << "# estimators: std = sample std dev (n-1 divisor); "
         "kurtosis = excess g2 (population moments)\n";
  out << "# csv schema: v1\n";
  out << "version = " << kVersion << "\n";
  out << "command = " << command << "\n";
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& file) : out_(file) {
    if (!out_) throw std::runtime_error("cannot write '" + file.string() + "'");
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// --------------------------------------------------------------------------
// command option sets

struct SimOptions {
  std::string model = "standard";
  double beta = 0.0;
  double alpha = 0.0041;
  double sigma_scale = 0.157;
  double nu = 2.0;
  double s0 = 50.0;
  std::size_t n = 4096;
  std::uint64_t seed = 0;
  double horizon = 1.0;
  std::string out = ".";
  unsigned workers = 1;
};

struct TableOptions : SimOptions {
  std::string preset;
  std::string betas;  // comma-separated
};

struct FigureOptions {
  int figure = 0;
  std::string betas;  // comma-separated, empty = figure default
  double s0 = 50.0;
  double alpha = 0.0041;
  double sigma = 0.157;
  double nu = 3.0;
  double grid_min = std::numeric_limits<double>::quiet_NaN();
  double grid_max = std::numeric_limits<double>::quiet_NaN();
  std::size_t grid_points = 0;
  std::string out = ".";
};

struct PriceOptions {
  double sigma = 0.157;
  double nu = 3.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::quiet_NaN();
  double confidence = std::numeric_limits<double>::quiet_NaN();
  bool scan = false;
  std::string scan_grid = "10,100,1000";
  bool normalize = false;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::string out = ".";
};

namespace detail {

inline std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out.empty() ? "." : out);
  std::filesystem::create_directories(dir);
  return dir;
}

inline ExperimentConfig to_config(const SimOptions& o, Model model, double beta) {
  ExperimentConfig cfg;
  cfg.model = model;
  cfg.params.s0 = o.s0;
  cfg.params.alpha = o.alpha;
  cfg.params.beta = beta;
  cfg.noise = TDistSpec{o.nu, o.sigma_scale};
  cfg.n_samples = o.n;
  cfg.horizon_days = o.horizon;
  cfg.seed = o.seed;
  return cfg;
}

inline void print_summary_block(std::ostream& os, const StatsSummary& st) {
  auto line = [&](const char* name, double s, double r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-9s %14.6g %14.6g\n", name, s, r);
    os << buf;
  };
  os << "  statistic              S              R\n";
  line("max", st.max_s, st.max_r);
  line("min", st.min_s, st.min_r);
  line("mean", st.mean_s, st.mean_r);
  line("std dev", st.std_s, st.std_r);
  line("kurtosis", st.kurt_s, st.kurt_r);
}

struct StatRow {
  const char* label;
  double StatsSummary::* member;
};

inline constexpr StatRow kStatRows[] = {
    {"max_s", &StatsSummary::max_s},   {"max_r", &StatsSummary::max_r},
    {"min_s", &StatsSummary::min_s},   {"min_r", &StatsSummary::min_r},
    {"mean_s", &StatsSummary::mean_s}, {"mean_r", &StatsSummary::mean_r},
    {"std_s", &StatsSummary::std_s},   {"std_r", &StatsSummary::std_r},
    {"kurt_s", &StatsSummary::kurt_s}, {"kurt_r", &StatsSummary::kurt_r},
};

}  // namespace detail

// --------------------------------------------------------------------------
// commands

inline void cmd_simulate(const SimOptions& opt) {
  const Model model = parse_model(opt.model);
  const auto cfg = detail::to_config(opt, model, opt.beta);
  const auto result = run_experiment(cfg, opt.workers);

  const auto dir = detail::ensure_out_dir(opt.out);
  {
    CsvWriter csv(dir / "samples.csv");
    csv.row({"index", "w", "x", "s", "r"});
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
      const auto& ps = result.samples[i];
      csv.row({std::to_string(i), fmt17(ps.x - opt.alpha * opt.horizon), fmt17(ps.x), fmt17(ps.s),
               fmt17(ps.r)});
    }
  }
  {
    CsvWriter csv(dir / "summary.csv");
    csv.row({"statistic", "value"});
    for (const auto& row : detail::kStatRows) {
      csv.row({row.label, fmt17(result.stats.*(row.member))});
    }
  }
  write_manifest(dir, "simulate",
                 {{"model", model_name(model)},
                  {"beta", fmt17(opt.beta)},
                  {"alpha", fmt17(opt.alpha)},
                  {"sigma_scale", fmt17(opt.sigma_scale)},
                  {"nu", fmt17(opt.nu)},
                  {"s0", fmt17(opt.s0)},
                  {"n", std::to_string(opt.n)},
                  {"seed", std::to_string(opt.seed)},
                  {"horizon", fmt17(opt.horizon)},
                  {"out", opt.out}});

  std::cout << "simulate: model=" << model_name(model) << " beta=" << fmt_short(opt.beta)
            << " n=" << opt.n << " seed=" << opt.seed << "\n";
  detail::print_summary_block(std::cout, result.stats);
  std::cout << "wrote " << (dir / "samples.csv").string() << ", " << (dir / "summary.csv").string()
            << "\n";
}

struct ResolvedTable {
  Model model;
  std::vector<double> betas;
};

inline ResolvedTable resolve_table_preset(const std::string& preset, double s0) {
  if (preset == "table1") {
    return {Model::logistic_approx, {0.0, 0.05 / s0, 0.1 / s0, 0.2 / s0}};
  }
  if (preset == "table2") {
    return {Model::saturated_exact, {0.0, 0.25, 0.5, 1.0}};
  }
  if (preset == "table3") {
    return {Model::saturated_approx, {0.0, 0.4 / s0, 0.8 / s0, 0.9 / s0}};
  }
  throw UsageError("unknown preset '" + preset + "' (expected table1 | table2 | table3)");
}

inline void cmd_table(const TableOptions& opt) {
  ResolvedTable resolved;
  if (!opt.preset.empty()) {
    resolved = resolve_table_preset(opt.preset, opt.s0);
  } else if (!opt.betas.empty()) {
    resolved = {parse_model(opt.model), parse_double_list(opt.betas, "--betas")};
  } else {
    throw UsageError("table: give either --preset table1|table2|table3 or an explicit --betas list");
  }

  const auto base = detail::to_config(opt, resolved.model, 0.0);
  const auto table = comparative_table(base, resolved.betas, opt.workers);

  const auto dir = detail::ensure_out_dir(opt.out);
  {
    CsvWriter csv(dir / "table.csv");
    std::vector<std::string> header{"statistic"};
    for (const double b : table.betas) header.push_back("beta_" + fmt_short(b));
    csv.row(header);
    for (const auto& row : detail::kStatRows) {
      std::vector<std::string> cells{row.label};
      for (const auto& col : table.columns) cells.push_back(fmt17(col.*(row.member)));
      csv.row(cells);
    }
  }
  ManifestEntries entries;
  if (!opt.preset.empty()) {
    entries.emplace_back("preset", opt.preset);
  } else {
    entries.emplace_back("model", model_name(resolved.model));
    entries.emplace_back("betas", opt.betas);
  }
  entries.insert(entries.end(), {{"alpha", fmt17(opt.alpha)},
                                 {"sigma_scale", fmt17(opt.sigma_scale)},
                                 {"nu", fmt17(opt.nu)},
                                 {"s0", fmt17(opt.s0)},
                                 {"n", std::to_string(opt.n)},
                                 {"seed", std::to_string(opt.seed)},
                                 {"horizon", fmt17(opt.horizon)},
                                 {"out", opt.out}});
  write_manifest(dir, "table", entries);

  std::cout << "table: model=" << model_name(resolved.model) << " seed=" << opt.seed << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    std::cout << " column beta=" << fmt_short(table.betas[c]) << "\n";
    detail::print_summary_block(std::cout, table.columns[c]);
  }
  std::cout << "wrote " << (dir / "table.csv").string() << "\n";
}

inline void cmd_figure(const FigureOptions& opt) {
  if (opt.figure < 1 || opt.figure > 6) throw UsageError("figure: id must lie in 1..6");

  ModelParams params;
  params.s0 = opt.s0;
  params.alpha = opt.alpha;
  params.sigma = opt.sigma;

  double gmin = opt.grid_min;
  double gmax = opt.grid_max;
  std::size_t gpts = opt.grid_points;
  auto default_grid = [&](double lo, double hi, std::size_t n) {
    if (std::isnan(gmin)) gmin = lo;
    if (std::isnan(gmax)) gmax = hi;
    if (gpts == 0) gpts = n;
  };
  if (opt.figure == 1) {
    default_grid(0.0, 730.0, 731);
  } else if (opt.figure == 6) {
    default_grid(0.0, 100.0, 1001);
  } else {
    default_grid(-20.0, 20.0, 401);
  }
  if (!(gmax >= gmin) || gpts < 1) throw UsageError("figure: bad grid");
  const double step = gpts > 1 ? (gmax - gmin) / static_cast<double>(gpts - 1) : 0.0;

  std::vector<double> betas;
  if (!opt.betas.empty()) {
    betas = parse_double_list(opt.betas, "--betas");
  } else if (opt.figure == 1) {
    betas = {0.05 / opt.s0, 0.1 / opt.s0, 0.2 / opt.s0, 0.4 / opt.s0};
  } else if (opt.figure == 2 || opt.figure == 3) {
    betas = {0.0, 0.05 / opt.s0, 0.1 / opt.s0, 0.2 / opt.s0};
  } else {
    betas = {0.0, 0.25, 0.5, 1.0};
  }

  const auto dir = detail::ensure_out_dir(opt.out);
  const std::string file = "fig" + std::to_string(opt.figure) + ".csv";

  CsvWriter csv(dir / file);
  if (opt.figure == 6) {
    csv.row({"xi", "numerator", "integrand"});
    for (std::size_t i = 0; i < gpts; ++i) {
      const double xi = gmin + step * static_cast<double>(i);
      csv.row({fmt17(xi), fmt17(std::exp(opt.sigma * xi)),
               fmt17(call_integrand(xi, opt.sigma, opt.nu))});
    }
    const std::vector<double> probs{0.99, 0.999, 0.9999, 0.99999};
    const auto tics = critical_value_tics(opt.nu, probs);
    CsvWriter tics_csv(dir / "fig6_tics.csv");
    tics_csv.row({"prob", "xi"});
    for (std::size_t i = 0; i < probs.size(); ++i) {
      tics_csv.row({fmt17(probs[i]), fmt17(tics[i])});
    }
  } else {
    const bool returns = opt.figure == 3 || opt.figure == 5;
    std::vector<std::string> header{opt.figure == 1 ? "t" : "x"};
    for (const double b : betas) {
      header.push_back(std::string(opt.figure == 1 ? "mean" : (returns ? "r" : "s")) + "_beta_" +
                       fmt_short(b));
    }
    csv.row(header);
    for (std::size_t i = 0; i < gpts; ++i) {
      const double g = gmin + step * static_cast<double>(i);
      std::vector<std::string> cells{fmt17(g)};
      for (const double b : betas) {
        ModelParams p = params;
        p.beta = b;
        double value = 0.0;
        if (opt.figure == 1) {
          value = logistic_mean(p, g);
        } else {
          const AccumulatedNoise noise{g, 1.0, g - p.alpha};
          const PriceSample ps =
              opt.figure <= 3 ? logistic_price_approx(p, noise) : saturated_price(p, noise);
          value = returns ? ps.r : ps.s;
        }
        cells.push_back(fmt17(value));
      }
      csv.row(cells);
    }
  }

  ManifestEntries entries{{"figure", std::to_string(opt.figure)}};
  if (!opt.betas.empty()) entries.emplace_back("betas", opt.betas);
  entries.insert(entries.end(), {{"s0", fmt17(opt.s0)},
                                 {"alpha", fmt17(opt.alpha)},
                                 {"sigma", fmt17(opt.sigma)},
                                 {"nu", fmt17(opt.nu)},
                                 {"grid_min", fmt17(gmin)},
                                 {"grid_max", fmt17(gmax)},
                                 {"grid_points", std::to_string(gpts)},
                                 {"out", opt.out}});
  write_manifest(dir, "figure", entries);
  std::cout << "wrote " << (dir / file).string() << " (" << gpts << " rows)\n";
}

inline void cmd_price(const PriceOptions& opt) {
  const bool have_upper = !std::isnan(opt.upper);
  const bool have_conf = !std::isnan(opt.confidence);
  if (!have_upper && !have_conf) {
    throw UsageError(
        "price: the integral needs an explicit truncation (it diverges for sigma > 0); "
        "give --upper X or --confidence P");
  }
  double upper = opt.upper;
  if (have_conf) upper = t_quantile(opt.confidence, opt.nu);
  if (!std::isfinite(upper)) {
    throw std::domain_error(
        "price: refusing the untruncated integral: for sigma > 0 the integrand grows without "
        "bound, so the integral is infinite; choose a finite --upper or a --confidence level");
  }

  QuadratureSpec spec;
  spec.lower = opt.lower;
  spec.upper = upper;
  spec.sigma = opt.sigma;
  spec.nu = opt.nu;
  spec.abs_tol = opt.abs_tol;
  spec.rel_tol = opt.rel_tol;
  spec.normalize = opt.normalize;
  const double value = truncated_call_integral(spec);

  const auto dir = detail::ensure_out_dir(opt.out);
  {
    CsvWriter csv(dir / "price.csv");
    csv.row({"lower", "upper", "sigma", "nu", "normalized", "value"});
    csv.row({fmt17(spec.lower), fmt17(spec.upper), fmt17(spec.sigma), fmt17(spec.nu),
             spec.normalize ? "1" : "0", fmt17(value)});
  }

  std::cout << "truncation point: " << fmt_short(upper);
  if (have_conf) std::cout << "  (one-tail critical value for P = " << fmt_short(opt.confidence) << ")";
  std::cout << "\nintegral over [" << fmt_short(spec.lower) << ", " << fmt_short(spec.upper)
            << "]: " << fmt17(value) << "\n";

  if (opt.scan) {
    auto grid = parse_double_list(opt.scan_grid, "--scan-grid");
    const auto scan = divergence_scan(opt.sigma, opt.nu, opt.lower, grid, opt.abs_tol, opt.rel_tol);
    CsvWriter csv(dir / "scan.csv");
    csv.row({"upper", "integral"});
    std::cout << "divergence scan:\n";
    for (const auto& [u, v] : scan) {
      csv.row({fmt17(u), fmt17(v)});
      std::cout << "  upper = " << fmt_short(u) << "  integral = " << fmt17(v) << "\n";
    }
  }

  ManifestEntries entries{{"sigma", fmt17(opt.sigma)}, {"nu", fmt17(opt.nu)},
                          {"lower", fmt17(opt.lower)}};
  if (have_conf) {
    entries.emplace_back("confidence", fmt17(opt.confidence));
  } else {
    entries.emplace_back("upper", fmt17(opt.upper));
  }
  entries.insert(entries.end(), {{"scan", opt.scan ? "1" : "0"},
                                 {"scan_grid", opt.scan_grid},
                                 {"normalize", opt.normalize ? "1" : "0"},
                                 {"abs_tol", fmt17(opt.abs_tol)},
                                 {"rel_tol", fmt17(opt.rel_tol)},
                                 {"out", opt.out}});
  write_manifest(dir, "price", entries);
}

// --------------------------------------------------------------------------
// argument plumbing

inline int run_cli(std::vector<std::string> args);

// Replay rebuilds the original argument list from a manifest; --out and
// --workers given on the replay command line win over the recorded values.
inline int cmd_replay(const std::string& manifest_file, const std::optional<std::string>& out,
                      std::optional<unsigned> workers) {
  const auto kv = read_key_values(manifest_file);
  const auto cmd_it = kv.find("command");
  if (cmd_it == kv.end()) {
    throw UsageError("replay: '" + manifest_file + "' has no 'command' key");
  }
  std::vector<std::string> args{cmd_it->second};
  for (const auto& [key, value] : kv) {
    if (key == "command" || key == "version") continue;
    std::string flag = "--" + key;
    for (auto& c : flag) {
      if (c == '_') c = '-';
    }
    if (key == "scan" || key == "normalize") {
      if (value != "0") args.push_back(flag);
      continue;
    }
    if (value.empty()) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  if (out) {
    args.push_back("--out");
    args.push_back(*out);
  }
  if (workers) {
    args.push_back("--workers");
    args.push_back(std::to_string(*workers));
  }
  return run_cli(std::move(args));
}

namespace detail {

// Splices the contents of any --config FILE into the argument list right
// after the subcommand, so explicit flags (parsed later, TakeLast) override
// the file.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> config_args;
  for (std::size_t i = 0; i < args.size();) {
    std::string file;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
      continue;
    }
    for (const auto& [key, value] : read_key_values(file)) {
      if (key == "command" || key == "version") continue;
      std::string flag = "--" + key;
      for (auto& c : flag) {
        if (c == '_') c = '-';
      }
      if (key == "scan" || key == "normalize") {
        if (value != "0") config_args.push_back(flag);
        continue;
      }
      if (value.empty()) continue;
      config_args.push_back(flag);
      config_args.push_back(value);
    }
  }
  if (!config_args.empty() && !args.empty()) {
    args.insert(args.begin() + 1, config_args.begin(), config_args.end());
  }
  return args;
}

inline std::uint64_t env_seed_default() {
  if (const char* env = std::getenv("SATDYN_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 0;
}

inline void add_sim_options(CLI::App* sub, SimOptions& o, bool with_model_beta) {
  auto take_last = [](CLI::Option* opt) { opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
  if (with_model_beta) {
    take_last(sub->add_option("--model", o.model,
                              "price model: standard | logistic | saturated | saturated_approx"));
    take_last(sub->add_option("--beta", o.beta, "saturation parameter (1/currency)"));
  }
  take_last(sub->add_option("--alpha", o.alpha, "drift rate per day"));
  take_last(sub->add_option("--sigma-scale", o.sigma_scale,
                            "noise scale multiplying raw t draws; 0 disables noise"));
  take_last(sub->add_option("--nu", o.nu, "degrees of freedom of the t noise"));
  take_last(sub->add_option("--s0", o.s0, "initial price"));
  take_last(sub->add_option("--n", o.n, "number of samples"));
  take_last(sub->add_option("--seed", o.seed, "RNG seed (SATDYN_SEED env var is the fallback)"));
  take_last(sub->add_option("--horizon", o.horizon, "horizon in days"));
  take_last(sub->add_option("--out", o.out, "output directory"));
  take_last(sub->add_option("--workers", o.workers,
                            "worker threads (execution detail; results are identical for any count)"));
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args) {
  try {
    args = detail::expand_config(std::move(args));

    CLI::App app{"Langevin asset-price models with Student's t noise: simulation tables, "
                 "figure data, and truncated option-pricing integrals"};
    app.require_subcommand(0, 1);
    auto take_last = [](CLI::Option* opt) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };

    SimOptions sim;
    sim.seed = detail::env_seed_default();
    auto* sub_sim = app.add_subcommand("simulate", "run one model over sampled noise and summarize");
    detail::add_sim_options(sub_sim, sim, true);

    TableOptions tab;
    tab.seed = detail::env_seed_default();
    auto* sub_tab = app.add_subcommand("table", "comparative statistics columns over beta values");
    detail::add_sim_options(sub_tab, tab, true);
    auto* preset_opt = sub_tab->add_option("--preset", tab.preset, "table1 | table2 | table3");
    take_last(preset_opt);
    auto* betas_opt = sub_tab->add_option("--betas", tab.betas, "comma-separated beta list");
    take_last(betas_opt);
    preset_opt->excludes(betas_opt);

    FigureOptions fig;
    auto* sub_fig = app.add_subcommand("figure", "emit curve data for one of the figures 1..6");
    take_last(sub_fig->add_option("--figure", fig.figure, "figure id in 1..6")->required());
    take_last(sub_fig->add_option("--betas", fig.betas, "comma-separated beta list override"));
    take_last(sub_fig->add_option("--s0", fig.s0, "initial price"));
    take_last(sub_fig->add_option("--alpha", fig.alpha, "drift rate per day"));
    take_last(sub_fig->add_option("--sigma", fig.sigma, "scale parameter"));
    take_last(sub_fig->add_option("--nu", fig.nu, "degrees of freedom (figure 6)"));
    take_last(sub_fig->add_option("--grid-min", fig.grid_min, "grid start"));
    take_last(sub_fig->add_option("--grid-max", fig.grid_max, "grid end"));
    take_last(sub_fig->add_option("--grid-points", fig.grid_points, "grid point count"));
    take_last(sub_fig->add_option("--out", fig.out, "output directory"));

    PriceOptions price;
    auto* sub_price = app.add_subcommand("price", "truncated call-pricing integral");
    take_last(sub_price->add_option("--sigma", price.sigma, "scale parameter of the price model"));
    take_last(sub_price->add_option("--nu", price.nu, "degrees of freedom of the return noise"));
    take_last(sub_price->add_option("--lower", price.lower, "lower integration bound"));
    auto* upper_opt = sub_price->add_option("--upper", price.upper, "truncation point");
    take_last(upper_opt);
    auto* conf_opt = sub_price->add_option("--confidence", price.confidence,
                                           "derive the truncation point from this one-tail probability");
    take_last(conf_opt);
    upper_opt->excludes(conf_opt);
    sub_price->add_flag("--scan", price.scan, "also emit the divergence scan over --scan-grid");
    take_last(sub_price->add_option("--scan-grid", price.scan_grid, "comma-separated truncation grid"));
    sub_price->add_flag("--normalize", price.normalize,
                        "multiply by the t density constant (probability-weighted tail)");
    take_last(sub_price->add_option("--abs-tol", price.abs_tol, "absolute quadrature tolerance"));
    take_last(sub_price->add_option("--rel-tol", price.rel_tol, "relative quadrature tolerance"));
    take_last(sub_price->add_option("--out", price.out, "output directory"));

    std::string replay_manifest;
    std::string replay_out;
    unsigned replay_workers = 0;
    auto* sub_replay = app.add_subcommand("replay", "re-run a manifest bit-exactly");
    sub_replay->add_option("manifest", replay_manifest, "manifest file to replay")->required();
    auto* replay_out_opt = sub_replay->add_option("--out", replay_out, "override output directory");
    auto* replay_workers_opt = sub_replay->add_option("--workers", replay_workers, "worker threads");

    try {
      std::vector<const char*> argv;
      argv.reserve(args.size() + 1);
      argv.push_back("satdyn");
      for (const auto& a : args) argv.push_back(a.c_str());
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitUsage;
    }

    if (sub_sim->parsed()) {
      cmd_simulate(sim);
    } else if (sub_tab->parsed()) {
      cmd_table(tab);
    } else if (sub_fig->parsed()) {
      cmd_figure(fig);
    } else if (sub_price->parsed()) {
      cmd_price(price);
    } else if (sub_replay->parsed()) {
      return cmd_replay(replay_manifest,
                        replay_out_opt->count() ? std::optional<std::string>(replay_out)
                                                : std::nullopt,
                        replay_workers_opt->count() ? std::optional<unsigned>(replay_workers)
                                                    : std::nullopt);
    } else {
      std::cerr << "usage error: expected a subcommand "
                   "(simulate | table | figure | price | replay); see --help\n";
      return kExitUsage;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

inline int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args));
}

}  // namespace satdyn::cli
