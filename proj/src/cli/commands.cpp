#include "aenet/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

#include "aenet/cli/config.hpp"
#include "aenet/io/dataset_csv.hpp"
#include "aenet/io/format.hpp"
#include "aenet/lars.hpp"
#include "aenet/oracle.hpp"
#include "aenet/sim/benchmark.hpp"
#include "aenet/sim/design.hpp"
#include "aenet/solve.hpp"
#include "aenet/ssls.hpp"
#include "aenet/standardize.hpp"
#include "aenet/tracking/backtest.hpp"
#include "aenet/tracking/panel.hpp"

namespace aenet::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

MethodTag parse_method(const std::string& name) {
  if (name == "lasso") return MethodTag::lasso;
  if (name == "elastic_net") return MethodTag::elastic_net;
  if (name == "adaptive_lasso") return MethodTag::adaptive_lasso;
  if (name == "adaptive_elastic_net") return MethodTag::adaptive_elastic_net;
  if (name == "ssls") return MethodTag::ssls;
  if (name == "ols") return MethodTag::ols;
  throw std::runtime_error("unknown method '" + name + "'");
}

sim::CovKind parse_cov(const std::string& name) {
  if (name == "identity") return sim::CovKind::identity;
  if (name == "ar1") return sim::CovKind::ar1;
  if (name == "ic_violation") return sim::CovKind::ic_violation;
  throw std::runtime_error("unknown covariance kind '" + name + "'");
}

sim::SimDesign parse_design(const Settings& s, const std::string& where) {
  s.check_allowed({"n", "p", "beta", "sigma", "cov", "rho", "seed"}, where);
  sim::SimDesign d;
  d.n = s.get_index("n", 0);
  d.p = s.get_index("p", 0);
  const std::vector<double> beta = s.get_doubles("beta");
  d.beta_true = Eigen::Map<const Vec<double>>(beta.data(), static_cast<Index>(beta.size()));
  d.sigma = s.get_double("sigma", 1.0);
  d.cov = parse_cov(s.get_str("cov", "identity"));
  d.rho = s.get_double("rho", 0.0);
  d.seed = s.get_seed("seed", 0);
  d.validate();
  return d;
}

Settings command_settings(const std::string& command, const CommonFlags& flags) {
  Settings s;
  if (!flags.config_path.empty()) {
    const ConfigFile cfg = ConfigFile::parse_file(flags.config_path);
    if (const Settings* sec = cfg.find(command)) s = *sec;
  }
  for (const auto& [key, value] : flags.overrides) s.set(key, value);
  if (!flags.out_dir.empty()) s.set("out_dir", flags.out_dir);
  if (flags.seed) s.set("seed", std::to_string(*flags.seed));
  if (flags.workers) s.set("workers", std::to_string(*flags.workers));
  return s;
}

fs::path prepare_out_dir(const Settings& s) {
  const fs::path dir = s.get_str("out_dir", ".");
  fs::create_directories(dir);
  return dir;
}

/// Adaptive initial estimate on the standardized data per the `init` key.
Vec<double> initial_for(const Dataset<double>& sds, const Settings& s) {
  const std::string init = s.get_str("init", "lasso");
  std::optional<double> sigma;
  if (s.has("sigma")) sigma = s.get_double("sigma", 0.0);
  if (init == "lasso") return initial_estimator(sds, sigma);
  if (init == "marginal")
    return Vec<double>(sds.X().transpose() * sds.y() / static_cast<double>(sds.n()));
  throw std::runtime_error("unknown init '" + init + "' (use lasso or marginal)");
}

double lambda1_for(const Dataset<double>& sds, const Settings& s) {
  if (s.has("lambda1")) return s.get_double("lambda1", 0.0);
  const double sigma =
      s.has("sigma") ? s.get_double("sigma", 0.0) : estimate_noise_sd(sds);
  return selection_lambda1<double>(sds.n(), sds.p(), sigma);
}

int cmd_fit(const Settings& s) {
  s.check_allowed({"data", "method", "lambda1", "lambda2", "gamma", "k", "sigma", "init",
                   "out_dir", "seed", "workers"},
                  "[fit]");
  const Dataset<double> ds = io::read_dataset_csv(s.require_str("data"));
  auto [sds, rec] = standardize(ds, /*drop_constant_columns=*/true);
  const fs::path out_dir = prepare_out_dir(s);

  const MethodTag method = parse_method(s.get_str("method", "adaptive_elastic_net"));
  const double gamma = s.get_double("gamma", 1.0);
  const double lambda2 = s.get_double("lambda2", 1e-4);

  FitResult<double> fit;
  double lambda1 = 0.0;
  if (method == MethodTag::ols) {
    std::vector<Index> all(static_cast<std::size_t>(sds.p()));
    for (Index j = 0; j < sds.p(); ++j) all[static_cast<std::size_t>(j)] = j;
    fit = ols_refit(sds, SupportSet(std::move(all)));
  } else if (method == MethodTag::ssls) {
    SslsConfig<double> cfg;
    cfg.selector = MethodTag::adaptive_elastic_net;
    cfg.penalty.lambda2 = lambda2;
    cfg.penalty.gamma = gamma;
    if (s.has("k")) {
      cfg.k_target = s.get_index("k", 0);
    } else {
      lambda1 = lambda1_for(sds, s);
      cfg.penalty.lambda1 = lambda1;
    }
    fit = fit_ssls(sds, cfg, initial_for(sds, s));
  } else {
    PenaltySpec<double> spec;
    lambda1 = lambda1_for(sds, s);
    spec.lambda1 = lambda1;
    spec.gamma = gamma;
    switch (method) {
      case MethodTag::lasso:
        spec.lambda2 = 0.0;
        spec.weights = Vec<double>::Ones(sds.p());
        break;
      case MethodTag::elastic_net:
        spec.lambda2 = lambda2;
        spec.weights = Vec<double>::Ones(sds.p());
        break;
      case MethodTag::adaptive_lasso:
        spec.lambda2 = 0.0;
        break;
      case MethodTag::adaptive_elastic_net:
        spec.lambda2 = lambda2;
        break;
      default:
        throw std::runtime_error("unsupported fit method");
    }
    if (spec.weights.size() == 0) {
      fit = fit_adaptive_elastic_net(sds, spec, initial_for(sds, s));
    } else {
      fit = fit_adaptive_elastic_net(sds, spec);
    }
    fit.method_tag = method;
  }

  const Vec<double> beta = rec.coef_to_original(fit.beta);
  std::string coeffs = "index,name,value\n";
  for (Index j = 0; j < beta.size(); ++j) {
    const std::string name = ds.column_names().empty()
                                 ? "x" + std::to_string(j + 1)
                                 : ds.column_names()[static_cast<std::size_t>(j)];
    coeffs += std::to_string(j) + "," + name + "," + io::full(beta[j]) + "\n";
  }
  write_file(out_dir / "coefficients.csv", coeffs);

  std::string summary;
  summary += "method: " + std::string(to_string(fit.method_tag)) + "\n";
  summary += "lambda1: " + io::full(lambda1) + "\n";
  summary += "lambda2: " + io::full(method == MethodTag::lasso ? 0.0 : lambda2) + "\n";
  summary += "gamma: " + io::full(gamma) + "\n";
  summary += "objective: " + io::full(fit.objective) + "\n";
  summary += "kkt_max_violation: " + io::full(fit.kkt_max_violation) + "\n";
  summary += "intercept: " + io::full(rec.intercept(beta)) + "\n";
  summary += "support:";
  const SupportSet support = support_of(beta);
  for (Index j : support.indices()) summary += " " + std::to_string(j);
  summary += "\n";
  write_file(out_dir / "fit_summary.txt", summary);
  return 0;
}

int cmd_path(const Settings& s) {
  s.check_allowed(
      {"data", "lambda2", "gamma", "sigma", "init", "max_breakpoints", "out_dir", "seed",
       "workers"},
      "[path]");
  const Dataset<double> ds = io::read_dataset_csv(s.require_str("data"));
  auto [sds, rec] = standardize(ds, /*drop_constant_columns=*/true);
  const fs::path out_dir = prepare_out_dir(s);

  const double lambda2 = s.get_double("lambda2", 0.0);
  const double gamma = s.get_double("gamma", 0.0);
  Vec<double> weights;
  if (gamma > 0) {
    weights = adaptive_weights(initial_for(sds, s), gamma);
  } else {
    weights = Vec<double>::Ones(sds.p());
  }
  const Index max_steps =
      s.get_index("max_breakpoints", 8 * std::min(sds.n() + sds.p(), sds.p()) + 64);
  const RegularizationPath<double> path = weighted_path(sds, lambda2, weights, max_steps);

  std::string knots = "breakpoint,lambda1,support_size\n";
  std::string coefs = "breakpoint,lambda1,index,name,value\n";
  for (std::size_t b = 0; b < path.breakpoints.size(); ++b) {
    const auto& bp = path.breakpoints[b];
    knots += std::to_string(b) + "," + io::full(bp.lambda1) + "," +
             std::to_string(bp.support.size()) + "\n";
    const Vec<double> beta = rec.coef_to_original(bp.beta);
    const SupportSet bp_support = support_of(beta);
    for (Index j : bp_support.indices()) {
      const std::string name = ds.column_names().empty()
                                   ? "x" + std::to_string(j + 1)
                                   : ds.column_names()[static_cast<std::size_t>(j)];
      coefs += std::to_string(b) + "," + io::full(bp.lambda1) + "," + std::to_string(j) +
               "," + name + "," + io::full(beta[j]) + "\n";
    }
  }
  write_file(out_dir / "path.csv", knots);
  write_file(out_dir / "path_coefficients.csv", coefs);
  return 0;
}

int cmd_simulate(const Settings& s) {
  s.check_allowed({"n", "p", "beta", "sigma", "cov", "rho", "seed", "replicate", "out_dir",
                   "workers"},
                  "[simulate]");
  Settings design_keys;
  for (const char* key : {"n", "p", "beta", "sigma", "cov", "rho", "seed"})
    if (s.has(key)) design_keys.set(key, s.get_str(key));
  const sim::SimDesign design = parse_design(design_keys, "[simulate]");
  const fs::path out_dir = prepare_out_dir(s);

  auto [ds, beta_true] = sim::generate(design, s.get_seed("replicate", 0));
  io::write_dataset_csv(ds, (out_dir / "dataset.csv").string());
  std::string truth = "index,value\n";
  for (Index j = 0; j < beta_true.size(); ++j)
    truth += std::to_string(j) + "," + io::full(beta_true[j]) + "\n";
  write_file(out_dir / "beta_true.csv", truth);
  return 0;
}

int cmd_benchmark(const Settings& s, const CommonFlags& flags) {
  s.check_allowed({"designs", "methods", "r", "gamma", "lambda2_grid", "sigma_mode",
                   "out_dir", "seed", "workers"},
                  "[benchmark]");
  if (flags.config_path.empty()) throw std::runtime_error("benchmark requires --config");
  const ConfigFile cfg = ConfigFile::parse_file(flags.config_path);

  std::vector<sim::SimDesign> designs;
  const std::vector<std::string> names = s.get_strs("designs");
  if (names.empty()) throw std::runtime_error("benchmark: no designs listed");
  for (const auto& name : names) {
    const Settings* sec = cfg.find("design " + name);
    if (!sec) throw std::runtime_error("benchmark: missing section [design " + name + "]");
    designs.push_back(parse_design(*sec, "[design " + name + "]"));
  }
  if (s.has("seed")) {
    const std::uint64_t base = s.get_seed("seed", 0);
    for (std::size_t i = 0; i < designs.size(); ++i)
      designs[i].seed = base + static_cast<std::uint64_t>(i);
  }

  std::vector<MethodTag> methods;
  for (const auto& m : s.get_strs("methods")) methods.push_back(parse_method(m));
  if (methods.empty())
    methods = {MethodTag::lasso, MethodTag::elastic_net, MethodTag::adaptive_lasso,
               MethodTag::adaptive_elastic_net, MethodTag::ssls};

  sim::BenchmarkOptions opts;
  opts.gamma = s.get_double("gamma", 1.0);
  if (s.has("lambda2_grid")) opts.lambda2_grid = s.get_doubles("lambda2_grid");
  const std::string sigma_mode = s.get_str("sigma_mode", "design");
  if (sigma_mode == "design") opts.sigma_from_design = true;
  else if (sigma_mode == "auto") opts.sigma_from_design = false;
  else throw std::runtime_error("benchmark: sigma_mode must be 'design' or 'auto'");
  opts.workers = static_cast<int>(s.get_index("workers", 1));

  const int R = static_cast<int>(s.get_index("r", 100));
  const sim::BenchmarkReport report = sim::run_benchmark(designs, methods, R, opts);

  const fs::path out_dir = prepare_out_dir(s);
  write_file(out_dir / "benchmark.csv", report.to_csv());
  write_file(out_dir / "benchmark.txt", report.to_text());
  return 0;
}

int cmd_track(const Settings& s) {
  s.check_allowed({"panel", "methods", "k_list", "lambda2", "gamma", "n_train", "n_test",
                   "stride", "regress_returns", "out_dir", "seed", "workers"},
                  "[track]");
  const tracking::PricePanel panel = tracking::load_prices(s.require_str("panel"));

  tracking::TrackingOptions opts;
  opts.lambda2 = s.get_double("lambda2", 1e-4);
  opts.gamma = s.get_double("gamma", 1.0);
  opts.regress_returns = s.get_bool("regress_returns", false);
  opts.n_train = s.get_index("n_train", 98);
  opts.n_test = s.get_index("n_test", 20);
  opts.stride = s.get_index("stride", -1);
  opts.workers = static_cast<int>(s.get_index("workers", 1));

  std::vector<Index> k_list = s.get_indices("k_list");
  if (k_list.empty()) throw std::runtime_error("track: k_list is required");

  std::vector<MethodTag> methods;
  for (const auto& m : s.get_strs("methods")) methods.push_back(parse_method(m));
  if (methods.empty()) methods = {MethodTag::ssls, MethodTag::lasso};

  std::vector<tracking::TrackingReport> parts;
  for (MethodTag method : methods)
    parts.push_back(tracking::backtest(panel, method, k_list, opts));
  const tracking::TrackingReport report = tracking::merge_reports(parts);

  const fs::path out_dir = prepare_out_dir(s);
  write_file(out_dir / "tracking_report.csv", report.report_csv());
  write_file(out_dir / "tracking_weights.csv", report.weights_csv());
  write_file(out_dir / "tracking_summary.txt", report.summary_text());
  return 0;
}

}  // namespace

int run_command(const std::string& command, const CommonFlags& flags) {
  try {
    const Settings s = command_settings(command, flags);
    if (command == "fit") return cmd_fit(s);
    if (command == "path") return cmd_path(s);
    if (command == "simulate") return cmd_simulate(s);
    if (command == "benchmark") return cmd_benchmark(s, flags);
    if (command == "track") return cmd_track(s);
    throw std::runtime_error("unknown command '" + command + "'");
  } catch (const std::exception& e) {
    std::cerr << "error: " << command << ": " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace aenet::cli
