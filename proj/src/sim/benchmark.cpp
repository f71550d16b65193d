#include "aenet/sim/benchmark.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aenet/io/format.hpp"
#include "aenet/losses.hpp"
#include "aenet/parallel.hpp"
#include "aenet/solve.hpp"
#include "aenet/ssls.hpp"
#include "aenet/standardize.hpp"

namespace aenet::sim {

namespace {

struct RepMetrics {
  double l1{0}, l2{0};
  bool acc{false};
  bool ok{false};
};

double rss(const Dataset<double>& ds, const Vec<double>& beta) {
  return (ds.y() - ds.X() * beta).squaredNorm();
}

Vec<double> grid_fit(const Dataset<double>& ds, double lambda1,
                     const std::vector<double>& lambda2_grid, const Vec<double>& weights) {
  Vec<double> best;
  double best_rss = std::numeric_limits<double>::infinity();
  for (double lambda2 : lambda2_grid) {
    PenaltySpec<double> spec;
    spec.lambda1 = lambda1;
    spec.lambda2 = lambda2;
    spec.weights = weights;
    const FitResult<double> fit = fit_adaptive_elastic_net(ds, spec);
    const double r = rss(ds, fit.beta);
    if (r < best_rss) {
      best_rss = r;
      best = fit.beta;
    }
  }
  return best;
}

std::vector<RepMetrics> run_replication(const SimDesign& design, std::uint64_t rep,
                                        const std::vector<MethodTag>& methods,
                                        const BenchmarkOptions& opts) {
  std::vector<RepMetrics> out(methods.size());
  auto [ds, beta_true] = generate(design, rep);
  auto [sds, rec] = standardize(ds);
  const SupportSet true_support = support_of(beta_true);

  std::optional<double> sigma;
  if (opts.sigma_from_design && design.sigma > 0) sigma = design.sigma;

  Vec<double> beta_lasso;    // the rate-lambda lasso fit; also the adaptive init
  Vec<double> weights;       // adaptive weights from the lasso init
  Vec<double> beta_aen;      // best adaptive elastic net over the lambda2 grid
  const Vec<double> unit = Vec<double>::Ones(sds.p());
  const double lambda1 = selection_lambda1<double>(
      sds.n(), sds.p(), sigma ? *sigma : estimate_noise_sd(sds));

  auto lasso_init = [&]() -> const Vec<double>& {
    if (beta_lasso.size() == 0) beta_lasso = initial_estimator(sds, sigma);
    return beta_lasso;
  };
  auto adaptive = [&]() -> const Vec<double>& {
    if (weights.size() == 0) weights = adaptive_weights(lasso_init(), opts.gamma);
    return weights;
  };
  auto aen = [&]() -> const Vec<double>& {
    if (beta_aen.size() == 0) beta_aen = grid_fit(sds, lambda1, opts.lambda2_grid, adaptive());
    return beta_aen;
  };

  for (std::size_t m = 0; m < methods.size(); ++m) {
    try {
      Vec<double> beta_std;
      switch (methods[m]) {
        case MethodTag::lasso:
          beta_std = lasso_init();
          break;
        case MethodTag::elastic_net:
          beta_std = grid_fit(sds, lambda1, opts.lambda2_grid, unit);
          break;
        case MethodTag::adaptive_lasso: {
          PenaltySpec<double> spec;
          spec.lambda1 = lambda1;
          spec.lambda2 = 0.0;
          spec.weights = adaptive();
          beta_std = fit_adaptive_elastic_net(sds, spec).beta;
          break;
        }
        case MethodTag::adaptive_elastic_net:
          beta_std = aen();
          break;
        case MethodTag::ssls:
          beta_std = ols_refit(sds, support_of(aen())).beta;
          break;
        default:
          throw std::invalid_argument("run_benchmark: unsupported method");
      }
      const Vec<double> beta_orig = rec.coef_to_original(beta_std);
      out[m].l1 = l1_loss(beta_orig, beta_true);
      out[m].l2 = l2_loss(beta_orig, beta_true);
      out[m].acc = support_of(beta_orig) == true_support;
      out[m].ok = true;
    } catch (const std::exception&) {
      out[m].ok = false;
    }
  }
  return out;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

}  // namespace

const BenchmarkCell& BenchmarkReport::cell(std::size_t design, MethodTag method) const {
  for (std::size_t m = 0; m < methods.size(); ++m)
    if (methods[m] == method) return cells.at(design).at(m);
  throw std::out_of_range("BenchmarkReport: method not present");
}

BenchmarkReport run_benchmark(const std::vector<SimDesign>& designs,
                              const std::vector<MethodTag>& methods, int R,
                              const BenchmarkOptions& options) {
  if (R < 1) throw std::invalid_argument("run_benchmark: R must be >= 1");
  BenchmarkReport report;
  report.designs = designs;
  report.methods = methods;
  report.replications = R;
  report.cells.resize(designs.size());

  for (std::size_t d = 0; d < designs.size(); ++d) {
    std::vector<std::vector<RepMetrics>> slots(static_cast<std::size_t>(R));
    parallel_for(static_cast<std::size_t>(R), options.workers, [&](std::size_t r) {
      slots[r] = run_replication(designs[d], static_cast<std::uint64_t>(r), methods, options);
    });

    report.cells[d].resize(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<double> l1s, l2s;
      int n_acc = 0, n_ok = 0, n_failed = 0;
      for (int r = 0; r < R; ++r) {
        const RepMetrics& rm = slots[static_cast<std::size_t>(r)][m];
        if (!rm.ok) {
          ++n_failed;
          continue;
        }
        ++n_ok;
        l1s.push_back(rm.l1);
        l2s.push_back(rm.l2);
        if (rm.acc) ++n_acc;
      }
      BenchmarkCell& cell = report.cells[d][m];
      cell.l1 = summarize(l1s);
      cell.l2 = summarize(l2s);
      cell.n_ok = n_ok;
      cell.n_failed = n_failed;
      if (n_ok > 0) {
        cell.accuracy.mean = static_cast<double>(n_acc) / n_ok;
        cell.accuracy.se =
            std::sqrt(cell.accuracy.mean * (1.0 - cell.accuracy.mean) / n_ok);
      }
    }
  }
  return report;
}

std::string BenchmarkReport::to_csv() const {
  std::string out = "design,method,metric,mean,se,n_ok,n_failed\n";
  for (std::size_t d = 0; d < designs.size(); ++d) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const BenchmarkCell& c = cells[d][m];
      const std::string prefix =
          designs[d].label() + "," + std::string(to_string(methods[m])) + ",";
      const std::string suffix =
          "," + std::to_string(c.n_ok) + "," + std::to_string(c.n_failed) + "\n";
      out += prefix + "l1_loss," + io::full(c.l1.mean) + "," + io::full(c.l1.se) + suffix;
      out += prefix + "l2_loss," + io::full(c.l2.mean) + "," + io::full(c.l2.se) + suffix;
      out += prefix + "selection_accuracy," + io::full(c.accuracy.mean) + "," +
             io::full(c.accuracy.se) + suffix;
    }
  }
  return out;
}

std::string BenchmarkReport::to_text() const {
  std::string out;
  for (std::size_t d = 0; d < designs.size(); ++d) {
    out += "Setting: " + designs[d].label() +
           "  (replications=" + std::to_string(replications) + ")\n";
    out += io::pad("method", 22) + io::pad("l1 loss", 10) + io::pad("l2 loss", 10) +
           io::pad("accuracy", 10) + "failed\n";
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const BenchmarkCell& c = cells[d][m];
      out += io::pad(to_string(methods[m]), 22) + io::pad(io::fixed(c.l1.mean, 4), 10) +
             io::pad(io::fixed(c.l2.mean, 4), 10) +
             io::pad(io::fixed(c.accuracy.mean, 2), 10) + std::to_string(c.n_failed) + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace aenet::sim
