#include "aenet/sim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aenet/lars.hpp"
#include "aenet/parallel.hpp"
#include "aenet/solve.hpp"
#include "aenet/ssls.hpp"
#include "aenet/standardize.hpp"

namespace aenet::sim {

namespace {

Vec<double> marginal_init(const Dataset<double>& ds) {
  return ds.X().transpose() * ds.y() / static_cast<double>(ds.n());
}

/// Standardized-scale fit for the configured selector.
FitResult<double> run_selector(const Dataset<double>& sds, const SelectorOptions& sel,
                               std::optional<double> sigma) {
  const Index p = sds.p();
  const double sd = sigma ? *sigma : estimate_noise_sd(sds);
  const double lambda1 = selection_lambda1<double>(sds.n(), p, sd);

  Vec<double> weights;
  double lambda2 = sel.lambda2;
  switch (sel.method) {
    case MethodTag::lasso:
      weights = Vec<double>::Ones(p);
      lambda2 = 0.0;
      break;
    case MethodTag::elastic_net:
      weights = Vec<double>::Ones(p);
      break;
    case MethodTag::adaptive_lasso:
    case MethodTag::adaptive_elastic_net:
    case MethodTag::ssls: {
      const Vec<double> init = sel.init == InitKind::lasso ? initial_estimator(sds, sigma)
                                                           : marginal_init(sds);
      weights = adaptive_weights(init, sel.gamma);
      if (sel.method == MethodTag::adaptive_lasso) lambda2 = 0.0;
      break;
    }
    default:
      throw std::invalid_argument("run_selector: unsupported method");
  }

  PenaltySpec<double> spec;
  spec.lambda1 = lambda1;
  spec.lambda2 = lambda2;
  spec.weights = weights;
  FitResult<double> fit = fit_adaptive_elastic_net(sds, spec);
  if (sel.method == MethodTag::ssls) {
    const SupportSet selected = fit.support;
    fit = ols_refit(sds, selected);
    fit.support = selected;
    fit.method_tag = MethodTag::ssls;
  }
  return fit;
}

struct SelectionDraw {
  Vec<double> beta_orig;
  SupportSet support;
  bool ok{false};
};

SelectionDraw one_draw(const SimDesign& design, std::uint64_t rep, const SelectorOptions& sel) {
  SelectionDraw out;
  try {
    auto [ds, beta_true] = generate(design, rep);
    auto [sds, rec] = standardize(ds);
    std::optional<double> sigma;
    if (sel.sigma_from_design && design.sigma > 0) sigma = design.sigma;
    const FitResult<double> fit = run_selector(sds, sel, sigma);
    out.beta_orig = rec.coef_to_original(fit.beta);
    out.support = support_of(out.beta_orig);
    out.ok = true;
  } catch (const std::exception&) {
    out.ok = false;
  }
  return out;
}

}  // namespace

std::vector<AccuracyPoint> consistency_curve(const SimDesign& base,
                                             const std::vector<Index>& n_grid, int R,
                                             const SelectorOptions& sel) {
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("consistency_curve: n_grid must be increasing");

  std::vector<AccuracyPoint> out;
  for (Index n : n_grid) {
    SimDesign design = base;
    design.n = n;
    design.seed = base.seed + static_cast<std::uint64_t>(n) * 0x10001ULL;
    const SupportSet truth = support_of(design.full_beta());

    std::vector<SelectionDraw> slots(static_cast<std::size_t>(R));
    parallel_for(static_cast<std::size_t>(R), sel.workers, [&](std::size_t r) {
      slots[r] = one_draw(design, static_cast<std::uint64_t>(r), sel);
    });

    AccuracyPoint pt;
    pt.n = n;
    int hits = 0;
    for (const auto& draw : slots) {
      if (!draw.ok) {
        ++pt.n_failed;
        continue;
      }
      ++pt.n_ok;
      if (draw.support == truth) ++hits;
    }
    if (pt.n_ok > 0) {
      pt.accuracy = static_cast<double>(hits) / pt.n_ok;
      pt.se = std::sqrt(pt.accuracy * (1.0 - pt.accuracy) / pt.n_ok);
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<DecayPoint> error_decay(const SimDesign& base, const std::vector<Index>& n_grid,
                                    int R, const SelectorOptions& sel) {
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("error_decay: n_grid must be increasing");

  struct DrawPair {
    Vec<double> aen, ssls;
    double oracle_trace{0};
    bool correct{false};
    bool ok{false};
  };

  std::vector<DecayPoint> out;
  for (Index n : n_grid) {
    SimDesign design = base;
    design.n = n;
    design.seed = base.seed + static_cast<std::uint64_t>(n) * 0x20003ULL;
    const Vec<double> beta_true = design.full_beta();
    const SupportSet truth = support_of(beta_true);

    std::vector<DrawPair> slots(static_cast<std::size_t>(R));
    parallel_for(static_cast<std::size_t>(R), sel.workers, [&](std::size_t r) {
      DrawPair& slot = slots[r];
      try {
        auto [ds, bt] = generate(design, static_cast<std::uint64_t>(r));
        auto [sds, rec] = standardize(ds);
        std::optional<double> sigma;
        if (sel.sigma_from_design && design.sigma > 0) sigma = design.sigma;
        SelectorOptions aen_sel = sel;
        aen_sel.method = MethodTag::adaptive_elastic_net;
        const FitResult<double> aen = run_selector(sds, aen_sel, sigma);
        slot.aen = rec.coef_to_original(aen.beta);
        FitResult<double> refit = ols_refit(sds, aen.support);
        slot.ssls = rec.coef_to_original(refit.beta);
        slot.correct = support_of(slot.ssls) == truth;

        const Index q = static_cast<Index>(truth.size());
        Mat<double> Xs(ds.n(), q);
        for (Index i = 0; i < q; ++i) Xs.col(i) = ds.X().col(truth.indices()[i]);
        slot.oracle_trace = (Xs.transpose() * Xs).inverse().trace();
        slot.ok = true;
      } catch (const std::exception&) {
        slot.ok = false;
      }
    });

    DecayPoint pt;
    pt.n = n;
    Vec<double> aen_mean = Vec<double>::Zero(design.p);
    Vec<double> ssls_mean = Vec<double>::Zero(design.p);
    int correct = 0;
    for (const auto& slot : slots) {
      if (!slot.ok) continue;
      ++pt.n_ok;
      aen_mean += slot.aen;
      ssls_mean += slot.ssls;
      pt.aen_mse += (slot.aen - beta_true).squaredNorm();
      pt.ssls_mse += (slot.ssls - beta_true).squaredNorm();
      pt.oracle_mse += design.sigma * design.sigma * slot.oracle_trace;
      if (slot.correct) ++correct;
    }
    if (pt.n_ok > 0) {
      const double inv = 1.0 / pt.n_ok;
      aen_mean *= inv;
      ssls_mean *= inv;
      pt.aen_mse *= inv;
      pt.ssls_mse *= inv;
      pt.oracle_mse *= inv;
      pt.aen_bias2 = (aen_mean - beta_true).squaredNorm();
      pt.ssls_bias2 = (ssls_mean - beta_true).squaredNorm();
      pt.ssls_accuracy = static_cast<double>(correct) / pt.n_ok;
    }
    out.push_back(pt);
  }
  return out;
}

double ks_statistic_normal(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-sample[i] / std::sqrt(2.0));
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

NormalityDiag normality_diag(const SimDesign& design, int R, const Vec<double>& alpha,
                             const SelectorOptions& sel) {
  if (R < 500) throw std::invalid_argument("normality_diag: need R >= 500");
  if (!(design.sigma > 0)) throw std::invalid_argument("normality_diag: sigma must be > 0");
  if (std::abs(alpha.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("normality_diag: alpha must have unit norm");
  const Vec<double> beta_true = design.full_beta();
  const SupportSet truth = support_of(beta_true);
  const Index q = static_cast<Index>(truth.size());
  if (alpha.size() != q)
    throw std::invalid_argument("normality_diag: alpha length must equal |S|");

  struct Stat {
    double t{0};
    bool retained{false};
    bool ok{false};
  };
  std::vector<Stat> slots(static_cast<std::size_t>(R));
  parallel_for(static_cast<std::size_t>(R), sel.workers, [&](std::size_t r) {
    Stat& slot = slots[r];
    try {
      auto [ds, bt] = generate(design, static_cast<std::uint64_t>(r));
      auto [sds, rec] = standardize(ds);
      std::optional<double> sigma;
      if (sel.sigma_from_design) sigma = design.sigma;
      const FitResult<double> fit = run_selector(sds, sel, sigma);
      const Vec<double> beta_orig = rec.coef_to_original(fit.beta);
      slot.ok = true;
      if (!(support_of(beta_orig) == truth)) return;

      Mat<double> Xs(ds.n(), q);
      Vec<double> diff(q);
      for (Index i = 0; i < q; ++i) {
        const Index j = truth.indices()[i];
        Xs.col(i) = ds.X().col(j);
        diff[i] = beta_orig[j] - beta_true[j];
      }
      Eigen::SelfAdjointEigenSolver<Mat<double>> es(Xs.transpose() * Xs);
      slot.t = alpha.dot(es.operatorSqrt() * diff) / design.sigma;
      slot.retained = true;
    } catch (const std::exception&) {
      slot.ok = false;
    }
  });

  NormalityDiag diag;
  diag.total = R;
  for (const auto& slot : slots)
    if (slot.ok && slot.retained) diag.sample.push_back(slot.t);
  diag.retained = static_cast<int>(diag.sample.size());
  if (diag.retained < R / 2)
    throw std::runtime_error("normality_diag: fewer than R/2 correct-selection draws (" +
                             std::to_string(diag.retained) + "/" + std::to_string(R) + ")");
  double mean = 0;
  for (double t : diag.sample) mean += t;
  mean /= diag.retained;
  double var = 0;
  for (double t : diag.sample) var += (t - mean) * (t - mean);
  var /= (diag.retained - 1);
  diag.mean = mean;
  diag.variance = var;
  diag.ks_stat = ks_statistic_normal(diag.sample);
  return diag;
}

IcPathRates ic_path_rates(const SimDesign& design, int R, double lambda2, double gamma,
                          InitKind init, int workers) {
  if (design.cov != CovKind::ic_violation)
    throw std::invalid_argument("ic_path_rates: design must be ic_violation");
  const SupportSet truth = support_of(design.full_beta());

  struct Hit {
    bool aen{false}, lasso{false}, ok{false};
  };
  std::vector<Hit> slots(static_cast<std::size_t>(R));
  parallel_for(static_cast<std::size_t>(R), workers, [&](std::size_t r) {
    Hit& slot = slots[r];
    try {
      auto [ds, bt] = generate(design, static_cast<std::uint64_t>(r));
      auto [sds, rec] = standardize(ds);
      const Index p = sds.p();
      const Index max_steps = 8 * std::min(sds.n() + p, p) + 64;

      std::optional<double> sigma;
      if (design.sigma > 0) sigma = design.sigma;
      const Vec<double> beta_init = init == InitKind::lasso ? initial_estimator(sds, sigma)
                                                            : marginal_init(sds);
      const Vec<double> w = adaptive_weights(beta_init, gamma);
      const RegularizationPath<double> aen_path = weighted_path(sds, lambda2, w, max_steps);
      for (const auto& bp : aen_path.breakpoints)
        if (bp.support == truth) { slot.aen = true; break; }

      const RegularizationPath<double> lasso_path =
          weighted_path(sds, 0.0, Vec<double>::Ones(p).eval(), max_steps);
      for (const auto& bp : lasso_path.breakpoints)
        if (bp.support == truth) { slot.lasso = true; break; }
      slot.ok = true;
    } catch (const std::exception&) {
      slot.ok = false;
    }
  });

  IcPathRates rates;
  rates.R = R;
  int ok = 0, aen = 0, lasso = 0;
  for (const auto& slot : slots) {
    if (!slot.ok) continue;
    ++ok;
    if (slot.aen) ++aen;
    if (slot.lasso) ++lasso;
  }
  if (ok == 0) throw std::runtime_error("ic_path_rates: all replications failed");
  rates.aen_rate = static_cast<double>(aen) / ok;
  rates.lasso_rate = static_cast<double>(lasso) / ok;
  return rates;
}

}  // namespace aenet::sim
