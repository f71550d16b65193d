#include "aenet/tracking/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "aenet/dataset.hpp"
#include "aenet/io/format.hpp"
#include "aenet/lars.hpp"
#include "aenet/parallel.hpp"
#include "aenet/solve.hpp"
#include "aenet/ssls.hpp"
#include "aenet/standardize.hpp"

namespace aenet::tracking {

namespace {

/// Initial estimate for the adaptive selection stage. With fewer assets than
/// observations the least-squares fit is the natural choice; otherwise a
/// lasso-path point with at least k alive coordinates (a budget of k needs k
/// candidates with finite adaptive weights), preferring the rate-lambda
/// solution when its support is already large enough.
Vec<double> initial_for_budget(const Dataset<double>& sds, Index k) {
  const Index n = sds.n();
  const Index p = sds.p();
  if (p < n) return sds.X().colPivHouseholderQr().solve(sds.y());

  const double lam = selection_lambda1<double>(n, p, estimate_noise_sd(sds));
  const Index max_steps = 8 * std::min(n, p) + 64;
  const RegularizationPath<double> path = weighted_path(
      sds, 0.0, Vec<double>::Ones(p).eval(), max_steps, 0.0, std::max<Index>(k + 8, 2 * k));

  const double path_end = path.breakpoints.back().lambda1;
  if (lam >= path_end) {
    Vec<double> beta_rate = path.at(lam);
    if (support_of(beta_rate).size() >= static_cast<std::size_t>(k)) return beta_rate;
  }
  for (const auto& bp : path.breakpoints)
    if (bp.support.size() >= static_cast<std::size_t>(k)) return bp.beta;
  return path.breakpoints.back().beta;
}

/// Path coefficients matching select_k's choice: the beta of the first
/// exact-size-k breakpoint, or the first larger breakpoint truncated to the
/// selected coordinates.
Vec<double> beta_for_budget(const RegularizationPath<double>& path, Index k,
                            const SupportSet& selected) {
  for (const auto& bp : path.breakpoints)
    if (bp.support.size() == static_cast<std::size_t>(k)) return bp.beta;
  for (const auto& bp : path.breakpoints) {
    if (bp.support.size() > static_cast<std::size_t>(k)) {
      Vec<double> beta = Vec<double>::Zero(bp.beta.size());
      for (Index j : selected.indices()) beta[j] = bp.beta[j];
      return beta;
    }
  }
  throw std::runtime_error("beta_for_budget: no breakpoint with k active variables");
}

struct WindowTask {
  BacktestWindow window;
  Index k;
};

WindowResult run_window(const PricePanel& panel, MethodTag method, const WindowTask& task,
                        const TrackingOptions& opts) {
  WindowResult res;
  res.method = method;
  res.k = task.k;
  res.window_start = panel.dates[task.window.train_begin];
  res.window_end = panel.dates[task.window.test_end - 1];
  try {
    const Index n_train = task.window.train_end - task.window.train_begin;
    if (task.k > n_train)
      throw std::invalid_argument("stock budget k exceeds train length");

    Mat<double> Xtr = panel.asset_prices.middleRows(task.window.train_begin, n_train);
    Vec<double> ytr = panel.index_prices.segment(task.window.train_begin, n_train);
    if (opts.regress_returns) {
      Mat<double> R(n_train - 1, Xtr.cols());
      for (Index j = 0; j < Xtr.cols(); ++j) R.col(j) = daily_returns(Vec<double>(Xtr.col(j)));
      Xtr = R;
      ytr = daily_returns(ytr);
    }
    Dataset<double> train(Xtr, ytr);
    auto [sds, rec] = standardize(train, /*drop_constant_columns=*/true);

    Vec<double> beta_std;
    if (method == MethodTag::ssls) {
      const Vec<double> beta_init = initial_for_budget(sds, task.k);
      SslsConfig<double> cfg;
      cfg.selector = MethodTag::adaptive_elastic_net;
      cfg.penalty.lambda2 = opts.lambda2;
      cfg.penalty.gamma = opts.gamma;
      cfg.k_target = task.k;
      beta_std = fit_ssls(sds, cfg, beta_init).beta;
    } else if (method == MethodTag::lasso) {
      const Index p = sds.p();
      const Index max_steps = 8 * std::min(sds.n(), p) + 64;
      const RegularizationPath<double> path = weighted_path(
          sds, 0.0, Vec<double>::Ones(p).eval(), max_steps, 0.0, task.k + 8);
      const SupportSet selected = select_k(path, task.k);
      beta_std = beta_for_budget(path, task.k, selected);
    } else {
      throw std::invalid_argument("backtest: method must be ssls or lasso");
    }

    const Vec<double> beta = rec.coef_to_original(beta_std);
    const SupportSet support = support_of(beta);
    if (support.size() != static_cast<std::size_t>(task.k))
      throw std::runtime_error("fit produced " + std::to_string(support.size()) +
                               " nonzero weights, requested " + std::to_string(task.k));
    const double offset = rec.intercept(beta);

    auto replicate_prices = [&](Index begin, Index len) {
      Vec<double> out(len);
      for (Index i = 0; i < len; ++i)
        out[i] = panel.asset_prices.row(begin + i).dot(beta) + offset;
      return out;
    };

    if (opts.regress_returns) {
      auto replicate_returns = [&](Index begin, Index len) {
        Vec<double> out(len - 1);
        for (Index i = 1; i < len; ++i) {
          const auto row1 = panel.asset_prices.row(begin + i);
          const auto row0 = panel.asset_prices.row(begin + i - 1);
          Vec<double> rets(beta.size());
          for (Index j = 0; j < beta.size(); ++j)
            rets[j] = (row1[j] - row0[j]) / row0[j];
          out[i - 1] = rets.dot(beta) + offset;
        }
        return out;
      };
      const Vec<double> train_prices =
          panel.index_prices.segment(task.window.train_begin, n_train);
      res.fitted_te = tracking_error(daily_returns(train_prices),
                                     replicate_returns(task.window.train_begin, n_train));
      const Index t0 = task.window.test_begin - 1;
      const Index len = task.window.test_end - t0;
      const Vec<double> test_prices = panel.index_prices.segment(t0, len);
      res.predicted_te =
          tracking_error(daily_returns(test_prices), replicate_returns(t0, len));
    } else {
      const Vec<double> train_prices =
          panel.index_prices.segment(task.window.train_begin, n_train);
      res.fitted_te = tracking_error(daily_returns(train_prices),
                                     daily_returns(replicate_prices(task.window.train_begin,
                                                                    n_train)));
      // The first test return references the last train price.
      const Index t0 = task.window.test_begin - 1;
      const Index len = task.window.test_end - t0;
      const Vec<double> test_prices = panel.index_prices.segment(t0, len);
      res.predicted_te = tracking_error(daily_returns(test_prices),
                                        daily_returns(replicate_prices(t0, len)));
    }

    res.selected = support.indices();
    res.weights.reserve(res.selected.size());
    for (Index j : res.selected) res.weights.push_back(beta[j]);
  } catch (const std::exception& e) {
    res.failed = true;
    res.error = e.what();
    res.fitted_te = res.predicted_te = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace

std::vector<BacktestWindow> make_windows(const PricePanel& panel, Index n_train, Index n_test,
                                         Index stride) {
  panel.validate();
  if (n_train < 2 || n_test < 1) throw std::invalid_argument("make_windows: bad slice sizes");
  if (stride < 0) stride = n_test;
  if (stride < 1) throw std::invalid_argument("make_windows: stride must be >= 1");
  const Index T = panel.T();
  if (T < n_train + n_test)
    throw std::invalid_argument("make_windows: panel too short (T=" + std::to_string(T) +
                                ", need >= " + std::to_string(n_train + n_test) + ")");
  std::vector<BacktestWindow> windows;
  for (Index end = T; end - n_test - n_train >= 0; end -= stride) {
    BacktestWindow w;
    w.test_end = end;
    w.test_begin = end - n_test;
    w.train_end = w.test_begin;
    w.train_begin = w.train_end - n_train;
    windows.push_back(w);
  }
  std::reverse(windows.begin(), windows.end());
  return windows;
}

TrackingReport backtest(const PricePanel& panel, MethodTag method,
                        const std::vector<Index>& k_list, const TrackingOptions& opts) {
  if (method != MethodTag::ssls && method != MethodTag::lasso)
    throw std::invalid_argument("backtest: method must be ssls or lasso");
  if (k_list.empty()) throw std::invalid_argument("backtest: empty k_list");
  for (Index k : k_list)
    if (k < 1 || k > opts.n_train)
      throw std::invalid_argument("backtest: every k must be in [1, n_train]");

  const std::vector<BacktestWindow> windows =
      make_windows(panel, opts.n_train, opts.n_test, opts.stride);

  std::vector<WindowTask> tasks;
  for (const auto& w : windows)
    for (Index k : k_list) tasks.push_back({w, k});

  TrackingReport report;
  report.asset_names = panel.asset_names;
  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    report.rows[i] = run_window(panel, method, tasks[i], opts);
  });
  return report;
}

TrackingReport merge_reports(const std::vector<TrackingReport>& reports) {
  TrackingReport merged;
  for (const auto& r : reports) {
    if (merged.asset_names.empty()) merged.asset_names = r.asset_names;
    merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
  }
  std::stable_sort(merged.rows.begin(), merged.rows.end(),
                   [](const WindowResult& a, const WindowResult& b) {
                     return a.window_start < b.window_start;
                   });
  return merged;
}

std::string TrackingReport::report_csv() const {
  std::string out = "window_start,window_end,method,k,fitted_te,predicted_te\n";
  for (const auto& r : rows) {
    out += r.window_start + "," + r.window_end + "," + to_string(r.method) + "," +
           std::to_string(r.k) + "," + io::full(r.fitted_te) + "," +
           io::full(r.predicted_te) + "\n";
  }
  return out;
}

std::string TrackingReport::weights_csv() const {
  std::string out = "window_start,method,k,asset,weight\n";
  for (const auto& r : rows) {
    if (r.failed) continue;
    for (std::size_t i = 0; i < r.selected.size(); ++i) {
      const Index j = r.selected[i];
      out += r.window_start + "," + std::string(to_string(r.method)) + "," +
             std::to_string(r.k) + "," + asset_names[static_cast<std::size_t>(j)] + "," +
             io::full(r.weights[i]) + "\n";
    }
  }
  return out;
}

std::string TrackingReport::summary_text() const {
  // Collect k values (descending) and group rows per window and method.
  std::vector<Index> ks;
  for (const auto& r : rows)
    if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
  std::sort(ks.rbegin(), ks.rend());

  std::vector<std::pair<std::string, MethodTag>> groups;
  std::map<std::pair<std::string, int>, const WindowResult*> lookup;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.window_start, static_cast<int>(r.method));
    if (!lookup.count(key)) groups.push_back({r.window_start, r.method});
    lookup[std::make_pair(r.window_start + "|" + std::to_string(r.k),
                          static_cast<int>(r.method))] = &r;
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::string out = io::pad("window", 12) + io::pad("method", 8);
  for (Index k : ks) out += io::pad("Fitted(" + std::to_string(k) + ")", 12);
  for (Index k : ks) out += io::pad("Pred(" + std::to_string(k) + ")", 12);
  out += "\n";
  for (const auto& [start, method] : groups) {
    out += io::pad(start, 12) + io::pad(to_string(method), 8);
    std::string note;
    for (int block = 0; block < 2; ++block) {
      for (Index k : ks) {
        const auto it = lookup.find(std::make_pair(start + "|" + std::to_string(k),
                                                   static_cast<int>(method)));
        if (it == lookup.end() || it->second->failed) {
          out += io::pad("-", 12);
          if (it != lookup.end() && it->second->failed && note.empty())
            note = "  [failed: " + it->second->error + "]";
          continue;
        }
        const double te = block == 0 ? it->second->fitted_te : it->second->predicted_te;
        out += io::pad(io::fixed(100.0 * te, 2), 12);  // percent, symbol omitted
      }
    }
    out += note + "\n";
  }
  return out;
}

}  // namespace aenet::tracking
