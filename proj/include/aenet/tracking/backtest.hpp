#pragma once

#include <string>
#include <vector>

#include "aenet/tracking/panel.hpp"
#include "aenet/types.hpp"

namespace aenet::tracking {

/// Contiguous train slice immediately followed by a test slice, as
/// half-open row ranges into the panel.
struct BacktestWindow {
  Index train_begin{0}, train_end{0};
  Index test_begin{0}, test_end{0};
};

/// Maximal list of non-overlapping-test windows stepping by `stride`
/// (default n_test), latest-aligned so the final test slice ends at the last
/// date. stride < 0 means stride = n_test.
std::vector<BacktestWindow> make_windows(const PricePanel& panel, Index n_train = 98,
                                         Index n_test = 20, Index stride = -1);

struct TrackingOptions {
  double lambda2{1e-4};
  double gamma{1.0};
  bool regress_returns{false};  // default regresses price levels, scores returns
  Index n_train{98};
  Index n_test{20};
  Index stride{-1};
  int workers{1};
};

struct WindowResult {
  std::string window_start;  // first train date
  std::string window_end;    // last test date
  MethodTag method{MethodTag::ssls};
  Index k{0};
  double fitted_te{0};
  double predicted_te{0};
  std::vector<Index> selected;
  std::vector<double> weights;
  bool failed{false};
  std::string error;
};

struct TrackingReport {
  std::vector<WindowResult> rows;
  std::vector<std::string> asset_names;

  std::string report_csv() const;   // window_start,window_end,method,k,fitted_te,predicted_te
  std::string weights_csv() const;  // window_start,method,k,asset,weight
  std::string summary_text() const; // per-window table, TEs as percentages, k descending
};

/// Rolling-window replication backtest with a fixed stock budget per fit:
/// regress the index on the constituents over each train slice, force the
/// support size to k, and report annualized tracking errors on the train
/// (fitted) and test (predicted) return streams. Failed windows are recorded
/// with a reason; the others proceed.
TrackingReport backtest(const PricePanel& panel, MethodTag method,
                        const std::vector<Index>& k_list, const TrackingOptions& opts = {});

TrackingReport merge_reports(const std::vector<TrackingReport>& reports);

}  // namespace aenet::tracking
