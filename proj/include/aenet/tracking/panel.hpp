#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aenet/types.hpp"

namespace aenet::tracking {

/// Dated index + constituent price matrix. Dates are ISO-8601 strings,
/// strictly increasing; all prices strictly positive; missing cells rejected
/// at load time.
struct PricePanel {
  std::vector<std::string> dates;
  Vec<double> index_prices;        // length T
  Mat<double> asset_prices;        // T x p
  std::vector<std::string> asset_names;

  Index T() const { return index_prices.size(); }
  Index n_assets() const { return asset_prices.cols(); }
  void validate() const;
};

/// CSV schema: header `date,index,<asset names...>`; one row per trading day;
/// decimal prices, no missing cells.
PricePanel load_prices(const std::string& path);
void write_panel(const PricePanel& panel, const std::string& path);
std::string panel_to_csv(const PricePanel& panel);

/// r_t = (P_t - P_{t-1}) / P_{t-1}, length T-1.
Vec<double> daily_returns(const Vec<double>& prices);

/// Annualized tracking error: sqrt(252) times the sample standard deviation
/// (divisor T-1) of err_t = r_t - rhat_t.
double tracking_error(const Vec<double>& actual_returns, const Vec<double>& replicated_returns);

/// Deterministic synthetic panel whose index is an exact basket of k_true
/// assets with i.i.d. noise of standard deviation noise_sd added to its daily
/// returns. Used for tests and demo data; real panels come from load_prices.
struct SyntheticPanelSpec {
  Index T{118};
  Index n_assets{60};
  Index k_true{20};
  double noise_sd{0.001};
  double asset_vol{0.02};
  std::uint64_t seed{1};
};

PricePanel make_synthetic_panel(const SyntheticPanelSpec& spec);

}  // namespace aenet::tracking
