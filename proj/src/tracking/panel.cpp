#include "aenet/tracking/panel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aenet/io/format.hpp"
#include "aenet/rng.hpp"

namespace aenet::tracking {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool looks_like_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

void PricePanel::validate() const {
  const Index t = T();
  if (t < 1) throw std::invalid_argument("PricePanel: empty panel");
  if (static_cast<Index>(dates.size()) != t || asset_prices.rows() != t)
    throw std::invalid_argument("PricePanel: inconsistent row counts");
  if (static_cast<Index>(asset_names.size()) != asset_prices.cols())
    throw std::invalid_argument("PricePanel: asset name count mismatch");
  for (Index i = 1; i < t; ++i)
    if (dates[i] <= dates[i - 1])
      throw std::invalid_argument("PricePanel: dates not strictly increasing at " + dates[i]);
  if (!(index_prices.array() > 0).all() || !(asset_prices.array() > 0).all())
    throw std::invalid_argument("PricePanel: prices must be > 0");
  if (!index_prices.allFinite() || !asset_prices.allFinite())
    throw std::invalid_argument("PricePanel: non-finite prices");
}

PricePanel load_prices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_prices: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_prices: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "date" || header[1] != "index")
    throw std::runtime_error("load_prices: header must start with 'date,index,...'");

  const std::size_t p = header.size() - 2;
  std::vector<std::string> dates;
  std::vector<double> index_vals;
  std::vector<double> asset_vals;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("load_prices: row " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(header.size()));
    if (!looks_like_iso_date(fields[0]))
      throw std::runtime_error("load_prices: row " + std::to_string(line_no) +
                               ": malformed date '" + fields[0] + "'");
    if (!dates.empty() && fields[0] == dates.back())
      throw std::runtime_error("load_prices: duplicate date " + fields[0]);
    if (!dates.empty() && fields[0] < dates.back())
      throw std::runtime_error("load_prices: dates not increasing at " + fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].empty())
        throw std::runtime_error("load_prices: row " + std::to_string(line_no) +
                                 " (date " + fields[0] + "): missing price in column '" +
                                 header[c] + "'");
      char* end = nullptr;
      const double v = std::strtod(fields[c].c_str(), &end);
      if (end == fields[c].c_str() || *end != '\0' || !std::isfinite(v))
        throw std::runtime_error("load_prices: row " + std::to_string(line_no) +
                                 ": bad number '" + fields[c] + "'");
      if (v <= 0)
        throw std::runtime_error("load_prices: row " + std::to_string(line_no) +
                                 " (date " + fields[0] + "): non-positive price in '" +
                                 header[c] + "'");
      if (c == 1) index_vals.push_back(v);
      else asset_vals.push_back(v);
    }
    dates.push_back(fields[0]);
  }
  if (dates.empty()) throw std::runtime_error("load_prices: no data rows in " + path);

  PricePanel panel;
  const Index t = static_cast<Index>(dates.size());
  panel.dates = std::move(dates);
  panel.index_prices = Eigen::Map<Vec<double>>(index_vals.data(), t);
  panel.asset_prices.resize(t, static_cast<Index>(p));
  for (Index i = 0; i < t; ++i)
    for (Index j = 0; j < static_cast<Index>(p); ++j)
      panel.asset_prices(i, j) = asset_vals[static_cast<std::size_t>(i) * p + j];
  panel.asset_names.assign(header.begin() + 2, header.end());
  panel.validate();
  return panel;
}

std::string panel_to_csv(const PricePanel& panel) {
  std::string out = "date,index";
  for (const auto& name : panel.asset_names) out += "," + name;
  out += "\n";
  for (Index i = 0; i < panel.T(); ++i) {
    out += panel.dates[i] + "," + io::full(panel.index_prices[i]);
    for (Index j = 0; j < panel.n_assets(); ++j)
      out += "," + io::full(panel.asset_prices(i, j));
    out += "\n";
  }
  return out;
}

void write_panel(const PricePanel& panel, const std::string& path) {
  panel.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_panel: cannot open " + path);
  out << panel_to_csv(panel);
}

Vec<double> daily_returns(const Vec<double>& prices) {
  if (prices.size() < 2) throw std::invalid_argument("daily_returns: need at least 2 prices");
  Vec<double> r(prices.size() - 1);
  for (Index t = 1; t < prices.size(); ++t)
    r[t - 1] = (prices[t] - prices[t - 1]) / prices[t - 1];
  return r;
}

double tracking_error(const Vec<double>& actual_returns,
                      const Vec<double>& replicated_returns) {
  if (actual_returns.size() != replicated_returns.size())
    throw std::invalid_argument("tracking_error: length mismatch");
  const Index t = actual_returns.size();
  if (t < 2) throw std::invalid_argument("tracking_error: need at least 2 returns");
  const Vec<double> err = actual_returns - replicated_returns;
  const double mean = err.mean();
  const double ss = (err.array() - mean).square().sum();
  return std::sqrt(252.0) * std::sqrt(ss / static_cast<double>(t - 1));
}

PricePanel make_synthetic_panel(const SyntheticPanelSpec& spec) {
  if (spec.T < 2 || spec.n_assets < 1 || spec.k_true < 1 || spec.k_true > spec.n_assets)
    throw std::invalid_argument("make_synthetic_panel: bad spec");
  Rng rng(spec.seed);

  PricePanel panel;
  panel.asset_prices.resize(spec.T, spec.n_assets);
  Vec<double> level(spec.n_assets);
  Vec<double> market_beta(spec.n_assets);
  for (Index j = 0; j < spec.n_assets; ++j) {
    level[j] = 20.0 + 180.0 * rng.uniform();
    market_beta[j] = 0.7 + 0.6 * rng.uniform();
  }
  // One market factor plus idiosyncratic moves, as constituents of a real
  // index would show.
  const double idio_vol = 0.4 * spec.asset_vol;
  for (Index t = 0; t < spec.T; ++t) {
    const double factor = spec.asset_vol * rng.normal();
    for (Index j = 0; j < spec.n_assets; ++j) {
      if (t > 0)
        level[j] *= 1.0 + 0.0002 + market_beta[j] * factor + idio_vol * rng.normal();
      panel.asset_prices(t, j) = level[j];
    }
  }

  // Basket weights on the first k_true assets, then multiplicative return noise.
  Vec<double> w = Vec<double>::Zero(spec.n_assets);
  for (Index j = 0; j < spec.k_true; ++j) w[j] = (0.5 + rng.uniform()) / spec.k_true;
  panel.index_prices.resize(spec.T);
  double multiplier = 1.0;
  for (Index t = 0; t < spec.T; ++t) {
    if (t > 0) multiplier *= 1.0 + spec.noise_sd * rng.normal();
    panel.index_prices[t] = multiplier * panel.asset_prices.row(t).dot(w);
  }

  // Calendar dates: trading days skipping weekends, starting 2020-01-01.
  panel.dates.reserve(spec.T);
  int y = 2020, mo = 1, da = 1, dow = 2;  // 2020-01-01 was a Wednesday
  auto days_in_month = [](int year, int month) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))) return 29;
    return d[month - 1];
  };
  while (static_cast<Index>(panel.dates.size()) < spec.T) {
    if (dow != 5 && dow != 6) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, mo, da);
      panel.dates.emplace_back(buf);
    }
    dow = (dow + 1) % 7;
    if (++da > days_in_month(y, mo)) {
      da = 1;
      if (++mo > 12) { mo = 1; ++y; }
    }
  }

  panel.asset_names.reserve(spec.n_assets);
  for (Index j = 0; j < spec.n_assets; ++j) panel.asset_names.push_back("A" + std::to_string(j));
  panel.validate();
  return panel;
}

}  // namespace aenet::tracking
