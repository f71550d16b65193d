#pragma once

#include <string>
#include <vector>

#include "aenet/sim/design.hpp"
#include "aenet/types.hpp"

namespace aenet::sim {

/// Shared settings for the estimator-comparison runner. All five methods use
/// the rate-driven lambda1 (from the design sigma, or a pilot estimate when
/// sigma_from_design is false); the elastic-net-family methods pick lambda2
/// from the grid by the smallest in-sample residual sum of squares.
struct BenchmarkOptions {
  double gamma{1.0};
  std::vector<double> lambda2_grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  bool sigma_from_design{true};
  int workers{1};
};

struct MetricSummary {
  double mean{0};
  double se{0};
};

struct BenchmarkCell {
  MetricSummary l1;
  MetricSummary l2;
  MetricSummary accuracy;  // fraction of replications with exact support recovery
  int n_ok{0};
  int n_failed{0};
};

struct BenchmarkReport {
  std::vector<SimDesign> designs;
  std::vector<MethodTag> methods;
  int replications{0};
  std::vector<std::vector<BenchmarkCell>> cells;  // [design][method]

  std::string to_csv() const;
  std::string to_text() const;

  const BenchmarkCell& cell(std::size_t design, MethodTag method) const;
};

/// R independent replications per design x method; replication r of design d
/// is seeded from (d.seed, r), so reports are bit-identical across runs and
/// worker counts. Per-replication failures are recorded and excluded from the
/// means with a count.
BenchmarkReport run_benchmark(const std::vector<SimDesign>& designs,
                              const std::vector<MethodTag>& methods, int R,
                              const BenchmarkOptions& options = {});

}  // namespace aenet::sim
