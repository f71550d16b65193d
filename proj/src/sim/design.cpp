#include "aenet/sim/design.hpp"

#include <cmath>
#include <stdexcept>

#include "aenet/rng.hpp"

namespace aenet::sim {

const char* to_string(CovKind kind) {
  switch (kind) {
    case CovKind::identity: return "identity";
    case CovKind::ar1: return "ar1";
    case CovKind::ic_violation: return "ic_violation";
  }
  return "unknown";
}

void SimDesign::validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("SimDesign: need n >= 1 and p >= 1");
  if (beta_true.size() > p) throw std::invalid_argument("SimDesign: beta_true longer than p");
  if (sigma < 0) throw std::invalid_argument("SimDesign: sigma must be >= 0");
  if (cov == CovKind::ar1 && !(std::abs(rho) < 1.0))
    throw std::invalid_argument("SimDesign: ar1 requires |rho| < 1");
  if (cov == CovKind::ic_violation && p < 4)
    throw std::invalid_argument("SimDesign: ic_violation requires p >= 4");
}

Vec<double> SimDesign::full_beta() const {
  Vec<double> beta = Vec<double>::Zero(p);
  beta.head(beta_true.size()) = beta_true;
  return beta;
}

std::string SimDesign::label() const {
  std::string s = "p=" + std::to_string(p) + ",n=" + std::to_string(n) + ",";
  if (cov == CovKind::ar1) {
    s += "ar1(" + std::to_string(rho).substr(0, 4) + ")";
  } else {
    s += to_string(cov);
  }
  return s;
}

std::pair<Dataset<double>, Vec<double>> generate(const SimDesign& design,
                                                 std::uint64_t replicate) {
  design.validate();
  Rng rng = Rng::for_stream(design.seed, replicate);
  const Index n = design.n;
  const Index p = design.p;

  Mat<double> X(n, p);
  switch (design.cov) {
    case CovKind::identity:
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
      break;
    case CovKind::ar1: {
      // AR(1) recursion reproduces Sigma_{jk} = rho^{|j-k|} with unit margins.
      const double carry = std::sqrt(1.0 - design.rho * design.rho);
      for (Index i = 0; i < n; ++i) {
        X(i, 0) = rng.normal();
        for (Index j = 1; j < p; ++j) X(i, j) = design.rho * X(i, j - 1) + carry * rng.normal();
      }
      break;
    }
    case CovKind::ic_violation: {
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p - 1; ++j) X(i, j) = rng.normal();
      for (Index i = 0; i < n; ++i) {
        const double e = rng.normal();
        X(i, p - 1) = X(i, 0) / 6.0 + 5.0 * X(i, 1) / 6.0 + X(i, 2) / 2.0 + e / 6.0;
      }
      break;
    }
  }

  const Vec<double> beta = design.full_beta();
  Vec<double> y = X * beta;
  for (Index i = 0; i < n; ++i) y[i] += design.sigma * rng.normal();
  return {Dataset<double>(std::move(X), std::move(y)), beta};
}

double ic_check(const Mat<double>& X, const SupportSet& S, const Vec<double>& signs) {
  const Index n = X.rows();
  const Index p = X.cols();
  S.validate_for(p);
  const Index q = static_cast<Index>(S.size());
  if (q == 0) throw std::invalid_argument("ic_check: empty support");
  if (signs.size() != q) throw std::invalid_argument("ic_check: signs length != |S|");

  Mat<double> Xs(n, q);
  for (Index i = 0; i < q; ++i) Xs.col(i) = X.col(S.indices()[i]);
  Mat<double> C11 = Xs.transpose() * Xs / static_cast<double>(n);
  Eigen::FullPivLU<Mat<double>> lu(C11);
  if (!lu.isInvertible()) throw std::runtime_error("ic_check: C11 is singular");
  const Vec<double> z = lu.solve(signs);

  double worst = 0.0;
  for (Index j = 0; j < p; ++j) {
    if (S.contains(j)) continue;
    const double v = (X.col(j).transpose() * Xs * z)(0) / static_cast<double>(n);
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace aenet::sim
