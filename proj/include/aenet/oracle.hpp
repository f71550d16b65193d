#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aenet/dataset.hpp"
#include "aenet/penalty.hpp"
#include "aenet/solve.hpp"
#include "aenet/types.hpp"

namespace aenet {

/// Reference solver by sign-pattern enumeration: for every s in {-1,0,+1}^p,
/// solve the active-set system (X_A'X_A + lambda2 I) b = X_A'y - lambda1 w_A s_A,
/// keep candidates whose solution signs match the pattern and whose
/// off-pattern KKT bounds hold, and return the feasible candidate with the
/// smallest objective. Restricted to p <= 12.
template <class Scalar>
FitResult<Scalar> brute_force_fit(const Dataset<Scalar>& ds, const PenaltySpec<Scalar>& spec) {
  const Index n = ds.n();
  const Index p = ds.p();
  if (p > 12) throw std::invalid_argument("brute_force_fit: p must be <= 12");
  spec.validate(p);
  const Vec<Scalar> w =
      spec.weights.size() != 0 ? spec.weights : Vec<Scalar>::Ones(p).eval();

  const Mat<Scalar> Xty_all = ds.X().transpose() * ds.y();

  Scalar best_obj = std::numeric_limits<Scalar>::infinity();
  Vec<Scalar> best_beta;
  const Scalar slack = Scalar(1e-9) * std::max(Scalar(1), spec.lambda1);

  std::size_t total = 1;
  for (Index j = 0; j < p; ++j) total *= 3;

  std::vector<int> digits(static_cast<std::size_t>(p), 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    bool skip = false;
    std::vector<Index> act;
    std::vector<Scalar> sgn;
    for (Index j = 0; j < p; ++j) {
      digits[j] = static_cast<int>(c % 3);
      c /= 3;
      if (digits[j] != 0) {
        if (!std::isfinite(w[j])) { skip = true; break; }
        act.push_back(j);
        sgn.push_back(digits[j] == 1 ? Scalar(1) : Scalar(-1));
      }
    }
    if (skip) continue;
    const Index q = static_cast<Index>(act.size());
    if (spec.lambda2 == Scalar(0) && q > n) continue;

    Vec<Scalar> b = Vec<Scalar>::Zero(p);
    if (q > 0) {
      Mat<Scalar> G(q, q);
      Vec<Scalar> rhs(q);
      for (Index a = 0; a < q; ++a) {
        for (Index bcol = 0; bcol <= a; ++bcol)
          G(a, bcol) = G(bcol, a) = ds.X().col(act[a]).dot(ds.X().col(act[bcol]));
        rhs[a] = Xty_all(act[a], 0) - spec.lambda1 * w[act[a]] * sgn[a];
      }
      G.diagonal().array() += spec.lambda2;
      Eigen::FullPivLU<Mat<Scalar>> lu(G);
      if (!lu.isInvertible()) continue;
      const Vec<Scalar> ba = lu.solve(rhs);
      bool feasible = true;
      for (Index a = 0; a < q; ++a) {
        if (!(ba[a] * sgn[a] > Scalar(0))) { feasible = false; break; }
        b[act[a]] = ba[a];
      }
      if (!feasible) continue;
    }

    // Off-pattern KKT bounds: |x_j'(y - Xb) - lambda2 b_j| / w_j <= lambda1.
    const Vec<Scalar> g = ds.X().transpose() * (ds.y() - ds.X() * b) - spec.lambda2 * b;
    bool ok = true;
    for (Index j = 0; j < p; ++j) {
      if (digits[j] != 0) continue;
      const Scalar scaled = std::isfinite(w[j]) ? std::abs(g[j]) / w[j] : Scalar(0);
      if (scaled > spec.lambda1 + slack) { ok = false; break; }
    }
    if (!ok) continue;

    const Scalar obj = elastic_net_objective(ds, spec, b, w);
    if (obj < best_obj) {
      best_obj = obj;
      best_beta = b;
    }
  }

  if (!best_beta.size() && p > 0)
    throw std::runtime_error("brute_force_fit: no feasible sign pattern found");

  FitResult<Scalar> out;
  out.beta = best_beta;
  out.support = support_of(out.beta);
  out.objective = best_obj;
  PenaltySpec<Scalar> eff = spec;
  eff.weights = w;
  out.kkt_max_violation = kkt_check(ds, eff, out.beta);
  out.method_tag = MethodTag::adaptive_elastic_net;
  return out;
}

}  // namespace aenet
