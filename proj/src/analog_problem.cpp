// SPDX-License-Identifier: Apache-2.0
#include "aircomp/analog_problem.hpp"

#include <algorithm>

namespace aircomp {

AnalogProblem analog_problem(const ReceiveStats& stats, const DigitalCombiner& bb) {
  AnalogProblem p;
  p.a = stats.covariance;
  p.b.noalias() = stats.sum_response * bb.matrix.adjoint();
  p.c.noalias() = bb.matrix * bb.matrix.adjoint();
  p.streams = stats.streams;
  return p;
}

Real analog_phi(const AnalogProblem& p, const CMatrix& u, const CMatrix& auc) {
  return u.conjugate().cwiseProduct(auc).sum().real() -
         2.0 * u.conjugate().cwiseProduct(p.b).sum().real();
}

Real analog_phi(const AnalogProblem& p, const CMatrix& u) {
  const CMatrix auc = p.a * u * p.c;
  return analog_phi(p, u, auc);
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged_eps";
    case Termination::kMaxIters: return "max_iters";
    case Termination::kAbortedNonfinite: return "aborted_nonfinite";
  }
  return "unknown";
}

Real SolveTrace::max_increase() const {
  Real worst = -std::numeric_limits<Real>::infinity();
  for (std::size_t i = 1; i < mse_history.size(); ++i)
    worst = std::max(worst, mse_history[i] - mse_history[i - 1]);
  return mse_history.size() < 2 ? Real(0) : worst;
}

}  // namespace aircomp
