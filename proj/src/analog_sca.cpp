// SPDX-License-Identifier: Apache-2.0
#include "aircomp/analog_sca.hpp"

#include <chrono>
#include <cmath>

namespace aircomp {
namespace {

// Past this many consecutive doublings the step is numerically zero.
constexpr int kMaxDoublings = 60;

CMatrix unit_modulus(const RVector& theta, Index rows, Index cols) {
  CMatrix u(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) u(i, j) = std::polar(1.0, theta(phase_index(i, j, rows)));
  return u;
}

}  // namespace

void ScaConfig::validate() const {
  if (!(tau > 0)) throw ConfigError("SCA tau must be > 0");
  if (!(eps > 0)) throw ConfigError("SCA eps must be > 0");
  if (max_iters < 1) throw ConfigError("SCA max_iters must be >= 1");
}

RVector sca_gradient(const AnalogProblem& p, const CMatrix& u, const CMatrix& auc) {
  // -2 Re[j conj(u) f] = 2 Im[conj(u) f]; Eigen storage is column-major,
  // which is exactly the phase-vector layout.
  const CMatrix f = auc - p.b;
  const CMatrix prod = u.conjugate().cwiseProduct(f);
  return 2.0 * Eigen::Map<const CVector>(prod.data(), prod.size()).imag();
}

RVector sca_gradient(const SystemConfig& cfg, const ChannelSet& ch, const TxBeamformerSet& tx,
                     const AnalogCombiner& rf, const DigitalCombiner& bb) {
  rf.validate(cfg);
  bb.validate(cfg);
  const AnalogProblem p = analog_problem(receive_stats(cfg, ch, tx), bb);
  const CMatrix auc = p.a * rf.matrix() * p.c;
  return sca_gradient(p, rf.matrix(), auc);
}

RVector sca_step(const RVector& theta, const RVector& gamma, Real tau) {
  if (!(tau > 0)) throw std::invalid_argument("tau must be > 0");
  if (theta.size() != gamma.size()) throw DimensionError("gamma", "length differs from theta");
  return wrap_phases(theta - gamma / (2.0 * tau));
}

Real sca_surrogate(Real f_at_expansion, const RVector& gamma, const RVector& theta,
                   const RVector& expansion, Real tau) {
  const RVector d = theta - expansion;
  return f_at_expansion + gamma.dot(d) + tau * d.squaredNorm();
}

ScaSolution solve_analog_sca(const AnalogProblem& problem, const AnalogCombiner& rf_init,
                             const ScaConfig& sca) {
  sca.validate();
  const auto start = std::chrono::steady_clock::now();
  const Index rows = rf_init.rows();
  const Index cols = rf_init.cols();
  const Real offset = static_cast<Real>(problem.streams);

  ScaSolution out;
  out.rf = rf_init;
  RVector theta = rf_init.phases();
  CMatrix u = rf_init.matrix();
  CMatrix auc = problem.a * u * problem.c;
  Real f = offset + analog_phi(problem, u, auc);
  out.trace.mse_history.push_back(f);
  Real tau = sca.tau;

  if (!std::isfinite(f)) {
    out.trace.termination = Termination::kAbortedNonfinite;
    return out;
  }

  out.trace.termination = Termination::kMaxIters;
  for (int r = 0; r < sca.max_iters; ++r) {
    const RVector gamma = sca_gradient(problem, u, auc);
    RVector theta_next;
    CMatrix u_next, auc_next;
    Real f_next = f;
    bool moved = false;
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt) {
      theta_next = sca_step(theta, gamma, tau);
      u_next = unit_modulus(theta_next, rows, cols);
      auc_next.noalias() = problem.a * u_next * problem.c;
      f_next = offset + analog_phi(problem, u_next, auc_next);
      if (!std::isfinite(f_next)) break;
      if (!sca.backtrack || f_next <= f) {
        moved = true;
        break;
      }
      tau *= 2.0;
      ++out.rejected_steps;
    }
    ++out.trace.iterations;
    if (!std::isfinite(f_next)) {
      out.trace.termination = Termination::kAbortedNonfinite;
      break;
    }
    if (!moved) f_next = f;  // no tau found that decreases f: stationary to working precision
    if (moved) {
      theta = std::move(theta_next);
      u = std::move(u_next);
      auc = std::move(auc_next);
    }
    out.trace.mse_history.push_back(f_next);
    const Real decrease = f - f_next;
    f = f_next;
    if (decrease < sca.eps) {
      out.trace.termination = Termination::kConverged;
      break;
    }
  }
  out.rf = AnalogCombiner::from_phases(rows, cols, theta);
  out.final_tau = tau;
  out.trace.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ScaSolution solve_analog_sca(const SystemConfig& cfg, const ChannelSet& ch,
                             const TxBeamformerSet& tx, const AnalogCombiner& rf_init,
                             const DigitalCombiner& bb, const ScaConfig& sca) {
  rf_init.validate(cfg);
  bb.validate(cfg);
  return solve_analog_sca(analog_problem(receive_stats(cfg, ch, tx), bb), rf_init, sca);
}

}  // namespace aircomp
