// SPDX-License-Identifier: Apache-2.0
#include "aircomp/tx_beamforming.hpp"

#include <cmath>
#include <sstream>

namespace aircomp {

bool TxSolveReport::kkt_holds(std::size_t k, Real budget) const {
  const bool inactive = mu[k] <= 1e-12 && power_used[k] <= budget * (1.0 + 1e-9);
  const bool tight = std::abs(power_used[k] - budget) / budget <= 1e-6;
  return inactive || tight;
}

BisectionResult bisect_mu(const std::function<Real(Real)>& power_fn, Real budget, Real tol) {
  auto eval = [&](Real mu, Real lo, Real hi) {
    const Real p = power_fn(mu);
    if (!std::isfinite(p)) {
      std::ostringstream os;
      os << "non-finite transmit power at mu=" << mu << " (bracket [" << lo << ", " << hi
         << "])";
      throw NumericalError(os.str());
    }
    return p;
  };

  BisectionResult out;
  if (eval(0.0, 0.0, 0.0) <= budget) return out;

  Real lo = 0, hi = 1;
  Real p_hi = eval(hi, lo, hi);
  while (p_hi >= budget) {
    lo = hi;
    hi *= 2;
    p_hi = eval(hi, lo, hi);
    if (++out.iterations > 2000) throw NumericalError("mu bracket failed to close");
  }
  // Invariant: power(lo) > budget >= power(hi).
  for (int it = 0; it < 400; ++it) {
    if (std::abs(p_hi - budget) <= tol * budget && hi - lo <= tol * std::max<Real>(1, hi))
      break;
    const Real mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Real p = eval(mid, lo, hi);
    ++out.iterations;
    if (p > budget) {
      lo = mid;
    } else {
      hi = mid;
      p_hi = p;
    }
  }
  out.mu = hi;
  return out;
}

Real tx_objective(const CMatrix& channel, const CMatrix& receiver, const CMatrix& beamformer) {
  const CMatrix effective = receiver.adjoint() * channel * beamformer;
  return (effective - CMatrix::Identity(effective.rows(), effective.cols())).squaredNorm();
}

TxSolution solve_tx(const SystemConfig& cfg, const ChannelSet& ch, const CMatrix& receiver,
                    const TxBeamformerSet& current) {
  if (receiver.rows() != cfg.rx_antennas || receiver.cols() != cfg.functions)
    throw DimensionError("receiver", "expected N_r x L");
  if (current.size() != ch.size())
    throw DimensionError("TxBeamformerSet", "size differs from ChannelSet");

  const std::size_t k_count = ch.size();
  TxSolution out;
  out.tx.beamformers.resize(k_count);
  out.report.mu.assign(k_count, 0);
  out.report.power_used.assign(k_count, 0);
  out.report.bisection_iters.assign(k_count, 0);
  out.report.degenerate.assign(k_count, false);
  const Real budget = cfg.power;
  const Real receiver_norm = receiver.norm();

  for (std::size_t k = 0; k < k_count; ++k) {
    const CMatrix cross = ch[k].adjoint() * receiver;  // H_k^H W, N_t x L
    if (cross.norm() <= 1e-14 * ch[k].norm() * receiver_norm || cross.norm() == 0) {
      out.tx[k] = current[k];
      out.report.degenerate[k] = true;
      out.report.power_used[k] = tx_power(current[k]);
      continue;
    }
    // M_k = Q diag(lambda) Q^H; in that basis V(mu) = Q diag(1/(lambda+mu)) Q^H H_k^H W.
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(cross * cross.adjoint());
    const RVector& lambda = eig.eigenvalues();
    const CMatrix projected = eig.eigenvectors().adjoint() * cross;
    const RVector weight = projected.rowwise().squaredNorm();
    const Real cutoff = 1e-12 * std::max<Real>(lambda.maxCoeff(), 0);

    RVector inverse(lambda.size());
    Real unconstrained_power = 0;
    for (Index i = 0; i < lambda.size(); ++i) {
      inverse(i) = lambda(i) > cutoff ? 1.0 / lambda(i) : 0.0;
      unconstrained_power += weight(i) * inverse(i) * inverse(i);
    }

    Real mu = 0;
    if (unconstrained_power > budget) {
      auto power_fn = [&](Real m) {
        if (m == 0) return unconstrained_power;
        Real p = 0;
        for (Index i = 0; i < lambda.size(); ++i) {
          const Real d = std::max<Real>(lambda(i), 0) + m;
          p += weight(i) / (d * d);
        }
        return p;
      };
      const BisectionResult b = bisect_mu(power_fn, budget);
      mu = b.mu;
      out.report.bisection_iters[k] = b.iterations;
      for (Index i = 0; i < lambda.size(); ++i)
        inverse(i) = 1.0 / (std::max<Real>(lambda(i), 0) + mu);
    }
    out.tx[k].noalias() = eig.eigenvectors() * (inverse.asDiagonal() * projected);
    out.report.mu[k] = mu;
    out.report.power_used[k] = tx_power(out.tx[k]);
  }
  return out;
}

TxSolution solve_tx(const SystemConfig& cfg, const ChannelSet& ch, const AnalogCombiner& rf,
                    const DigitalCombiner& bb, const TxBeamformerSet& current) {
  return solve_tx(cfg, ch, rf.matrix() * bb.matrix, current);
}

}  // namespace aircomp
