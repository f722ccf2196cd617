// SPDX-License-Identifier: Apache-2.0
#include "aircomp/driver.hpp"

#include <chrono>
#include <cmath>

#include "aircomp/digital.hpp"

namespace aircomp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Appends a block value; returns false (and marks the trace) when it is not finite.
bool record(SolveTrace& trace, Real value) {
  trace.mse_history.push_back(value);
  if (std::isfinite(value)) return true;
  trace.termination = Termination::kAbortedNonfinite;
  return false;
}

}  // namespace

std::string_view to_string(AnalogSolver s) {
  return s == AnalogSolver::kSca ? "SCA" : "BCD";
}

void DriverConfig::validate() const {
  if (!(outer_eps > 0)) throw ConfigError("outer_eps must be > 0");
  if (outer_max_iters < 1) throw ConfigError("outer_max_iters must be >= 1");
  if (zf_receive_steps < 1) throw ConfigError("zf_receive_steps must be >= 1");
  sca.validate();
  bcd.validate();
}

HybridResult solve_hybrid(const SystemConfig& cfg, const ChannelSet& ch,
                          const BeamformingState& init, const DriverConfig& dcfg) {
  cfg.validate();
  ch.validate(cfg);
  init.validate(cfg);
  dcfg.validate();
  const auto start = Clock::now();

  HybridResult out;
  out.state = init;
  BeamformingState& st = out.state;
  SolveTrace& trace = out.trace;
  trace.termination = Termination::kMaxIters;

  // The initial U_bb is zero, which would make the transmit update
  // degenerate; start from the sum-MMSE combiner for the initial V_k, U_rf.
  ReceiveStats stats = receive_stats(cfg, ch, st.tx);
  st.bb.matrix = solve_digital(stats, st.rf.matrix());
  Real previous = compute_mse(cfg, ch, st);
  if (!record(trace, previous)) return out;

  for (int it = 0; it < dcfg.outer_max_iters; ++it) {
    TxSolution txs = solve_tx(cfg, ch, st.receiver(), st.tx);
    st.tx = std::move(txs.tx);
    out.tx_reports.push_back(std::move(txs.report));
    if (!record(trace, compute_mse(cfg, ch, st))) break;

    stats = receive_stats(cfg, ch, st.tx);
    const AnalogProblem problem = analog_problem(stats, st.bb);
    if (dcfg.analog_solver == AnalogSolver::kSca) {
      ScaSolution s = solve_analog_sca(problem, st.rf, dcfg.sca);
      out.analog_iterations += s.trace.iterations;
      st.rf = std::move(s.rf);
    } else {
      BcdSolution s = solve_analog_bcd(problem, st.rf, dcfg.bcd);
      out.analog_iterations += s.trace.iterations;
      st.rf = std::move(s.rf);
    }
    if (!record(trace, compute_mse(cfg, ch, st))) break;

    st.bb.matrix = solve_digital(stats, st.rf.matrix());
    const Real current = compute_mse(cfg, ch, st);
    if (!record(trace, current)) break;
    out.outer_mse.push_back(current);
    ++trace.iterations;

    if (previous - current < dcfg.outer_eps) {
      trace.termination = Termination::kConverged;
      break;
    }
    previous = current;
  }
  trace.wall_time = seconds_since(start);
  return out;
}

FullyDigitalResult solve_fd(const SystemConfig& cfg, const ChannelSet& ch,
                            const TxBeamformerSet& init_tx, const DriverConfig& dcfg) {
  cfg.validate_fully_digital();
  ch.validate(cfg);
  init_tx.validate(cfg);
  dcfg.validate();
  const auto start = Clock::now();

  FullyDigitalResult out;
  FullyDigitalState& st = out.state;
  SolveTrace& trace = out.trace;
  trace.termination = Termination::kMaxIters;
  st.tx = init_tx;
  st.receiver = solve_fully_digital_mmse(cfg, ch, st.tx);
  Real previous = compute_mse(cfg, ch, st.tx, st.receiver);
  if (!record(trace, previous)) return out;

  for (int it = 0; it < dcfg.outer_max_iters; ++it) {
    TxSolution txs = solve_tx(cfg, ch, st.receiver, st.tx);
    st.tx = std::move(txs.tx);
    out.tx_reports.push_back(std::move(txs.report));
    if (!record(trace, compute_mse(cfg, ch, st.tx, st.receiver))) break;

    st.receiver = solve_fully_digital_mmse(cfg, ch, st.tx);
    const Real current = compute_mse(cfg, ch, st.tx, st.receiver);
    if (!record(trace, current)) break;
    out.outer_mse.push_back(current);
    ++trace.iterations;

    if (previous - current < dcfg.outer_eps) {
      trace.termination = Termination::kConverged;
      break;
    }
    previous = current;
  }
  trace.wall_time = seconds_since(start);
  return out;
}

CMatrix orthonormal_projection(const CMatrix& x) {
  const Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

TxSolution zf_transmit(const SystemConfig& cfg, const ChannelSet& ch, const CMatrix& receiver,
                       const TxBeamformerSet& current) {
  const std::size_t k_count = ch.size();
  TxSolution out;
  out.tx.beamformers.resize(k_count);
  out.report.mu.assign(k_count, 0);
  out.report.power_used.assign(k_count, 0);
  out.report.bisection_iters.assign(k_count, 0);
  out.report.degenerate.assign(k_count, false);
  const Index l = cfg.functions;

  for (std::size_t k = 0; k < k_count; ++k) {
    const CMatrix effective = receiver.adjoint() * ch[k];  // L x N_t
    const CMatrix gram = effective * effective.adjoint();
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const Real largest = eig.eigenvalues().maxCoeff();
    if (!(largest > 0) || eig.eigenvalues().minCoeff() <= 1e-12 * largest) {
      out.tx[k] = current[k];
      out.report.degenerate[k] = true;
      out.report.power_used[k] = tx_power(current[k]);
      continue;
    }
    CMatrix v = effective.adjoint() * gram.llt().solve(CMatrix::Identity(l, l));
    const Real power = tx_power(v);
    if (power > cfg.power) v *= std::sqrt(cfg.power / power);
    out.report.power_used[k] = tx_power(v);
    out.tx[k] = std::move(v);
  }
  return out;
}

CMatrix orthonormal_receive_descent(const ReceiveStats& stats, const CMatrix& start,
                                    int steps) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(stats.covariance, Eigen::EigenvaluesOnly);
  Real step = 1.0 / eig.eigenvalues().maxCoeff();
  CMatrix u = orthonormal_projection(start);
  Real f = mse_from_stats(stats, u);
  for (int s = 0; s < steps; ++s) {
    const CMatrix gradient = stats.covariance * u - stats.sum_response;
    const CMatrix candidate = orthonormal_projection(u - step * gradient);
    const Real fc = mse_from_stats(stats, candidate);
    if (fc <= f) {
      u = candidate;
      f = fc;
    } else {
      step *= 0.5;
    }
  }
  return u;
}

FullyDigitalResult solve_fd_zf(const SystemConfig& cfg, const ChannelSet& ch,
                               const TxBeamformerSet& init_tx, const DriverConfig& dcfg) {
  cfg.validate_fully_digital();
  ch.validate(cfg);
  init_tx.validate(cfg);
  dcfg.validate();
  const auto start = Clock::now();

  FullyDigitalResult out;
  FullyDigitalState& st = out.state;
  SolveTrace& trace = out.trace;
  trace.termination = Termination::kMaxIters;
  st.tx = init_tx;
  st.receiver = orthonormal_projection(solve_fully_digital_mmse(cfg, ch, st.tx));
  Real previous = compute_mse(cfg, ch, st.tx, st.receiver);
  if (!record(trace, previous)) return out;

  for (int it = 0; it < dcfg.outer_max_iters; ++it) {
    TxSolution txs = zf_transmit(cfg, ch, st.receiver, st.tx);
    st.tx = std::move(txs.tx);
    out.tx_reports.push_back(std::move(txs.report));
    if (!record(trace, compute_mse(cfg, ch, st.tx, st.receiver))) break;

    const ReceiveStats stats = receive_stats(cfg, ch, st.tx);
    st.receiver = orthonormal_receive_descent(stats, st.receiver, dcfg.zf_receive_steps);
    const Real current = compute_mse(cfg, ch, st.tx, st.receiver);
    if (!record(trace, current)) break;
    out.outer_mse.push_back(current);
    ++trace.iterations;

    if (std::abs(previous - current) < dcfg.outer_eps) {
      trace.termination = Termination::kConverged;
      break;
    }
    previous = current;
  }
  trace.wall_time = seconds_since(start);
  return out;
}

}  // namespace aircomp
