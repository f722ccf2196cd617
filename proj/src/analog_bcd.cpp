// SPDX-License-Identifier: Apache-2.0
#include "aircomp/analog_bcd.hpp"

#include <chrono>
#include <cmath>

namespace aircomp {

void BcdConfig::validate() const {
  if (!(eps > 0)) throw ConfigError("BCD eps must be > 0");
  if (max_sweeps < 1) throw ConfigError("BCD max_sweeps must be >= 1");
}

BcdWorkspace bcd_build_workspace(AnalogProblem problem, const AnalogCombiner& rf) {
  BcdWorkspace ws;
  ws.problem = std::move(problem);
  ws.q.noalias() = ws.problem.a * rf.matrix() * ws.problem.c;
  return ws;
}

BcdWorkspace bcd_build_workspace(const SystemConfig& cfg, const ChannelSet& ch,
                                 const TxBeamformerSet& tx, const AnalogCombiner& rf,
                                 const DigitalCombiner& bb) {
  rf.validate(cfg);
  bb.validate(cfg);
  return bcd_build_workspace(analog_problem(receive_stats(cfg, ch, tx), bb), rf);
}

Complex bcd_entry_b(const BcdWorkspace& ws, const AnalogCombiner& rf, Index i, Index j) {
  const AnalogProblem& p = ws.problem;
  return p.a(i, i) * rf.matrix()(i, j) * p.c(j, j) - ws.q(i, j) + p.b(i, j);
}

bool bcd_entry_update(BcdWorkspace& ws, AnalogCombiner& rf, Index i, Index j) {
  const Complex b = bcd_entry_b(ws, rf, i, j);
  const Real magnitude = std::abs(b);
  if (magnitude < kDegenerateB) return false;
  const Complex old = rf.matrix()(i, j);
  rf.set_entry(i, j, b / magnitude);
  const Complex delta = rf.matrix()(i, j) - old;
  ws.q.noalias() += delta * ws.problem.a.col(i) * ws.problem.c.row(j);
  return true;
}

namespace {

// One cyclic sweep. Entries of column j only read Q(:, j), so the rank-one
// updates are applied to that column as they happen and to the other
// columns once per column: A du C(j, :) with du the change in U(:, j).
void sweep_columns(BcdWorkspace& ws, AnalogCombiner& rf) {
  const CMatrix& a = ws.problem.a;
  const CMatrix& c = ws.problem.c;
  const Index rows = rf.rows();
  const Index cols = rf.cols();
  CVector du(rows);
  for (Index j = 0; j < cols; ++j) {
    du.setZero();
    bool changed = false;
    for (Index i = 0; i < rows; ++i) {
      const Complex b = bcd_entry_b(ws, rf, i, j);
      const Real magnitude = std::abs(b);
      if (magnitude < kDegenerateB) continue;
      const Complex old = rf.matrix()(i, j);
      rf.set_entry(i, j, b / magnitude);
      const Complex delta = rf.matrix()(i, j) - old;
      du(i) += delta;
      ws.q.col(j).noalias() += (delta * c(j, j)) * a.col(i);
      changed = true;
    }
    if (!changed || cols == 1) continue;
    const CVector adu = a * du;
    for (Index k = 0; k < cols; ++k)
      if (k != j) ws.q.col(k).noalias() += c(j, k) * adu;
  }
}

}  // namespace

Real bcd_q_drift(const BcdWorkspace& ws, const AnalogCombiner& rf) {
  const CMatrix exact = ws.problem.a * rf.matrix() * ws.problem.c;
  const Real scale = ws.q.norm();
  return scale == 0 ? (exact - ws.q).norm() : (exact - ws.q).norm() / scale;
}

BcdSolution solve_analog_bcd(const AnalogProblem& problem, const AnalogCombiner& rf_init,
                             const BcdConfig& bcd) {
  bcd.validate();
  const auto start = std::chrono::steady_clock::now();
  const Real offset = static_cast<Real>(problem.streams);

  BcdSolution out;
  out.rf = rf_init;
  BcdWorkspace ws = bcd_build_workspace(problem, rf_init);
  Real f = offset + analog_phi(ws.problem, out.rf.matrix(), ws.q);
  out.trace.mse_history.push_back(f);
  if (!std::isfinite(f)) {
    out.trace.termination = Termination::kAbortedNonfinite;
    return out;
  }

  out.trace.termination = Termination::kMaxIters;
  for (int sweep = 0; sweep < bcd.max_sweeps; ++sweep) {
    sweep_columns(ws, out.rf);
    ++out.trace.iterations;

    // Objective from scratch; the same product doubles as the drift check.
    const CMatrix exact = ws.problem.a * out.rf.matrix() * ws.problem.c;
    const Real scale = ws.q.norm();
    if ((exact - ws.q).norm() > kQDriftTol * (scale == 0 ? 1.0 : scale)) {
      ws.q = exact;
      ++out.q_refreshes;
    }
    const Real f_next = offset + analog_phi(ws.problem, out.rf.matrix(), exact);
    if (!std::isfinite(f_next)) {
      out.trace.termination = Termination::kAbortedNonfinite;
      break;
    }
    out.trace.mse_history.push_back(f_next);
    const Real decrease = f - f_next;
    f = f_next;
    if (decrease < bcd.eps) {
      out.trace.termination = Termination::kConverged;
      break;
    }
  }
  out.trace.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

BcdSolution solve_analog_bcd(const SystemConfig& cfg, const ChannelSet& ch,
                             const TxBeamformerSet& tx, const AnalogCombiner& rf_init,
                             const DigitalCombiner& bb, const BcdConfig& bcd) {
  rf_init.validate(cfg);
  bb.validate(cfg);
  return solve_analog_bcd(analog_problem(receive_stats(cfg, ch, tx), bb), rf_init, bcd);
}

}  // namespace aircomp
