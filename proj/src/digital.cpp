// SPDX-License-Identifier: Apache-2.0
#include "aircomp/digital.hpp"

namespace aircomp {
namespace {

CMatrix positive_definite_solve(const CMatrix& gram, const CMatrix& rhs, const char* what) {
  const Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    const Eigen::ColPivHouseholderQR<CMatrix> qr(gram);
    throw NumericalError(std::string(what) + " is singular: rank " +
                         std::to_string(qr.rank()) + " of " + std::to_string(gram.rows()));
  }
  return llt.solve(rhs);
}

}  // namespace

CMatrix solve_digital(const ReceiveStats& stats, const CMatrix& analog) {
  if (analog.rows() != stats.covariance.rows())
    throw DimensionError("U_rf", "row count differs from N_r");
  const CMatrix gram = analog.adjoint() * stats.covariance * analog;
  return positive_definite_solve(gram, analog.adjoint() * stats.sum_response,
                                 "U_rf^H A U_rf");
}

DigitalCombiner solve_digital(const SystemConfig& cfg, const ChannelSet& ch,
                              const TxBeamformerSet& tx, const AnalogCombiner& rf) {
  rf.validate(cfg);
  return DigitalCombiner{solve_digital(receive_stats(cfg, ch, tx), rf.matrix())};
}

CMatrix solve_fully_digital_mmse(const ReceiveStats& stats) {
  return positive_definite_solve(stats.covariance, stats.sum_response, "A");
}

CMatrix solve_fully_digital_mmse(const SystemConfig& cfg, const ChannelSet& ch,
                                 const TxBeamformerSet& tx) {
  const Index nr = cfg.rx_antennas;
  const Index l = cfg.functions;
  const Index streams = static_cast<Index>(ch.size()) * l;
  if (streams >= nr) return solve_fully_digital_mmse(receive_stats(cfg, ch, tx));

  // Fewer streams than antennas: with A = sigma^2 I + S S^H,
  //   A^{-1} T = (T - S (sigma^2 I + S^H S)^{-1} S^H T) / sigma^2.
  CMatrix stacked(nr, streams);
  CMatrix sum_response = CMatrix::Zero(nr, l);
  for (Index k = 0; k < static_cast<Index>(ch.size()); ++k) {
    stacked.middleCols(k * l, l).noalias() = ch[k] * tx[k];
    sum_response += stacked.middleCols(k * l, l);
  }
  CMatrix small = CMatrix::Identity(streams, streams) * cfg.noise_var;
  small.selfadjointView<Eigen::Lower>().rankUpdate(stacked.adjoint());
  const CMatrix small_full = small.selfadjointView<Eigen::Lower>();
  const CMatrix projected = stacked.adjoint() * sum_response;
  const CMatrix correction =
      stacked * positive_definite_solve(small_full, projected, "sigma^2 I + S^H S");
  return (sum_response - correction) / cfg.noise_var;
}

}  // namespace aircomp
