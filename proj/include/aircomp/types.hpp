// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aircomp {

using Real = double;
using Complex = std::complex<Real>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

inline constexpr Real kPi = 3.14159265358979323846;

// Error types. Every error names the object it is about so callers can
// surface it without extra context.

class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& matrix, const std::string& detail)
      : std::invalid_argument("dimension mismatch in " + matrix + ": " + detail),
        matrix_(matrix) {}
  const std::string& matrix() const noexcept { return matrix_; }

 private:
  std::string matrix_;
};

class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario scalars. Counts are antenna/stream dimensions; power, noise
/// variance and path loss are linear-scale reals.
struct SystemConfig {
  int devices = 1;         // K
  int tx_antennas = 1;     // N_t per device
  int rx_antennas = 1;     // N_r at the access point
  int rf_chains = 1;       // N_rf
  int functions = 1;       // L, streams per device
  Real power = 1.0;        // P, per-device budget
  Real noise_var = 1.0;    // sigma^2
  Real path_loss = 1.0;    // beta

  /// beta * P / sigma^2 (linear).
  Real snr() const { return path_loss * power / noise_var; }

  /// Throws ConfigError when any structural constraint is violated.
  void validate() const;

  /// Same check without the RF-chain bound, for fully-digital receivers
  /// where N_rf is irrelevant.
  void validate_fully_digital() const;
};

/// P = sigma^2 * 10^(snr_db/10) / beta.
Real power_from_snr_db(Real snr_db, Real noise_var = 1.0, Real path_loss = 1.0);

struct ChannelSet {
  std::vector<CMatrix> channels;  // K matrices, N_r x N_t

  std::size_t size() const { return channels.size(); }
  const CMatrix& operator[](std::size_t k) const { return channels[k]; }
  void validate(const SystemConfig& cfg) const;
};

struct TxBeamformerSet {
  std::vector<CMatrix> beamformers;  // K matrices, N_t x L

  std::size_t size() const { return beamformers.size(); }
  const CMatrix& operator[](std::size_t k) const { return beamformers[k]; }
  CMatrix& operator[](std::size_t k) { return beamformers[k]; }

  /// Dimension check plus tr(V V^H) <= P (1 + 1e-9) for every device.
  void validate(const SystemConfig& cfg) const;
};

/// Unit-modulus analog combiner. The matrix and its column-major phase
/// vector are kept in lock-step; phases are canonical in (-pi, pi].
class AnalogCombiner {
 public:
  AnalogCombiner() = default;

  static AnalogCombiner from_phases(Index rows, Index cols, const RVector& phases);
  /// Projects every entry onto the unit circle (entries must be nonzero).
  static AnalogCombiner from_matrix(const CMatrix& matrix);

  const CMatrix& matrix() const { return matrix_; }
  const RVector& phases() const { return phases_; }
  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }

  /// Sets entry (i, j) to the unit-modulus value `value / |value|`.
  void set_entry(Index i, Index j, Complex value);

  void validate(const SystemConfig& cfg) const;

 private:
  CMatrix matrix_;
  RVector phases_;
};

struct DigitalCombiner {
  CMatrix matrix;  // N_rf x L

  void validate(const SystemConfig& cfg) const;
};

struct BeamformingState {
  TxBeamformerSet tx;
  AnalogCombiner rf;
  DigitalCombiner bb;

  /// Effective receive combiner U_rf * U_bb (N_r x L).
  CMatrix receiver() const { return rf.matrix() * bb.matrix; }
  void validate(const SystemConfig& cfg) const;
};

/// Maps any real angle to the canonical range (-pi, pi].
Real wrap_phase(Real angle);

template <typename Derived>
RVector wrap_phases(const Eigen::MatrixBase<Derived>& angles) {
  RVector out(angles.size());
  for (Index i = 0; i < angles.size(); ++i) out(i) = wrap_phase(angles(i));
  return out;
}

/// Column-major index of entry (i, j) in the phase vector.
inline Index phase_index(Index i, Index j, Index rows) { return j * rows + i; }

}  // namespace aircomp
