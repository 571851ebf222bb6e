#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "scb/sector.hpp"

namespace scb {

/// Physical parameters of the Cooper pair box. Units: hbar = 1, all energies in
/// angular-frequency units (s^-1).
struct ModelParams {
  double charging_energy = 0.0;   // E_C
  double tunneling = 0.0;         // K, bare pair-tunneling amplitude
  double potential_left = 0.0;    // U_L
  double potential_right = 0.0;   // U_R
  std::int64_t total_pairs = 0;   // N
  double mean_pairs = 0.0;        // nbar, mean pair count on L
  double gate_charge = 0.5;       // n_g
  double coupling = 0.0;          // lambda, system-environment coupling

  /// E_J = K sqrt(nbar (N - nbar)).
  double josephson_energy() const;

  /// Throws std::invalid_argument naming the offending field. lambda = 0 is
  /// accepted only when allow_zero_coupling is set (closed dynamics).
  void validate(double max_coupling = 0.1, bool allow_zero_coupling = false) const;
};

/// Largest sector dimension any matrix constructor will materialize.
inline constexpr Eigen::Index kDefaultMatrixCap = 4001;

double derive_gate_charge(double potential_left, double potential_right, double charging_energy,
                          double mean_pairs);
double derive_josephson_energy(double tunneling, double mean_pairs, std::int64_t total_pairs);

/// Inverse of derive_josephson_energy: the K that yields the requested E_J.
double tunneling_for_josephson(double josephson_energy, double mean_pairs, std::int64_t total_pairs);

/// Sector Hamiltonian with exact hopping -K sqrt((n+1)(N-n)). The constant
/// term dropped when completing the square does not enter any observable.
Operator h0_full(const SectorBasis& basis, const ModelParams& params,
                 Eigen::Index matrix_cap = kDefaultMatrixCap);

/// Occupation-number form with the hopping frozen to -E_J.
Operator h0_number_rep(const SectorBasis& basis, const ModelParams& params,
                       Eigen::Index matrix_cap = kDefaultMatrixCap);

/// Quantum phase model E_C (n' - n_g)^2 - E_J cos(phi) in the charge basis,
/// restricted to |n - nbar| <= max(10, 8 sqrt(nbar)) and clipped to [0, N].
/// cos(phi) shifts n' by +-1 with amplitude 1/2, so the hopping is -E_J/2 (half
/// the occupation-number form above).
struct WindowedHamiltonian {
  std::int64_t first = 0;
  Eigen::MatrixXd matrix;
};
WindowedHamiltonian quantum_phase_window(const ModelParams& params);

/// Gap between the two lowest levels of quantum_phase_window.
double quantum_phase_gap(const ModelParams& params);

/// Exact hopping amplitude K sqrt((n+1)(N-n)) between n and n+1.
double exact_hopping(const ModelParams& params, std::int64_t n);

struct TwoLevelHamiltonian {
  Eigen::Matrix2cd matrix;
  bool near_resonance;  // n_g within the configured band around 1/2
};

/// -1/2 [E_C (1 - 2 n_g) sigma_z + E_J sigma_x]
TwoLevelHamiltonian effective_two_level(const ModelParams& params, double band_low = 0.3,
                                        double band_high = 0.7);

struct QubitFrequency {
  double exact;      // sqrt(E_C^2 (1 - 2 n_g)^2 + E_J^2)
  double resonance;  // E_J
};
QubitFrequency omega_q(const ModelParams& params);

/// Semiclassical charge-oscillation frequency sqrt(2 E_C E_J).
double omega_c(const ModelParams& params);

/// Transition frequency E_C [2 (n - nbar - n_g) + 1] between n and n+1.
double omega_n(const ModelParams& params, double n);

}  // namespace scb
