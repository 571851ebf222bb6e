#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "scb/model.hpp"
#include "scb/sector.hpp"

namespace scb {

/// Two-mode condensate amplitudes, |psi_L|^2 + |psi_R|^2 = 1.
struct OrderParameter {
  Complex psi_left;
  Complex psi_right;

  double norm() const { return std::norm(psi_left) + std::norm(psi_right); }
};

/// Throws std::invalid_argument when the norm is off by more than 1e-10.
OrderParameter make_order_parameter(Complex psi_left, Complex psi_right);

/// Phase-space coordinates: theta = arg psi_L - arg psi_R, n_L = N |psi_L|^2.
struct PhasePoint {
  double theta = 0.0;
  double n_left = 0.0;
};

PhasePoint to_phase_point(const OrderParameter& psi, std::int64_t total_pairs);
/// psi_L = sqrt(n_L / N) e^{i theta}, psi_R = sqrt(1 - n_L / N).
OrderParameter from_phase_point(const PhasePoint& point, std::int64_t total_pairs);

struct GpDerivative {
  Complex d_left;
  Complex d_right;
};

/// i psi_L' = [U_L + N E_C |psi_L|^2] psi_L - K psi_R
/// i psi_R' = U_R psi_R - K psi_L
GpDerivative gp_rhs(const OrderParameter& psi, const ModelParams& params);

/// Conserved energy of the GP flow in occupancy units (the constant U_R N is
/// dropped): E_C n_L^2 / 2 + (U_L - U_R) n_L - 2 K sqrt(n_L n_R) cos(theta).
/// The flow is canonical in (theta, n_L): n_L' = dE/dtheta, theta' = -dE/dn_L.
double gp_energy(const OrderParameter& psi, const ModelParams& params);
double gp_energy(const PhasePoint& point, const ModelParams& params);

/// Canonical velocities generated by gp_energy: .theta holds theta', .n_left holds n_L'.
PhasePoint gp_phase_velocity(const PhasePoint& point, const ModelParams& params);

/// Copy of params with U_L, U_R chosen so the GP fixed point sits at
/// theta = 0, n_L = nbar + n_g (the minimum of the phase-space Hamiltonian).
ModelParams aligned_gp_params(const ModelParams& params);

/// E_C (n_L - nbar - n_g)^2 - E_J cos(theta)
double hamiltonian_function(const PhasePoint& point, const ModelParams& params);

/// Coordinates of a GP state for hamiltonian_function. The GP flow moves n_L
/// twice as far from nbar + n_g as the canonical flow of hamiltonian_function
/// for the same theta swing (n_L' = 2 E_J sin(theta) against E_J sin(theta)),
/// so the displacement is halved: n = nbar + n_g + (N |psi_L|^2 - nbar - n_g) / 2.
PhasePoint hamiltonian_coordinates(const OrderParameter& psi, const ModelParams& params);

class NormDriftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoOscillationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GpTrajectory {
  std::vector<double> times;
  std::vector<OrderParameter> states;
  std::vector<double> norm_drift;  // |norm - 1|
  std::vector<double> energy;      // gp_energy
  double step = 0.0;
};

struct GpOptions {
  double dt = 0.0;  // <= 0: a 400th of the fastest period in the problem
  int record_every = 1;
  double max_norm_drift = 1e-6;
};

/// Default GP step: 2 pi / (400 max(omega_c, local rates)), where the left rate
/// is |U_L| + 2 N E_C |psi_L|^2 + K.
double default_gp_step(const OrderParameter& psi, const ModelParams& params);

/// Classical RK4. Throws NormDriftError once |norm - 1| exceeds max_norm_drift.
GpTrajectory gp_evolve(const OrderParameter& psi0, const ModelParams& params, double t_final,
                       const GpOptions& options = {});

struct PhaseTrajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<double> energy;  // hamiltonian_function
  double step = 0.0;
};

/// RK4 on the canonical equations of hamiltonian_function:
/// n_L' = E_J sin(theta), theta' = -2 E_C (n_L - nbar - n_g).
/// dt <= 0 selects 2 pi / (400 omega_c).
PhaseTrajectory phase_evolve(const PhasePoint& start, const ModelParams& params, double t_final,
                             double dt = 0.0, int record_every = 1);

struct FrequencyEstimate {
  double zero_crossing = 0.0;  // angular frequency
  double spectral_peak = 0.0;  // angular frequency
  int crossings = 0;
};

/// Dominant angular frequency of a sampled signal. Zero crossings of the
/// mean-removed signal are averaged; a windowed DFT peak search around that
/// value provides the cross-check. Throws NoOscillationError for flat signals
/// or fewer than three crossings.
FrequencyEstimate extract_frequency(const std::vector<double>& times, const std::vector<double>& values);

struct OscillationRun {
  ModelParams gp_params;  // aligned potentials
  GpTrajectory trajectory;
  FrequencyEstimate frequency;
  double omega_c = 0.0;
  double relative_deviation = 0.0;  // |zero_crossing - omega_c| / omega_c
};

/// GP run started at theta = 0 with n_L displaced from the fixed point by
/// 2 * amplitude; the factor 2 maps a displacement of the phase-space
/// Hamiltonian's n_L onto the GP occupancy with the same theta swing.
/// With record_every left at 1, about 256 points per period are kept.
OscillationRun run_small_oscillation(const ModelParams& params, double amplitude, double periods = 100.0,
                                     const GpOptions& options = {});

/// Default amplitude 0.01 sqrt(E_J / 2 E_C).
double default_oscillation_amplitude(const ModelParams& params);

/// CSV columns: t, re_psi_l, im_psi_l, re_psi_r, im_psi_r, theta, n_l,
/// hamiltonian, e_gp (17 significant digits). n_l is N |psi_L|^2; hamiltonian
/// is evaluated at hamiltonian_coordinates.
void write_gp_csv(std::ostream& out, const GpTrajectory& trajectory, const ModelParams& params);

}  // namespace scb
