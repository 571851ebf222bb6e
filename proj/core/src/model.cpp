#include "scb/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scb/format.hpp"

namespace scb {

namespace {

void check_cap(const SectorBasis& basis, Eigen::Index cap) {
  if (basis.dimension() > cap) {
    throw std::invalid_argument("sector dimension " + std::to_string(basis.dimension()) +
                                " exceeds matrix cap " + std::to_string(cap));
  }
}

double excess(const ModelParams& p, double n) { return n - p.mean_pairs - p.gate_charge; }

}  // namespace

double ModelParams::josephson_energy() const {
  return derive_josephson_energy(tunneling, mean_pairs, total_pairs);
}

void ModelParams::validate(double max_coupling, bool allow_zero_coupling) const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("model." + field + ": " + why);
  };
  if (!(charging_energy > 0.0) || !std::isfinite(charging_energy)) fail("E_C", "must be positive and finite");
  if (!(tunneling >= 0.0) || !std::isfinite(tunneling)) fail("K", "must be non-negative and finite");
  if (!std::isfinite(potential_left)) fail("U_L", "must be finite");
  if (!std::isfinite(potential_right)) fail("U_R", "must be finite");
  if (total_pairs < 1) fail("N", "must be >= 1");
  if (!(mean_pairs > 0.0) || !(mean_pairs < static_cast<double>(total_pairs))) fail("nbar", "must lie in (0, N)");
  if (!std::isfinite(gate_charge)) fail("n_g", "must be finite");
  const bool low_ok = allow_zero_coupling ? coupling >= 0.0 : coupling > 0.0;
  if (!low_ok || !(coupling <= max_coupling)) {
    fail("lambda", std::string("must lie in ") + (allow_zero_coupling ? "[0, " : "(0, ") + format_g17(max_coupling) + "]");
  }
}

double derive_gate_charge(double potential_left, double potential_right, double charging_energy,
                          double mean_pairs) {
  if (!(charging_energy > 0.0)) throw std::invalid_argument("E_C must be positive");
  return (potential_right - potential_left) / (2.0 * charging_energy) - mean_pairs;
}

double derive_josephson_energy(double tunneling, double mean_pairs, std::int64_t total_pairs) {
  const double n = static_cast<double>(total_pairs);
  if (!(mean_pairs > 0.0) || !(mean_pairs < n)) throw std::invalid_argument("nbar must lie in (0, N)");
  return tunneling * std::sqrt(mean_pairs * (n - mean_pairs));
}

double tunneling_for_josephson(double josephson_energy, double mean_pairs, std::int64_t total_pairs) {
  return josephson_energy / derive_josephson_energy(1.0, mean_pairs, total_pairs);
}

double exact_hopping(const ModelParams& params, std::int64_t n) {
  return params.tunneling *
         std::sqrt(static_cast<double>(n + 1) * static_cast<double>(params.total_pairs - n));
}

Operator h0_full(const SectorBasis& basis, const ModelParams& params, Eigen::Index matrix_cap) {
  check_cap(basis, matrix_cap);
  const auto d = basis.dimension();
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const double x = excess(params, static_cast<double>(n));
    m(n, n) = params.charging_energy * x * x;
  }
  const auto total = basis.total_pairs();
  for (Eigen::Index n = 0; n + 1 < d; ++n) {
    const double hop = params.tunneling * std::sqrt(static_cast<double>(n + 1) * static_cast<double>(total - n));
    m(n, n + 1) = -hop;
    m(n + 1, n) = -hop;
  }
  return Operator(basis, std::move(m));
}

Operator h0_number_rep(const SectorBasis& basis, const ModelParams& params, Eigen::Index matrix_cap) {
  check_cap(basis, matrix_cap);
  const auto d = basis.dimension();
  const double ej = params.josephson_energy();
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const double x = excess(params, static_cast<double>(n));
    m(n, n) = params.charging_energy * x * x;
    if (n + 1 < d) {
      m(n, n + 1) = -ej;
      m(n + 1, n) = -ej;
    }
  }
  return Operator(basis, std::move(m));
}

WindowedHamiltonian quantum_phase_window(const ModelParams& params) {
  const double half = std::max(10.0, 8.0 * std::sqrt(params.mean_pairs));
  const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(params.mean_pairs - half)));
  const auto hi = std::min<std::int64_t>(params.total_pairs,
                                         static_cast<std::int64_t>(std::floor(params.mean_pairs + half)));
  const auto d = static_cast<Eigen::Index>(hi - lo + 1);
  const double hop = 0.5 * params.josephson_energy();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double x = excess(params, static_cast<double>(lo + i));
    m(i, i) = params.charging_energy * x * x;
    if (i + 1 < d) {
      m(i, i + 1) = -hop;
      m(i + 1, i) = -hop;
    }
  }
  return WindowedHamiltonian{lo, std::move(m)};
}

double quantum_phase_gap(const ModelParams& params) {
  const WindowedHamiltonian w = quantum_phase_window(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w.matrix, Eigen::EigenvaluesOnly);
  const auto& e = solver.eigenvalues();
  return e(1) - e(0);
}

TwoLevelHamiltonian effective_two_level(const ModelParams& params, double band_low, double band_high) {
  const double z = params.charging_energy * (1.0 - 2.0 * params.gate_charge);
  const double x = params.josephson_energy();
  Eigen::Matrix2cd h;
  h << -0.5 * z, -0.5 * x,
       -0.5 * x, 0.5 * z;
  const bool near = params.gate_charge >= band_low && params.gate_charge <= band_high;
  return TwoLevelHamiltonian{h, near};
}

QubitFrequency omega_q(const ModelParams& params) {
  const double z = params.charging_energy * (1.0 - 2.0 * params.gate_charge);
  const double ej = params.josephson_energy();
  return QubitFrequency{std::hypot(z, ej), ej};
}

double omega_c(const ModelParams& params) {
  return std::sqrt(2.0 * params.charging_energy * params.josephson_energy());
}

double omega_n(const ModelParams& params, double n) {
  return params.charging_energy * (2.0 * excess(params, n) + 1.0);
}

}  // namespace scb
