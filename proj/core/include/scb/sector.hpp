#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace scb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Fixed total-pair-number sector of the two-electrode system.
///
/// Basis index n counts Cooper pairs on the small electrode L and labels the
/// state |n_L = n, n_R = N - n>. The sector has N + 1 states.
class SectorBasis {
 public:
  explicit SectorBasis(std::int64_t total_pairs);

  std::int64_t total_pairs() const { return total_pairs_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(total_pairs_ + 1); }

  bool operator==(const SectorBasis&) const = default;

 private:
  std::int64_t total_pairs_;
};

SectorBasis build_basis(std::int64_t total_pairs);

/// Matrix representation of an operator on a sector.
class Operator {
 public:
  Operator(SectorBasis basis, CMatrix matrix);

  const SectorBasis& basis() const { return basis_; }
  const CMatrix& matrix() const { return matrix_; }

  /// max|A - A^dagger| / max|A| (0 for the zero operator).
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }

 private:
  SectorBasis basis_;
  CMatrix matrix_;
};

/// Normalized pure state on a sector.
class PureState {
 public:
  /// Throws std::invalid_argument when the length mismatches the basis or the
  /// norm deviates from 1 by more than 1e-10.
  PureState(SectorBasis basis, CVector amplitudes);

  const SectorBasis& basis() const { return basis_; }
  const CVector& amplitudes() const { return amplitudes_; }

  /// <psi| A |psi>
  Complex expectation(const CMatrix& op) const;
  CMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  SectorBasis basis_;
  CVector amplitudes_;
};

/// Density matrix with validated trace, hermiticity and positivity.
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kPositivityTol = 1e-10;

  DensityMatrix(SectorBasis basis, CMatrix entries);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(const SectorBasis& basis);

  const SectorBasis& basis() const { return basis_; }
  const CMatrix& matrix() const { return entries_; }

  double purity() const;
  double min_eigenvalue() const;

 private:
  SectorBasis basis_;
  CMatrix entries_;
};

double min_hermitian_eigenvalue(const CMatrix& m);

Operator tunneling_op(const SectorBasis& basis);
Operator number_op(const SectorBasis& basis);

PureState fock_state(const SectorBasis& basis, std::int64_t n);

/// Binomial(N, nbar/N) probabilities restricted to a window of indices.
/// Probabilities are normalized over the window; the window is chosen so the
/// excluded mass is below 1e-12 unless a full range is requested.
struct BinomialWindow {
  std::int64_t first = 0;
  std::vector<double> probabilities;

  std::int64_t last() const { return first + static_cast<std::int64_t>(probabilities.size()) - 1; }
  /// Probability at absolute index n (0 outside the window).
  double at(std::int64_t n) const;
  double mean() const;
};

BinomialWindow binomial_window(std::int64_t total_pairs, double mean_pairs);
BinomialWindow binomial_full(std::int64_t total_pairs, double mean_pairs);

/// Coherent-like product state C_n = sqrt(binom(N, n)) psi_L^n psi_R^(N-n) with
/// psi_L = sqrt(nbar/N) e^{-i theta}, psi_R = sqrt(1 - nbar/N).
PureState coherent_coefficients(const SectorBasis& basis, double mean_pairs, double phase);

struct PoissonState {
  PureState state;
  double tail_mass;
};

/// Truncated Poissonian coherent state; cutoff <= 0 selects the default.
PoissonState poisson_coefficients(double mean_pairs, double phase, std::int64_t cutoff = 0,
                                  double tail_tolerance = 1e-12);

std::int64_t default_poisson_cutoff(double mean_pairs);

/// Upper tail mass P(X > cutoff) of a Poisson(mean) variable.
double poisson_tail_mass(double mean_pairs, std::int64_t cutoff);

/// Central-limit weight exp(-k^2 / 2 nbar) / sqrt(2 pi nbar). Uses variance nbar
/// rather than the binomial nbar (1 - nbar/N); the two agree for N >> nbar.
double gaussian_weight(double mean_pairs, double k);

}  // namespace scb
