#include "scb/sector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scb {

namespace {

// Log-weights of Binomial(N, p) on [lo, hi], relative to the mode (or the
// nearest in-range index). The ratio recurrence avoids the precision loss of
// evaluating lgamma at N ~ 1e9.
std::vector<double> binomial_log_weights(std::int64_t total, double p, std::int64_t lo,
                                         std::int64_t hi) {
  const double logit = std::log(p) - std::log1p(-p);
  auto mode = static_cast<std::int64_t>(std::floor(static_cast<double>(total + 1) * p));
  mode = std::clamp(mode, lo, hi);

  std::vector<double> logw(static_cast<std::size_t>(hi - lo + 1));
  const auto at = [&](std::int64_t n) -> double& { return logw[static_cast<std::size_t>(n - lo)]; };
  at(mode) = 0.0;
  for (std::int64_t n = mode + 1; n <= hi; ++n) {
    at(n) = at(n - 1) + std::log(static_cast<double>(total - n + 1) / static_cast<double>(n)) + logit;
  }
  for (std::int64_t n = mode - 1; n >= lo; --n) {
    at(n) = at(n + 1) - std::log(static_cast<double>(total - n) / static_cast<double>(n + 1)) - logit;
  }
  return logw;
}

BinomialWindow make_window(std::int64_t total, double mean, std::int64_t lo, std::int64_t hi) {
  const double p = mean / static_cast<double>(total);
  std::vector<double> logw = binomial_log_weights(total, p, lo, hi);
  const double peak = *std::max_element(logw.begin(), logw.end());
  long double sum = 0.0L;
  for (double& w : logw) {
    w = std::exp(w - peak);
    sum += w;
  }
  for (double& w : logw) w = static_cast<double>(w / sum);
  return BinomialWindow{lo, std::move(logw)};
}

void check_mean(std::int64_t total, double mean) {
  if (!(mean > 0.0) || !(mean < static_cast<double>(total)) || !std::isfinite(mean)) {
    throw std::invalid_argument("mean pair count must lie in (0, N); got nbar=" + std::to_string(mean) +
                                ", N=" + std::to_string(total));
  }
}

}  // namespace

SectorBasis::SectorBasis(std::int64_t total_pairs) : total_pairs_(total_pairs) {
  if (total_pairs < 0) {
    throw std::invalid_argument("total pair count N must be >= 0, got " + std::to_string(total_pairs));
  }
}

SectorBasis build_basis(std::int64_t total_pairs) { return SectorBasis(total_pairs); }

Operator::Operator(SectorBasis basis, CMatrix matrix) : basis_(basis), matrix_(std::move(matrix)) {
  if (matrix_.rows() != basis_.dimension() || matrix_.cols() != basis_.dimension()) {
    throw std::invalid_argument("operator shape does not match sector dimension");
  }
}

double Operator::hermiticity_defect() const {
  const double scale = matrix_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

PureState::PureState(SectorBasis basis, CVector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != basis_.dimension()) {
    throw std::invalid_argument("state length does not match sector dimension");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("state is not normalized: |psi|^2 = " + std::to_string(norm2));
  }
}

Complex PureState::expectation(const CMatrix& op) const {
  return amplitudes_.dot(op * amplitudes_);
}

double min_hermitian_eigenvalue(const CMatrix& m) {
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(SectorBasis basis, CMatrix entries)
    : basis_(basis), entries_(std::move(entries)) {
  if (entries_.rows() != basis_.dimension() || entries_.cols() != basis_.dimension()) {
    throw std::invalid_argument("density matrix shape does not match sector dimension");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("density matrix trace deviates from 1");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("density matrix is not hermitian");
  }
  if (min_hermitian_eigenvalue(entries_) < -kPositivityTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.basis(), psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(const SectorBasis& basis) {
  const auto d = basis.dimension();
  return DensityMatrix(basis, CMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

double DensityMatrix::min_eigenvalue() const { return min_hermitian_eigenvalue(entries_); }

Operator tunneling_op(const SectorBasis& basis) {
  const auto d = basis.dimension();
  const auto total = basis.total_pairs();
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n + 1 < d; ++n) {
    const double amp = std::sqrt(static_cast<double>(n + 1) * static_cast<double>(total - n));
    m(n, n + 1) = amp;
    m(n + 1, n) = amp;
  }
  return Operator(basis, std::move(m));
}

Operator number_op(const SectorBasis& basis) {
  const auto d = basis.dimension();
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
  return Operator(basis, std::move(m));
}

PureState fock_state(const SectorBasis& basis, std::int64_t n) {
  if (n < 0 || n > basis.total_pairs()) {
    throw std::out_of_range("Fock index " + std::to_string(n) + " outside [0, " +
                            std::to_string(basis.total_pairs()) + "]");
  }
  CVector amps = CVector::Zero(basis.dimension());
  amps(static_cast<Eigen::Index>(n)) = 1.0;
  return PureState(basis, std::move(amps));
}

double BinomialWindow::at(std::int64_t n) const {
  if (n < first || n > last()) return 0.0;
  return probabilities[static_cast<std::size_t>(n - first)];
}

double BinomialWindow::mean() const {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += static_cast<long double>(probabilities[i]) * static_cast<long double>(first + static_cast<std::int64_t>(i));
  }
  return static_cast<double>(acc);
}

BinomialWindow binomial_window(std::int64_t total_pairs, double mean_pairs) {
  check_mean(total_pairs, mean_pairs);
  const double p = mean_pairs / static_cast<double>(total_pairs);
  const double sigma = std::sqrt(mean_pairs * (1.0 - p));
  const auto half = static_cast<std::int64_t>(std::ceil(12.0 * sigma + 12.0));
  const auto centre = static_cast<std::int64_t>(std::llround(mean_pairs));
  const std::int64_t lo = std::max<std::int64_t>(0, centre - half);
  const std::int64_t hi = std::min<std::int64_t>(total_pairs, centre + half);
  return make_window(total_pairs, mean_pairs, lo, hi);
}

BinomialWindow binomial_full(std::int64_t total_pairs, double mean_pairs) {
  check_mean(total_pairs, mean_pairs);
  return make_window(total_pairs, mean_pairs, 0, total_pairs);
}

PureState coherent_coefficients(const SectorBasis& basis, double mean_pairs, double phase) {
  const auto total = basis.total_pairs();
  const BinomialWindow pmf = binomial_full(total, mean_pairs);
  CVector amps(basis.dimension());
  for (Eigen::Index n = 0; n < basis.dimension(); ++n) {
    const double mag = std::sqrt(pmf.probabilities[static_cast<std::size_t>(n)]);
    amps(n) = std::polar(mag, -static_cast<double>(n) * phase);
  }
  amps /= amps.norm();
  return PureState(basis, std::move(amps));
}

double poisson_tail_mass(double mean_pairs, std::int64_t cutoff) {
  const double log_mean = std::log(mean_pairs);
  const auto log_pmf = [&](std::int64_t n) {
    const double k = static_cast<double>(n);
    return k * log_mean - mean_pairs - std::lgamma(k + 1.0);
  };
  if (static_cast<double>(cutoff) <= mean_pairs) {
    long double head = 0.0L;
    for (std::int64_t n = 0; n <= cutoff; ++n) head += std::exp(log_pmf(n));
    return std::max(0.0, static_cast<double>(1.0L - head));
  }
  long double tail = 0.0L;
  for (std::int64_t n = cutoff + 1;; ++n) {
    const double term = std::exp(log_pmf(n));
    tail += term;
    if (term == 0.0 || term < 1e-18 * static_cast<double>(tail)) break;
  }
  return static_cast<double>(tail);
}

std::int64_t default_poisson_cutoff(double mean_pairs) {
  return static_cast<std::int64_t>(std::ceil(mean_pairs + 12.0 * std::sqrt(mean_pairs)));
}

PoissonState poisson_coefficients(double mean_pairs, double phase, std::int64_t cutoff,
                                  double tail_tolerance) {
  if (!(mean_pairs > 0.0) || !std::isfinite(mean_pairs)) {
    throw std::invalid_argument("Poisson mean must be positive");
  }
  double tail = 0.0;
  if (cutoff <= 0) {
    cutoff = default_poisson_cutoff(mean_pairs);
    const auto stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(mean_pairs))));
    while ((tail = poisson_tail_mass(mean_pairs, cutoff)) >= tail_tolerance) cutoff += stride;
  } else {
    tail = poisson_tail_mass(mean_pairs, cutoff);
    if (tail >= tail_tolerance) {
      throw std::invalid_argument("Poisson cutoff " + std::to_string(cutoff) + " leaves tail mass " +
                                  std::to_string(tail) + " above tolerance");
    }
  }

  const double log_mean = std::log(mean_pairs);
  std::vector<double> logw(static_cast<std::size_t>(cutoff + 1));
  for (std::int64_t n = 0; n <= cutoff; ++n) {
    const double k = static_cast<double>(n);
    logw[static_cast<std::size_t>(n)] = k * log_mean - mean_pairs - std::lgamma(k + 1.0);
  }
  const double peak = *std::max_element(logw.begin(), logw.end());
  const SectorBasis basis(cutoff);
  CVector amps(basis.dimension());
  for (Eigen::Index n = 0; n < basis.dimension(); ++n) {
    const double mag = std::exp(0.5 * (logw[static_cast<std::size_t>(n)] - peak));
    amps(n) = std::polar(mag, -static_cast<double>(n) * phase);
  }
  amps /= amps.norm();
  return PoissonState{PureState(basis, std::move(amps)), tail};
}

double gaussian_weight(double mean_pairs, double k) {
  return std::exp(-k * k / (2.0 * mean_pairs)) / std::sqrt(2.0 * std::numbers::pi * mean_pairs);
}

}  // namespace scb
