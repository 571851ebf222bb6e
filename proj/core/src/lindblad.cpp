#include "scb/lindblad.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "scb/format.hpp"

namespace scb {

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

void check_shape(const CMatrix& rho, const SectorBasis& basis) {
  if (rho.rows() != basis.dimension() || rho.cols() != basis.dimension()) {
    throw std::invalid_argument("density matrix shape " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + " does not match sector dimension " +
                                std::to_string(basis.dimension()));
  }
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

// Deterministic, full-rank, non-hermitian start vector for power iteration.
CMatrix power_start(Eigen::Index d) {
  CMatrix x(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = static_cast<double>(i + 1);
      const double b = static_cast<double>(j + 1);
      x(i, j) = Complex(std::cos(0.7 * a + 1.3 * b), std::sin(1.1 * a - 0.4 * b));
    }
  }
  return x / x.norm();
}

}  // namespace

void DissipatorSpec::validate() const {
  const auto total = basis.total_pairs();
  if (static_cast<std::int64_t>(channels.size()) != total) {
    throw std::invalid_argument("dissipator needs exactly N channels");
  }
  if (!(coupling_sq >= 0.0)) throw std::invalid_argument("lambda^2 must be non-negative");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& c = channels[i];
    if (c.index != static_cast<std::int64_t>(i)) throw std::invalid_argument("channels must be ordered by n");
    if (!(c.emission >= 0.0) || !(c.absorption >= 0.0)) {
      throw std::invalid_argument("bath weights must be non-negative (channel " + std::to_string(i) + ")");
    }
  }
}

DissipatorSpec make_dissipator(const SectorBasis& basis, const ModelParams& params, const BathSpec& bath) {
  DissipatorSpec spec;
  spec.basis = basis;
  spec.coupling_sq = params.coupling * params.coupling;
  const auto total = basis.total_pairs();
  spec.channels.reserve(static_cast<std::size_t>(total));
  for (std::int64_t n = 0; n < total; ++n) {
    const SpectralPair s = spectral_function(bath, omega_n(params, static_cast<double>(n)));
    spec.channels.push_back(JumpChannel{
        n, std::sqrt(static_cast<double>(n + 1) * static_cast<double>(total - n)), s.emission, s.absorption});
  }
  spec.validate();
  return spec;
}

std::vector<Operator> jump_ops(const SectorBasis& basis) {
  const auto d = basis.dimension();
  const auto total = basis.total_pairs();
  std::vector<Operator> ops;
  ops.reserve(static_cast<std::size_t>(total));
  for (std::int64_t n = 0; n < total; ++n) {
    CMatrix w = CMatrix::Zero(d, d);
    w(n, n + 1) = std::sqrt(static_cast<double>(n + 1) * static_cast<double>(total - n));
    ops.emplace_back(basis, std::move(w));
  }
  return ops;
}

CMatrix dissipator(const CMatrix& rho, const DissipatorSpec& spec) {
  check_shape(rho, spec.basis);
  const auto d = spec.basis.dimension();
  // Total outflow rate gamma_i of level i and population gain on the diagonal.
  Eigen::VectorXd outflow = Eigen::VectorXd::Zero(d);
  CVector gain = CVector::Zero(d);
  for (const JumpChannel& c : spec.channels) {
    const auto n = static_cast<Eigen::Index>(c.index);
    const double a = c.amplitude * c.amplitude;
    const double up = spec.coupling_sq * c.emission * a;
    const double down = spec.coupling_sq * c.absorption * a;
    outflow(n) += up;
    outflow(n + 1) += down;
    gain(n + 1) += up * rho(n, n);
    gain(n) += down * rho(n + 1, n + 1);
  }
  CMatrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) out(i, j) = -0.5 * (outflow(i) + outflow(j)) * rho(i, j);
  }
  out.diagonal() += gain;
  return out;
}

CMatrix assembled_dissipator(const CMatrix& rho, const DissipatorSpec& spec) {
  check_shape(rho, spec.basis);
  const auto d = spec.basis.dimension();
  const std::vector<Operator> ops = jump_ops(spec.basis);
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const SparseC w = ops[k].matrix().sparseView();
    const SparseC wd = SparseC(w.adjoint());
    const SparseC w_wd = w * wd;
    const SparseC wd_w = wd * w;
    const JumpChannel& c = spec.channels[k];
    const CMatrix rho_w = rho * w;
    const CMatrix rho_wd = rho * wd;
    const CMatrix emit = wd * rho_w - 0.5 * (w_wd * rho + rho * w_wd);
    const CMatrix absorb = w * rho_wd - 0.5 * (wd_w * rho + rho * wd_w);
    out += spec.coupling_sq * (c.emission * emit + c.absorption * absorb);
  }
  return out;
}

CMatrix master_rhs(const CMatrix& rho, const Operator& hamiltonian, const DissipatorSpec& spec) {
  check_shape(rho, spec.basis);
  if (!(hamiltonian.basis() == spec.basis)) throw std::invalid_argument("Hamiltonian sector mismatch");
  const CMatrix& h = hamiltonian.matrix();
  const Complex minus_i(0.0, -1.0);
  return minus_i * (h * rho - rho * h) + dissipator(rho, spec);
}

Generator::Generator(const Operator& hamiltonian, DissipatorSpec spec, const std::optional<Operator>& correction)
    : hamiltonian_(hamiltonian.matrix()), spec_(std::move(spec)) {
  if (!(hamiltonian.basis() == spec_.basis)) throw std::invalid_argument("Hamiltonian sector mismatch");
  if (!hamiltonian.is_hermitian()) throw std::invalid_argument("Hamiltonian is not hermitian");
  if (correction) {
    if (!(correction->basis() == spec_.basis)) throw std::invalid_argument("correction sector mismatch");
    if (!correction->is_hermitian()) throw std::invalid_argument("Hamiltonian correction is not hermitian");
    hamiltonian_ += correction->matrix();
  }
  spec_.validate();
}

CMatrix Generator::apply(const CMatrix& rho) const {
  check_shape(rho, spec_.basis);
  const Complex minus_i(0.0, -1.0);
  return minus_i * (hamiltonian_ * rho - rho * hamiltonian_) + dissipator(rho, spec_);
}

double Generator::norm_estimate(int iterations) const {
  CMatrix x = power_start(spec_.basis.dimension());
  double estimate = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const CMatrix y = apply(x);
    estimate = y.norm();
    if (estimate == 0.0) return 0.0;
    x = y / estimate;
  }
  return estimate;
}

CMatrix superoperator(const Generator& generator) {
  const auto d = generator.basis().dimension();
  if (d > kSuperoperatorCap) {
    throw std::invalid_argument("superoperator limited to sector dimension <= " + std::to_string(kSuperoperatorCap));
  }
  const CMatrix id = CMatrix::Identity(d, d);
  // Column stacking: vec(A X B) = (B^T kron A) vec(X).
  auto kron = [d](const CMatrix& a, const CMatrix& b) {
    CMatrix k(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) k.block(i * d, j * d, d, d) = a(i, j) * b;
    }
    return k;
  };
  const CMatrix& h = generator.hamiltonian();
  const Complex minus_i(0.0, -1.0);
  CMatrix l = minus_i * (kron(id, h) - kron(h.transpose(), id));

  const DissipatorSpec& spec = generator.dissipator_spec();
  const std::vector<Operator> ops = jump_ops(spec.basis);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const JumpChannel& c = spec.channels[k];
    const CMatrix& w = ops[k].matrix();
    const CMatrix wd = w.adjoint();
    // Emission: L = W^dagger; absorption: L = W. Each adds L rho L^dagger - {L^dagger L, rho}/2.
    const std::pair<CMatrix, double> terms[2] = {{wd, c.emission}, {w, c.absorption}};
    for (const auto& [jump, rate] : terms) {
      if (rate == 0.0) continue;
      const CMatrix ldl = jump.adjoint() * jump;
      l += spec.coupling_sq * rate *
           (kron(jump.conjugate(), jump) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
    }
  }
  return l;
}

CMatrix propagate_exact(const CMatrix& rho0, const Generator& generator, double t) {
  const auto d = generator.basis().dimension();
  check_shape(rho0, generator.basis());
  const CMatrix l = superoperator(generator);
  const CMatrix prop = (l * t).exp();
  const CVector v = prop * Eigen::Map<const CVector>(rho0.data(), d * d);
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

CMatrix rk4_advance(const CMatrix& rho, const Generator& generator, double dt, std::int64_t steps) {
  CMatrix x = rho;
  for (std::int64_t s = 0; s < steps; ++s) {
    const CMatrix k1 = generator.apply(x);
    const CMatrix k2 = generator.apply(x + 0.5 * dt * k1);
    const CMatrix k3 = generator.apply(x + 0.5 * dt * k2);
    const CMatrix k4 = generator.apply(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

Trajectory evolve(const DensityMatrix& rho0, const Generator& generator, double t_final,
                  const EvolveOptions& options) {
  if (!(rho0.basis() == generator.basis())) throw std::invalid_argument("initial state sector mismatch");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be >= 0");
  if (options.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (options.reference && options.reference->size() != generator.basis().dimension()) {
    throw std::invalid_argument("reference state length mismatch");
  }

  const double norm = generator.norm_estimate();
  double dt = options.dt;
  if (dt <= 0.0) dt = norm > 0.0 ? kDefaultStepNorm / norm : (t_final > 0.0 ? t_final : 1.0);
  if (dt * norm > kMaxStepNorm) {
    throw StepSizeError("dt * ||L|| = " + format_g17(dt * norm) + " exceeds " + format_g17(kMaxStepNorm));
  }
  const auto steps = t_final > 0.0 ? static_cast<std::int64_t>(std::ceil(t_final / dt - 1e-9)) : 0;
  if (steps > 0) dt = t_final / static_cast<double>(steps);

  Trajectory traj;
  traj.step = dt;
  auto record = [&](double t, const CMatrix& rho) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.survival.push_back(options.reference
                                ? options.reference->dot(rho * *options.reference).real()
                                : std::numeric_limits<double>::quiet_NaN());
    traj.trace.push_back(rho.trace().real());
    traj.min_eigenvalue.push_back(min_hermitian_eigenvalue(rho));
    traj.purity.push_back((rho * rho).trace().real());
  };

  CMatrix rho = rho0.matrix();
  record(0.0, rho);
  for (std::int64_t s = 1; s <= steps; ++s) {
    rho = rk4_advance(rho, generator, dt, 1);
    if (!all_finite(rho)) throw NonFiniteStateError("non-finite density matrix at step " + std::to_string(s));
    if (s % options.record_every == 0 || s == steps) record(static_cast<double>(s) * dt, rho);
  }
  return traj;
}

GammaEstimate numeric_gamma(const PureState& psi, const Generator& generator, double tolerance) {
  if (!(psi.basis() == generator.basis())) throw std::invalid_argument("state sector mismatch");
  const CVector& v = psi.amplitudes();
  const CMatrix p = psi.projector();

  GammaEstimate g;
  const CMatrix& h = generator.hamiltonian();
  const Complex minus_i(0.0, -1.0);
  g.commutator = std::abs(v.dot((minus_i * (h * p - p * h)) * v));
  g.direct = -v.dot(generator.apply(p) * v).real();

  const double norm = generator.norm_estimate();
  const double scale = std::max(norm, std::abs(g.direct));
  if (scale == 0.0) return g;
  const double step = 1e-3 / scale;
  constexpr int kSubsteps = 8;
  const auto survival = [&](double t) {
    const CMatrix rho = rk4_advance(p, generator, t / kSubsteps, kSubsteps);
    return v.dot(rho * v).real();
  };
  const double coarse = (1.0 - survival(step)) / step;
  const double fine = (1.0 - survival(0.5 * step)) / (0.5 * step);
  g.finite_difference = 2.0 * fine - coarse;
  g.relative_disagreement = std::abs(g.finite_difference - g.direct) / std::max(std::abs(g.direct), 1e-6 * norm);
  g.consistent = g.relative_disagreement <= tolerance;
  return g;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "# scb-trajectory v1\n";
  out << "t,survival,trace,min_eig,purity\n";
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    out << format_g17(trajectory.times[i]) << ',' << format_g17(trajectory.survival[i]) << ','
        << format_g17(trajectory.trace[i]) << ',' << format_g17(trajectory.min_eigenvalue[i]) << ','
        << format_g17(trajectory.purity[i]) << '\n';
  }
}

}  // namespace scb
