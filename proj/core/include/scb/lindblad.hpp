#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "scb/bath.hpp"
#include "scb/model.hpp"
#include "scb/sector.hpp"

namespace scb {

/// One jump channel W(n) = amplitude |n><n+1| with its bath weights.
struct JumpChannel {
  std::int64_t index = 0;
  double amplitude = 0.0;   // sqrt((n+1)(N-n))
  double emission = 0.0;    // h(omega_n), weights W^dagger rho W
  double absorption = 0.0;  // kappa(omega_n), weights W rho W^dagger
};

/// Weak-coupling dissipator data: all channels n = 0..N-1 and lambda^2.
struct DissipatorSpec {
  SectorBasis basis{0};
  std::vector<JumpChannel> channels;
  double coupling_sq = 0.0;

  /// Throws std::invalid_argument on negative rates or malformed channels.
  void validate() const;
};

/// Channels with h(omega_n), kappa(omega_n) taken from the bath at the
/// model's transition frequencies.
DissipatorSpec make_dissipator(const SectorBasis& basis, const ModelParams& params, const BathSpec& bath);

/// W(n) = sqrt((n+1)(N-n)) |n><n+1| for n = 0..N-1; W(N) vanishes and is omitted.
std::vector<Operator> jump_ops(const SectorBasis& basis);

/// D[rho] using the single-entry structure of W(n); O(d^2).
CMatrix dissipator(const CMatrix& rho, const DissipatorSpec& spec);

/// D[rho] from explicit jump-operator matrices and the generic Lindblad form.
/// Independent of dissipator(); used as the reference route.
CMatrix assembled_dissipator(const CMatrix& rho, const DissipatorSpec& spec);

/// -i [H, rho] + D[rho]
CMatrix master_rhs(const CMatrix& rho, const Operator& hamiltonian, const DissipatorSpec& spec);

/// Master-equation generator. The environment-induced Hamiltonian correction
/// defaults to zero; a hermitian correction may be injected.
class Generator {
 public:
  Generator(const Operator& hamiltonian, DissipatorSpec spec,
            const std::optional<Operator>& correction = std::nullopt);

  const SectorBasis& basis() const { return spec_.basis; }
  const CMatrix& hamiltonian() const { return hamiltonian_; }
  const DissipatorSpec& dissipator_spec() const { return spec_; }

  CMatrix apply(const CMatrix& rho) const;

  /// Operator-norm estimate by power iteration on the generator.
  double norm_estimate(int iterations = 20) const;

 private:
  CMatrix hamiltonian_;
  DissipatorSpec spec_;
};

inline constexpr Eigen::Index kSuperoperatorCap = 60;

/// Dense (d^2 x d^2) generator acting on column-stacked rho. Throws above
/// kSuperoperatorCap.
CMatrix superoperator(const Generator& generator);

/// rho(t) = exp(L t) rho0 via the dense superoperator.
CMatrix propagate_exact(const CMatrix& rho0, const Generator& generator, double t);

class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;
  std::vector<double> survival;  // <psi0|rho(t)|psi0>, NaN without a reference state
  std::vector<double> trace;
  std::vector<double> min_eigenvalue;
  std::vector<double> purity;
  double step = 0.0;
};

struct EvolveOptions {
  double dt = 0.0;       // <= 0: 0.05 / ||L||
  int record_every = 1;  // steps between recorded points; the final point is always recorded
  std::optional<CVector> reference;
};

inline constexpr double kMaxStepNorm = 0.1;
inline constexpr double kDefaultStepNorm = 0.05;

/// Fixed-step classical RK4. Throws StepSizeError when dt ||L|| > 0.1 and
/// NonFiniteStateError when the state stops being finite.
Trajectory evolve(const DensityMatrix& rho0, const Generator& generator, double t_final,
                  const EvolveOptions& options = {});

/// Advance rho by `steps` RK4 steps of size dt without recording.
CMatrix rk4_advance(const CMatrix& rho, const Generator& generator, double dt, std::int64_t steps);

struct GammaEstimate {
  double direct = 0.0;             // -<psi| L[|psi><psi|] |psi>
  double commutator = 0.0;         // |<psi| -i[H, P] |psi>|, zero up to rounding
  double finite_difference = 0.0;  // Richardson two-point derivative of the survival
  double relative_disagreement = 0.0;
  bool consistent = true;
};

/// Initial decay rate of the survival probability of psi.
GammaEstimate numeric_gamma(const PureState& psi, const Generator& generator, double tolerance = 1e-3);

/// CSV columns: t, survival, trace, min_eig, purity (17 significant digits).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace scb
