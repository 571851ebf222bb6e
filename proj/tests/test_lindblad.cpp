#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scb/lindblad.hpp"
#include "scb/rates.hpp"

using namespace scb;

namespace {

ModelParams params(std::int64_t total, double nbar, double tunneling = 0.0, double lambda = 0.1) {
  ModelParams p;
  p.charging_energy = 1.0;
  p.tunneling = tunneling;
  p.total_pairs = total;
  p.mean_pairs = nbar;
  p.gate_charge = 0.5;
  p.coupling = lambda;
  return p;
}

BathSpec bath_for(double r, double g2 = 1.0) { return BathSpec::exponential(g2, r / 2.0); }

std::vector<double> weights(const DissipatorSpec& s, bool emission) {
  std::vector<double> out;
  for (const auto& c : s.channels) out.push_back(emission ? c.emission : c.absorption);
  return out;
}

}  // namespace

TEST(Lindblad, JumpOperators) {
  const auto one = jump_ops(build_basis(1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].matrix()(0, 1), Complex(1.0));
  const int total = 7;
  const auto ops = jump_ops(build_basis(total));
  ASSERT_EQ(ops.size(), static_cast<std::size_t>(total));
  for (int n = 0; n < total; ++n) {
    const CMatrix& w = ops[n].matrix();
    const double a2 = (n + 1.0) * (total - n);
    CMatrix up = CMatrix::Zero(total + 1, total + 1);
    up(n + 1, n + 1) = a2;
    CMatrix down = CMatrix::Zero(total + 1, total + 1);
    down(n, n) = a2;
    EXPECT_LT((w.adjoint() * w - up).norm(), 1e-12);
    EXPECT_LT((w * w.adjoint() - down).norm(), 1e-12);
  }
}

TEST(Lindblad, DissipatorTraceAndHermiticity) {
  const ModelParams p = params(20, 10.0);
  const DissipatorSpec spec = make_dissipator(build_basis(20), p, bath_for(1.0));
  for (int seed = 0; seed < 10; ++seed) {
    const CMatrix rho = oracle::random_density(21, seed);
    const CMatrix d = dissipator(rho, spec);
    EXPECT_LT(std::abs(d.trace()), 1e-12);
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Lindblad, StructuredMatchesAssembledAndOracle) {
  const ModelParams p = params(12, 5.0);
  const DissipatorSpec spec = make_dissipator(build_basis(12), p, bath_for(0.7));
  const CMatrix rho = oracle::random_density(13, 42);
  const CMatrix ref = oracle::lindblad(rho, 12, spec.coupling_sq, weights(spec, true), weights(spec, false));
  EXPECT_LT((dissipator(rho, spec) - ref).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((assembled_dissipator(rho, spec) - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Lindblad, FockExpectationMatchesClosedForm) {
  const ModelParams p = params(50, 25.0);
  const BathSpec bath = bath_for(1.0);
  const SectorBasis basis = build_basis(50);
  const DissipatorSpec spec = make_dissipator(basis, p, bath);
  for (int n = 0; n <= 50; ++n) {
    const CMatrix proj = fock_state(basis, n).projector();
    const double value = -assembled_dissipator(proj, spec)(n, n).real();
    EXPECT_NEAR(value / gamma_fock(n, p, bath), 1.0, 1e-10) << n;
  }
}

TEST(Lindblad, MasterRhsLimits) {
  const SectorBasis basis = build_basis(6);
  ModelParams p = params(6, 3.0, 0.2);
  const Operator h = h0_full(basis, p);
  const CMatrix rho = oracle::random_density(7, 3);
  p.coupling = 0.0;
  const DissipatorSpec silent = make_dissipator(basis, p, bath_for(1.0));
  const CMatrix comm = master_rhs(rho, h, silent);
  EXPECT_LT((comm - Complex(0, -1) * (h.matrix() * rho - rho * h.matrix())).norm(), 1e-14);
  EXPECT_LT(std::abs(comm.trace()), 1e-14);
  p.coupling = 0.1;
  const DissipatorSpec spec = make_dissipator(basis, p, bath_for(1.0));
  const Operator zero(basis, CMatrix::Zero(7, 7));
  EXPECT_LT((master_rhs(rho, zero, spec) - dissipator(rho, spec)).norm(), 1e-15);
  EXPECT_THROW(dissipator(CMatrix::Zero(3, 3), spec), std::invalid_argument);
}

TEST(Lindblad, SuperoperatorMatchesDirect) {
  const SectorBasis basis = build_basis(10);
  const ModelParams p = params(10, 5.0, 0.3);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0)));
  const CMatrix lib = superoperator(gen);
  const CMatrix ref = oracle::superoperator(11, [&](const CMatrix& e) { return gen.apply(e); });
  EXPECT_LT((lib - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff(), 1e-12);
  const CMatrix rho = oracle::random_density(11, 9);
  const CVector v = Eigen::Map<const CVector>(rho.data(), rho.size());
  const CVector lv = lib * v;
  const CMatrix direct = gen.apply(rho);
  EXPECT_LT((Eigen::Map<const CMatrix>(lv.data(), 11, 11) - direct).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(superoperator(Generator(h0_full(build_basis(60), params(60, 30)),
                                       make_dissipator(build_basis(60), params(60, 30), bath_for(1.0)))),
               std::invalid_argument);
}

TEST(Lindblad, MaximallyMixedIsStationaryForSymmetricBath) {
  const SectorBasis basis = build_basis(10);
  const DissipatorSpec spec = make_dissipator(basis, params(10, 5.0), bath_for(2.0));
  const CMatrix mixed = DensityMatrix::maximally_mixed(basis).matrix();
  EXPECT_LT(dissipator(mixed, spec).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lindblad, InjectedCorrectionMustBeHermitian) {
  const SectorBasis basis = build_basis(3);
  const ModelParams p = params(3, 1.5, 0.1);
  const DissipatorSpec spec = make_dissipator(basis, p, bath_for(1.0));
  CMatrix c = CMatrix::Zero(4, 4);
  c(0, 1) = 1.0;
  EXPECT_THROW(Generator(h0_full(basis, p), spec, Operator(basis, c)), std::invalid_argument);
  c(1, 0) = 1.0;
  const Generator g(h0_full(basis, p), spec, Operator(basis, c));
  EXPECT_LT((g.hamiltonian() - h0_full(basis, p).matrix() - c).norm(), 1e-15);
}

TEST(Lindblad, NegativeWeightsRejected) {
  DissipatorSpec spec = make_dissipator(build_basis(3), params(3, 1.5), bath_for(1.0));
  spec.channels[1].absorption = -1.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Lindblad, UnitaryEvolutionKeepsPopulationsAndPurity) {
  const SectorBasis basis = build_basis(8);
  ModelParams p = params(8, 4.0, 0.0, 0.0);
  const Generator diag(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0)));
  CMatrix rho0 = CMatrix::Zero(9, 9);
  for (int i = 0; i < 9; ++i) rho0(i, i) = (i + 1.0) / 45.0;
  const Trajectory a = evolve(DensityMatrix(basis, rho0), diag, 5.0);
  EXPECT_LT((a.states.back().diagonal() - rho0.diagonal()).cwiseAbs().maxCoeff(), 1e-12);

  p.tunneling = 0.3;
  const Generator hop(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0)));
  const PureState psi = coherent_coefficients(basis, 3.0, 0.4);
  // RK4 is not exactly unitary: at the default 0.05 / ||L|| step purity decays by ~2e-9 per unit time.
  EvolveOptions fine;
  fine.dt = 0.01 / hop.norm_estimate();
  const Trajectory b = evolve(DensityMatrix::from_pure(psi), hop, 5.0, fine);
  for (double purity : b.purity) EXPECT_NEAR(purity, 1.0, 1e-10);
}

TEST(Lindblad, TrajectoryInvariants) {
  const SectorBasis basis = build_basis(12);
  const ModelParams p = params(12, 6.0, 0.2);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0, 10.0)));
  const PureState psi = coherent_coefficients(basis, 6.0, 0.0);
  EvolveOptions opt;
  opt.reference = psi.amplitudes();
  const double gamma = gamma_coherent_exact(p, bath_for(1.0, 10.0));
  const Trajectory tr = evolve(DensityMatrix::from_pure(psi), gen, 3.0 / gamma, opt);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_LT(std::abs(tr.trace[i] - 1.0), 1e-8);
    EXPECT_GE(tr.min_eigenvalue[i], -1e-8);
    EXPECT_LT((tr.states[i] - tr.states[i].adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_LT(tr.survival.back(), 0.5);
  const CMatrix exact = propagate_exact(DensityMatrix::from_pure(psi).matrix(), gen, 3.0 / gamma);
  EXPECT_LT((tr.states.back() - exact).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lindblad, FourthOrderConvergence) {
  const SectorBasis basis = build_basis(6);
  const ModelParams p = params(6, 3.0, 0.4);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0, 30.0)));
  const CMatrix rho0 = DensityMatrix::from_pure(fock_state(basis, 2)).matrix();
  const double t = 2.0;
  const CMatrix exact = propagate_exact(rho0, gen, t);
  const double norm = gen.norm_estimate();
  const double dt = 0.08 / norm;
  const auto steps = static_cast<std::int64_t>(std::ceil(t / dt));
  const double e1 = (rk4_advance(rho0, gen, t / steps, steps) - exact).cwiseAbs().maxCoeff();
  const double e2 = (rk4_advance(rho0, gen, t / (2 * steps), 2 * steps) - exact).cwiseAbs().maxCoeff();
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(Lindblad, StepSizeGuard) {
  const SectorBasis basis = build_basis(4);
  const ModelParams p = params(4, 2.0, 0.2);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0)));
  EvolveOptions opt;
  opt.dt = 1.0 / gen.norm_estimate();
  EXPECT_THROW(evolve(DensityMatrix::maximally_mixed(basis), gen, 1.0, opt), StepSizeError);
}

TEST(Lindblad, NormEstimateBracketsSpectralRadius) {
  const SectorBasis basis = build_basis(5);
  const ModelParams p = params(5, 2.5, 0.2);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0, 5.0)));
  const CMatrix s = superoperator(gen);
  const double sigma = Eigen::JacobiSVD<CMatrix>(s).singularValues()(0);
  const double est = gen.norm_estimate();
  EXPECT_LE(est, sigma * (1.0 + 1e-12));
  EXPECT_GT(est, 0.3 * sigma);
}

TEST(Lindblad, NumericGammaMatchesClosedForms) {
  const SectorBasis basis = build_basis(30);
  for (double r : {0.1, 1.0, 10.0}) {
    const ModelParams p = params(30, 15.0, 0.02);
    const BathSpec bath = bath_for(r);
    const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath));
    for (int n : {0, 7, 15, 30}) {
      const GammaEstimate g = numeric_gamma(fock_state(basis, n), gen);
      EXPECT_NEAR(g.direct / gamma_fock(n, p, bath), 1.0, 1e-8);
      EXPECT_LT(g.commutator, 1e-12 * std::max(1.0, gen.norm_estimate()));
      EXPECT_TRUE(g.consistent) << g.relative_disagreement;
    }
    const GammaEstimate c = numeric_gamma(coherent_coefficients(basis, 15.0, 0.0), gen);
    EXPECT_NEAR(c.direct / gamma_coherent_exact(p, bath), 1.0, 1e-8);
    EXPECT_NEAR(c.finite_difference / c.direct, 1.0, 1e-3);
  }
}

TEST(Lindblad, NumericGammaVanishesWithoutCoupling) {
  const SectorBasis basis = build_basis(8);
  const ModelParams p = params(8, 4.0, 0.1, 0.0);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0)));
  EXPECT_EQ(numeric_gamma(coherent_coefficients(basis, 4.0, 0.0), gen).direct, 0.0);
}

TEST(Lindblad, DecayRateNonNegative) {
  const SectorBasis basis = build_basis(9);
  const ModelParams p = params(9, 4.0, 0.1);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(3.0)));
  for (int seed = 0; seed < 50; ++seed) {
    const PureState psi(basis, oracle::random_state(10, seed));
    EXPECT_GE(numeric_gamma(psi, gen).direct, -1e-12);
  }
}

TEST(Lindblad, DarkStatesSmallSectors) {
  // With only the W^dagger rho W channels active the top state |N> is the unique
  // dark state; with both channels active there is none.
  for (int total = 1; total <= 6; ++total) {
    const SectorBasis basis = build_basis(total);
    const ModelParams p = params(total, total / 2.0);
    DissipatorSpec one_sided = make_dissipator(basis, p, bath_for(1.0));
    for (auto& c : one_sided.channels) c.absorption = 0.0;
    const DissipatorSpec both = make_dissipator(basis, p, bath_for(1.0));
    const Operator zero(basis, CMatrix::Zero(total + 1, total + 1));
    const Generator g1(zero, one_sided);
    const Generator g2(zero, both);
    const CMatrix s1 = oracle::superoperator(total + 1, [&](const CMatrix& e) { return g1.apply(e); });
    for (int n = 0; n <= total; ++n) {
      const PureState f = fock_state(basis, n);
      const double rate = numeric_gamma(f, g1).direct;
      const CMatrix proj = f.projector();
      const CVector v = Eigen::Map<const CVector>(proj.data(), proj.size());
      const CVector d = s1 * v;
      const double oracle_rate = -d(n + n * (total + 1)).real();
      EXPECT_NEAR(rate, oracle_rate, 1e-12);
      EXPECT_EQ(rate < 1e-14, n == total) << total << " " << n;
      EXPECT_GT(numeric_gamma(f, g2).direct, 0.0);
    }
    for (int seed = 0; seed < 20; ++seed) {
      const PureState psi(basis, oracle::random_state(total + 1, 100 + seed));
      EXPECT_GT(numeric_gamma(psi, g1).direct, 1e-10);
    }
  }
}

TEST(Lindblad, TrajectoryCsv) {
  const SectorBasis basis = build_basis(3);
  const ModelParams p = params(3, 1.5, 0.2);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath_for(1.0)));
  EvolveOptions opt;
  opt.reference = fock_state(basis, 1).amplitudes();
  opt.record_every = 10;
  const Trajectory tr = evolve(DensityMatrix::from_pure(fock_state(basis, 1)), gen, 1.0, opt);
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# scb-trajectory v1");
  std::getline(in, line);
  EXPECT_EQ(line, "t,survival,trace,min_eig,purity");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  EXPECT_EQ(tr.times.back(), 1.0);
}
