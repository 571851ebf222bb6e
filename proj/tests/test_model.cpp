#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scb/model.hpp"

using namespace scb;

namespace {
ModelParams base() {
  ModelParams p;
  p.charging_energy = 1.0;
  p.tunneling = 0.01;
  p.total_pairs = 10;
  p.mean_pairs = 5.0;
  p.gate_charge = 0.5;
  p.coupling = 0.05;
  return p;
}
}  // namespace

TEST(Model, GateCharge) {
  EXPECT_DOUBLE_EQ(derive_gate_charge(3.0, 3.0, 2.0, 0.0), 0.0);
  const double ec = 1.5, nbar = 7.0;
  EXPECT_NEAR(derive_gate_charge(0.0, 2.0 * ec * (nbar + 0.5), ec, nbar), 0.5, 1e-14);
  EXPECT_NEAR(derive_gate_charge(0.0, 2.0 * ec * nbar, ec, nbar), 0.0, 1e-14);
  EXPECT_THROW(derive_gate_charge(0.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(Model, JosephsonEnergy) {
  EXPECT_DOUBLE_EQ(derive_josephson_energy(1.0, 4.0, 8), 4.0);
  EXPECT_DOUBLE_EQ(derive_josephson_energy(0.0, 4.0, 8), 0.0);
  EXPECT_NEAR(tunneling_for_josephson(4.0, 4.0, 8), 1.0, 1e-15);
  EXPECT_THROW(derive_josephson_energy(1.0, 0.0, 8), std::invalid_argument);
}

TEST(Model, Validation) {
  ModelParams p = base();
  EXPECT_NO_THROW(p.validate());
  p.coupling = 0.2;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(p.validate(0.3));
  p = base();
  p.charging_energy = 0.0;
  try {
    p.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("E_C"), std::string::npos);
  }
  p = base();
  p.mean_pairs = 10.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Model, H0DiagonalWithoutTunneling) {
  ModelParams p = base();
  p.tunneling = 0.0;
  const Operator h = h0_full(build_basis(10), p);
  for (int n = 0; n <= 10; ++n) {
    const double x = n - p.mean_pairs - p.gate_charge;
    EXPECT_DOUBLE_EQ(h.matrix()(n, n).real(), x * x);
  }
  EXPECT_NEAR((h.matrix() - CMatrix(h.matrix().diagonal().asDiagonal())).norm(), 0.0, 0.0);
}

TEST(Model, H0HermitianAndCapped) {
  ModelParams p = base();
  p.total_pairs = 50;
  p.mean_pairs = 25.0;
  EXPECT_TRUE(h0_full(build_basis(50), p).is_hermitian());
  EXPECT_TRUE(h0_number_rep(build_basis(50), p).is_hermitian());
  EXPECT_THROW(h0_full(build_basis(50), p, 20), std::invalid_argument);
}

TEST(Model, H0SpectrumMatchesSturmOracle) {
  ModelParams p = base();
  p.tunneling = 0.3;
  const Operator h = h0_full(build_basis(10), p);
  std::vector<double> diag, off;
  for (int n = 0; n <= 10; ++n) {
    const double x = n - 5.5;
    diag.push_back(x * x);
    if (n < 10) off.push_back(-0.3 * std::sqrt((n + 1.0) * (10.0 - n)));
  }
  const std::vector<double> ref = oracle::tridiagonal_eigenvalues(diag, off);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(es.eigenvalues()(k), ref[k], 1e-10);
}

TEST(Model, NumberRepTwoState) {
  ModelParams p = base();
  p.total_pairs = 1;
  p.mean_pairs = 0.5;
  p.tunneling = 0.2;
  const Operator h = h0_number_rep(build_basis(1), p);
  EXPECT_DOUBLE_EQ(h.matrix()(0, 1).real(), -p.josephson_energy());
  EXPECT_DOUBLE_EQ(h.matrix()(1, 0).real(), -0.1);
  EXPECT_TRUE(h.is_hermitian());
}

TEST(Model, NumberRepHoppingDeviation) {
  // |sqrt((n+1)(N-n)) / sqrt(nbar (N - nbar)) - 1| ~ |n - nbar| / (2 nbar) for N >> nbar.
  for (double nbar : {1e4, 1e8}) {
    ModelParams p = base();
    p.mean_pairs = nbar;
    p.total_pairs = static_cast<std::int64_t>(nbar * 1e4);
    p.tunneling = 1.0;
    const double ej = p.josephson_energy();
    const auto w = static_cast<std::int64_t>(std::sqrt(nbar));
    double worst = 0.0;
    for (std::int64_t n = static_cast<std::int64_t>(nbar) - w; n <= static_cast<std::int64_t>(nbar) + w; ++n) {
      worst = std::max(worst, std::abs(exact_hopping(p, n) / ej - 1.0));
    }
    EXPECT_LT(worst, (std::sqrt(nbar) + 1.0) / (2.0 * nbar) * 1.01) << nbar;
    if (nbar >= 1e8) {
      EXPECT_LT(worst, 1e-3);
    }
  }
}

TEST(Model, TwoLevel) {
  ModelParams p = base();
  p.tunneling = 0.2;
  const double ej = p.josephson_energy();
  const TwoLevelHamiltonian t = effective_two_level(p);
  EXPECT_TRUE(t.near_resonance);
  EXPECT_NEAR(std::abs(t.matrix(0, 0)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(t.matrix(0, 1).real(), -0.5 * ej);
  EXPECT_NEAR(t.matrix.trace().real(), 0.0, 1e-15);
  for (double ng : {0.0, 0.31, 0.5, 0.9}) {
    p.gate_charge = ng;
    const TwoLevelHamiltonian h = effective_two_level(p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h.matrix);
    EXPECT_NEAR(es.eigenvalues()(1) - es.eigenvalues()(0), omega_q(p).exact, 1e-12);
    EXPECT_EQ(h.near_resonance, ng >= 0.3 && ng <= 0.7);
  }
}

TEST(Model, QubitFrequency) {
  ModelParams p = base();
  p.tunneling = 0.2;
  EXPECT_EQ(omega_q(p).exact, p.josephson_energy());
  EXPECT_EQ(omega_q(p).resonance, p.josephson_energy());
  p.gate_charge = 0.0;
  p.tunneling = tunneling_for_josephson(1.0, p.mean_pairs, p.total_pairs);
  EXPECT_NEAR(omega_q(p).exact, std::sqrt(2.0), 1e-14);
}

TEST(Model, ChargeOscillationFrequency) {
  ModelParams p = base();
  p.tunneling = tunneling_for_josephson(1.0, p.mean_pairs, p.total_pairs);
  EXPECT_NEAR(omega_c(p), std::sqrt(2.0), 1e-14);
  p.tunneling = 0.0;
  EXPECT_EQ(omega_c(p), 0.0);
}

TEST(Model, FrequencyRatioAcrossGrid) {
  for (double ratio : {1.0, 10.0, 100.0}) {
    ModelParams p = base();
    p.tunneling = tunneling_for_josephson(0.37, p.mean_pairs, p.total_pairs);
    p.charging_energy = ratio * 0.37;
    const double ej = p.josephson_energy();
    EXPECT_NEAR(omega_c(p) / omega_q(p).resonance / std::sqrt(2.0 * p.charging_energy / ej), 1.0, 1e-12);
  }
}

TEST(Model, TransitionFrequency) {
  ModelParams p = base();
  p.charging_energy = 3.0;
  EXPECT_NEAR(omega_n(p, p.mean_pairs), 0.0, 1e-15);
  EXPECT_NEAR(omega_n(p, p.mean_pairs + 1), 6.0, 1e-14);
  EXPECT_NEAR(omega_n(p, p.mean_pairs - 1), -6.0, 1e-14);
  for (int n = 0; n < 10; ++n) EXPECT_NEAR(omega_n(p, n + 1) - omega_n(p, n), 6.0, 1e-13);
}

TEST(Model, QuantumPhaseGapNearJosephson) {
  for (double nbar : {50.0, 400.0, 1e4}) {
    ModelParams p = base();
    p.mean_pairs = nbar;
    p.total_pairs = static_cast<std::int64_t>(4 * nbar);
    p.charging_energy = 10.0;
    p.tunneling = tunneling_for_josephson(1.0, nbar, p.total_pairs);
    EXPECT_NEAR(quantum_phase_gap(p) / p.josephson_energy(), 1.0, 0.02) << nbar;
  }
}

TEST(Model, QuantumPhaseWindowBounds) {
  ModelParams p = base();
  p.total_pairs = 20;
  p.mean_pairs = 3.0;
  const WindowedHamiltonian w = quantum_phase_window(p);
  EXPECT_EQ(w.first, 0);
  EXPECT_EQ(w.matrix.rows(), 17);
  p.mean_pairs = 10.0;
  p.total_pairs = 1000;
  const WindowedHamiltonian v = quantum_phase_window(p);
  EXPECT_EQ(v.first, 0);
  EXPECT_EQ(v.matrix.rows(), 36);
}
