#pragma once

#include <cstdint>

#include "scb/bath.hpp"
#include "scb/model.hpp"

namespace scb {

/// Mean pair count below which the simplified coherent sum is unreliable.
inline constexpr double kApproxMinMean = 25.0;

/// Initial decay rate of the Fock state |n>:
/// lambda^2 [(n+1)(N-n) h(omega_n) + n(N-n+1) kappa(omega_{n-1})].
double gamma_fock(std::int64_t n, const ModelParams& params, const BathSpec& bath);

/// Fock rate at the integer nearest nbar.
double gamma_fock_mean(const ModelParams& params, const BathSpec& bath);

/// Exact coherent-state rate. The sum runs over the binomial window, so the
/// neglected terms carry less than 1e-12 of the probability mass.
double gamma_coherent_exact(const ModelParams& params, const BathSpec& bath);

/// Same sum with the (1 - |C|^2) factors dropped.
double gamma_coherent_approx(const ModelParams& params, const BathSpec& bath);

/// Central-limit form of the simplified sum with |k| <= ceil(12 sqrt(nbar)).
/// Carries h_k + kappa_k = 2 h_k. Requires the exponential bath and n_g = 1/2.
double gamma_coherent_gauss(const ModelParams& params, const BathSpec& bath);

/// f(z) = (1/sqrt(2 pi)) int e^{-y^2/2} / (1 + z^2 y^2) dy, absolute accuracy 1e-10.
double f_integral(double z);

/// 2 lambda^2 2 g^2 tau_E nbar (N - nbar) f(sqrt(nbar) r). Requires the
/// exponential bath and n_g = 1/2.
double gamma_coherent_closed(const ModelParams& params, const BathSpec& bath);

/// Order-of-magnitude forms with a single spectral weight per channel:
/// lambda^2 2 g^2 tau_E nbar (N - nbar) and that times f(sqrt(nbar) r).
double gamma_fock_leading(const ModelParams& params, const BathSpec& bath);
double gamma_coherent_leading(const ModelParams& params, const BathSpec& bath);

struct RateRatio {
  double closed_form;  // 1 / f(sqrt(nbar) r)
  double exact_sum;    // gamma_fock(nbar) / gamma_coherent_exact
};
RateRatio rate_ratio(const ModelParams& params, const BathSpec& bath);

struct RateReport {
  double gamma_fock = 0.0;
  double gamma_coherent_exact = 0.0;
  double gamma_coherent_approx = 0.0;
  double gamma_coherent_gauss = 0.0;   // NaN off resonance or for tabulated baths
  double gamma_coherent_closed = 0.0;  // NaN off resonance or for tabulated baths
  double ratio = 0.0;                  // closed form 1 / f(z)
  double ratio_exact = 0.0;
  double f_value = 0.0;
  double z = 0.0;  // sqrt(nbar) r
  double r = 0.0;
  double tau_fock = 0.0;
  double tau_coherent = 0.0;
  double estimate_fock_over_EJ = 0.0;  // (E_J / E_C) r
  double estimate_coh_over_EJ = 0.0;   // (E_J / E_C) / sqrt(nbar)
  double gamma_fock_leading = 0.0;
  double gamma_coherent_leading = 0.0;
};

/// Every rate for the bath as given.
RateReport rate_report(const ModelParams& params, const BathSpec& bath);

/// Exponential bath with tau_E kept and g^2 fixed by lambda^2 g^2 nbar (N - nbar) = E_J^2.
BathSpec calibrated_bath(const ModelParams& params, double tau_e);

/// rate_report on the calibrated bath, so lambda g drops out.
RateReport estimate_report(const ModelParams& params, const BathSpec& bath);

}  // namespace scb
