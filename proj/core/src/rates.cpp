#include "scb/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "scb/quadrature.hpp"
#include "scb/sector.hpp"

namespace scb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool at_resonance(const ModelParams& params) { return std::abs(params.gate_charge - 0.5) <= 1e-12; }

void require_closed_form(const ModelParams& params, const BathSpec& bath, const char* what) {
  if (!bath.is_exponential()) throw std::invalid_argument(std::string(what) + " requires the exponential bath");
  if (!at_resonance(params)) throw std::invalid_argument(std::string(what) + " requires n_g = 1/2");
}

double pair_weight(std::int64_t n, std::int64_t total) {
  return static_cast<double>(n + 1) * static_cast<double>(total - n);
}

double coupling_sq(const ModelParams& params) { return params.coupling * params.coupling; }

double z_of(const ModelParams& params, const BathSpec& bath) {
  return std::sqrt(params.mean_pairs) * ratio_r(params.charging_energy, bath.tau_e());
}

}  // namespace

double gamma_fock(std::int64_t n, const ModelParams& params, const BathSpec& bath) {
  const auto total = params.total_pairs;
  if (n < 0 || n > total) {
    throw std::out_of_range("Fock index " + std::to_string(n) + " outside [0, " + std::to_string(total) + "]");
  }
  double acc = 0.0;
  if (n < total) {
    acc += pair_weight(n, total) * spectral_function(bath, omega_n(params, static_cast<double>(n))).emission;
  }
  if (n > 0) {
    acc += pair_weight(n - 1, total) *
           spectral_function(bath, omega_n(params, static_cast<double>(n - 1))).absorption;
  }
  return coupling_sq(params) * acc;
}

double gamma_fock_mean(const ModelParams& params, const BathSpec& bath) {
  const auto n = static_cast<std::int64_t>(std::llround(params.mean_pairs));
  return gamma_fock(std::clamp<std::int64_t>(n, 0, params.total_pairs), params, bath);
}

double gamma_coherent_exact(const ModelParams& params, const BathSpec& bath) {
  const auto total = params.total_pairs;
  const BinomialWindow w = binomial_window(total, params.mean_pairs);
  const std::int64_t lo = std::max<std::int64_t>(0, w.first - 1);
  const std::int64_t hi = std::min<std::int64_t>(total - 1, w.last());
  double acc = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double p0 = w.at(n);
    const double p1 = w.at(n + 1);
    if (p0 == 0.0 && p1 == 0.0) continue;
    const SpectralPair s = spectral_function(bath, omega_n(params, static_cast<double>(n)));
    acc += pair_weight(n, total) * (p0 * (1.0 - p1) * s.emission + p1 * (1.0 - p0) * s.absorption);
  }
  return coupling_sq(params) * acc;
}

double gamma_coherent_approx(const ModelParams& params, const BathSpec& bath) {
  const auto total = params.total_pairs;
  const BinomialWindow w = binomial_window(total, params.mean_pairs);
  const std::int64_t hi = std::min<std::int64_t>(total - 1, w.last());
  double acc = 0.0;
  for (std::int64_t n = w.first; n <= hi; ++n) {
    const SpectralPair s = spectral_function(bath, omega_n(params, static_cast<double>(n)));
    acc += pair_weight(n, total) * w.at(n) * (s.emission + s.absorption);
  }
  return coupling_sq(params) * acc;
}

double gamma_coherent_gauss(const ModelParams& params, const BathSpec& bath) {
  require_closed_form(params, bath, "gamma_coherent_gauss");
  const double nbar = params.mean_pairs;
  const double total = static_cast<double>(params.total_pairs);
  const auto k_max = static_cast<std::int64_t>(std::ceil(12.0 * std::sqrt(nbar)));
  const auto k_lo = std::max<std::int64_t>(-k_max, static_cast<std::int64_t>(std::ceil(-nbar)));
  const auto k_hi = std::min<std::int64_t>(k_max, static_cast<std::int64_t>(std::floor(total - nbar)));
  double acc = 0.0;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const double kd = static_cast<double>(k);
    acc += (nbar + kd + 1.0) * (total - nbar - kd) * 2.0 * h_k(bath, params.charging_energy, k) *
           gaussian_weight(nbar, kd);
  }
  return coupling_sq(params) * acc;
}

double f_integral(double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("f(z) needs finite z >= 0");
  const double z2 = z * z;
  const double norm = 2.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [z2, norm](double y) { return norm * std::exp(-0.5 * y * y) / (1.0 + z2 * y * y); };
  std::vector<double> points{0.0};
  if (z > 10.0) {
    // The Lorentzian has width 1/z; resolve it on geometrically spaced panels.
    for (double y = 1.0 / z; y < 12.0; y *= 4.0) points.push_back(y);
  } else {
    points.push_back(1.0);
  }
  points.push_back(12.0);
  return integrate_adaptive(integrand, points, 1e-12).value;
}

double gamma_coherent_closed(const ModelParams& params, const BathSpec& bath) {
  require_closed_form(params, bath, "gamma_coherent_closed");
  return 2.0 * gamma_fock_leading(params, bath) * f_integral(z_of(params, bath));
}

double gamma_fock_leading(const ModelParams& params, const BathSpec& bath) {
  const double nbar = params.mean_pairs;
  return coupling_sq(params) * 2.0 * bath.g2() * bath.tau_e() * nbar *
         (static_cast<double>(params.total_pairs) - nbar);
}

double gamma_coherent_leading(const ModelParams& params, const BathSpec& bath) {
  return gamma_fock_leading(params, bath) * f_integral(z_of(params, bath));
}

RateRatio rate_ratio(const ModelParams& params, const BathSpec& bath) {
  require_closed_form(params, bath, "rate_ratio");
  return RateRatio{1.0 / f_integral(z_of(params, bath)),
                   gamma_fock_mean(params, bath) / gamma_coherent_exact(params, bath)};
}

RateReport rate_report(const ModelParams& params, const BathSpec& bath) {
  RateReport rep;
  rep.r = ratio_r(params.charging_energy, bath.tau_e());
  rep.z = std::sqrt(params.mean_pairs) * rep.r;
  rep.gamma_fock = gamma_fock_mean(params, bath);
  rep.gamma_coherent_exact = gamma_coherent_exact(params, bath);
  rep.gamma_coherent_approx = gamma_coherent_approx(params, bath);
  rep.f_value = f_integral(rep.z);
  rep.ratio = 1.0 / rep.f_value;
  rep.ratio_exact = rep.gamma_fock / rep.gamma_coherent_exact;
  if (bath.is_exponential() && at_resonance(params)) {
    rep.gamma_coherent_gauss = gamma_coherent_gauss(params, bath);
    rep.gamma_coherent_closed = gamma_coherent_closed(params, bath);
  } else {
    rep.gamma_coherent_gauss = kNaN;
    rep.gamma_coherent_closed = kNaN;
  }
  rep.tau_fock = 1.0 / rep.gamma_fock;
  rep.tau_coherent = 1.0 / rep.gamma_coherent_exact;
  const double ej_over_ec = params.josephson_energy() / params.charging_energy;
  rep.estimate_fock_over_EJ = ej_over_ec * rep.r;
  rep.estimate_coh_over_EJ = ej_over_ec / std::sqrt(params.mean_pairs);
  rep.gamma_fock_leading = gamma_fock_leading(params, bath);
  rep.gamma_coherent_leading = rep.gamma_fock_leading * rep.f_value;
  return rep;
}

BathSpec calibrated_bath(const ModelParams& params, double tau_e) {
  const double nbar = params.mean_pairs;
  const double spread = nbar * (static_cast<double>(params.total_pairs) - nbar);
  if (!(params.coupling > 0.0)) throw std::invalid_argument("model.lambda must be positive for calibration");
  if (!(spread > 0.0)) throw std::invalid_argument("model.nbar must lie strictly inside (0, N)");
  const double ej = params.josephson_energy();
  if (!(ej > 0.0)) throw std::invalid_argument("model.K must be positive for calibration");
  return BathSpec::exponential(ej * ej / (coupling_sq(params) * spread), tau_e);
}

RateReport estimate_report(const ModelParams& params, const BathSpec& bath) {
  return rate_report(params, calibrated_bath(params, bath.tau_e()));
}

}  // namespace scb
