#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace scb {

/// Sampled environment correlations on t >= 0, starting at t = 0. Both
/// correlations are real and extended evenly to t < 0.
struct TabulatedCorrelation {
  std::vector<double> times;     // seconds, ascending, times[0] == 0
  std::vector<double> forward;   // <B(t) B^dagger>
  std::vector<double> backward;  // <B^dagger(t) B>
};

/// Environment seen by the box through its two-point correlations.
class BathSpec {
 public:
  enum class Form { kExponential, kTabulated };

  /// g^2 exp(-|t| / tau_E) for both orderings.
  static BathSpec exponential(double g2, double tau_e);

  /// Throws std::invalid_argument when the grid is malformed or the
  /// correlations have not decayed below 1e-6 |C(0)| at the last sample.
  static BathSpec tabulated(TabulatedCorrelation table);

  Form form() const { return form_; }
  bool is_exponential() const { return form_ == Form::kExponential; }
  /// Correlation strength C(0).
  double g2() const { return g2_; }
  /// Correlation time; for tables, the integral of |C(t)| / C(0) over t >= 0.
  double tau_e() const { return tau_e_; }
  const TabulatedCorrelation& table() const { return table_; }

 private:
  BathSpec() = default;

  Form form_ = Form::kExponential;
  double g2_ = 0.0;
  double tau_e_ = 0.0;
  TabulatedCorrelation table_;
};

/// <B(t) B^dagger> at time t (seconds). Tables interpolate linearly and vanish
/// past the last sample.
double correlation(const BathSpec& bath, double t);

struct SpectralPair {
  double emission;    // h(w) = int dt e^{-i w t} <B(t) B^dagger>
  double absorption;  // kappa(w) = int dt e^{+i w t} <B^dagger(t) B>
};

/// Fourier transforms of the correlations at angular frequency omega.
SpectralPair spectral_function(const BathSpec& bath, double omega);

/// r = tau_E / tau_C = 2 E_C tau_E
double ratio_r(double charging_energy, double tau_e);

/// Closed form h_k = 2 g^2 tau_E / (1 + (r k)^2) at resonance.
/// Throws std::invalid_argument for tabulated baths.
double h_k(const BathSpec& bath, double charging_energy, std::int64_t k);

/// Two- or three-column CSV (t, C_forward[, C_backward]) with a header row.
/// A missing third column reuses the forward correlation.
BathSpec load_correlation_csv(const std::filesystem::path& path);

}  // namespace scb
