#include "scb/bath.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace scb {

namespace {

using cd = std::complex<double>;

// phi0 = int_0^1 (1-u) e^{i theta u} du, phi1 = int_0^1 u e^{i theta u} du
void linear_phase_weights(double theta, cd& phi0, cd& phi1) {
  if (std::abs(theta) < 0.5) {
    cd term(1.0, 0.0);  // (i theta)^k / k!
    phi0 = phi1 = 0.0;
    for (int k = 0; k < 30; ++k) {
      phi0 += term / static_cast<double>((k + 1) * (k + 2));
      phi1 += term / static_cast<double>(k + 2);
      term *= cd(0.0, theta) / static_cast<double>(k + 1);
    }
    return;
  }
  const cd e = std::exp(cd(0.0, theta));
  const cd i_theta(0.0, theta);
  const cd mean = (e - 1.0) / i_theta;
  phi1 = e / i_theta + (e - 1.0) / (theta * theta);
  phi0 = mean - phi1;
}

// 2 int_0^T C(t) cos(w t) dt for piecewise-linear C.
double even_cosine_transform(const std::vector<double>& t, const std::vector<double>& c, double omega) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    cd phi0, phi1;
    linear_phase_weights(omega * h, phi0, phi1);
    const cd seg = h * std::exp(cd(0.0, omega * t[i])) * (c[i] * phi0 + c[i + 1] * phi1);
    acc += seg.real();
  }
  return 2.0 * acc;
}

double interpolate(const std::vector<double>& t, const std::vector<double>& c, double at) {
  const double x = std::abs(at);
  if (x > t.back()) return 0.0;
  auto it = std::upper_bound(t.begin(), t.end(), x);
  if (it == t.end()) return c.back();
  const auto hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - t[lo]) / (t[hi] - t[lo]);
  return (1.0 - w) * c[lo] + w * c[hi];
}

void check_decay(const std::vector<double>& c, const char* which) {
  if (std::abs(c.back()) >= 1e-6 * std::abs(c.front())) {
    throw std::invalid_argument(std::string("tabulated ") + which +
                                " correlation has not decayed below 1e-6 C(0) at the last sample");
  }
}

}  // namespace

BathSpec BathSpec::exponential(double g2, double tau_e) {
  if (!(g2 > 0.0) || !std::isfinite(g2)) throw std::invalid_argument("bath.g2 must be positive");
  if (!(tau_e > 0.0) || !std::isfinite(tau_e)) throw std::invalid_argument("bath.tau_E must be positive");
  BathSpec b;
  b.form_ = Form::kExponential;
  b.g2_ = g2;
  b.tau_e_ = tau_e;
  return b;
}

BathSpec BathSpec::tabulated(TabulatedCorrelation table) {
  const auto n = table.times.size();
  if (n < 2 || table.forward.size() != n || table.backward.size() != n) {
    throw std::invalid_argument("tabulated correlation needs >= 2 rows of equal length");
  }
  if (table.times.front() != 0.0) throw std::invalid_argument("tabulated correlation must start at t = 0");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(table.times[i] > table.times[i - 1])) {
      throw std::invalid_argument("tabulated correlation times must be strictly ascending");
    }
  }
  if (!(table.forward.front() > 0.0)) throw std::invalid_argument("tabulated correlation needs C(0) > 0");
  check_decay(table.forward, "forward");
  check_decay(table.backward, "backward");

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    area += 0.5 * (std::abs(table.forward[i]) + std::abs(table.forward[i + 1])) * (table.times[i + 1] - table.times[i]);
  }
  BathSpec b;
  b.form_ = Form::kTabulated;
  b.g2_ = table.forward.front();
  b.tau_e_ = area / b.g2_;
  b.table_ = std::move(table);
  return b;
}

double correlation(const BathSpec& bath, double t) {
  if (bath.is_exponential()) return bath.g2() * std::exp(-std::abs(t) / bath.tau_e());
  return interpolate(bath.table().times, bath.table().forward, t);
}

SpectralPair spectral_function(const BathSpec& bath, double omega) {
  if (bath.is_exponential()) {
    const double x = omega * bath.tau_e();
    const double value = 2.0 * bath.g2() * bath.tau_e() / (1.0 + x * x);
    return SpectralPair{value, value};
  }
  const auto& tab = bath.table();
  return SpectralPair{even_cosine_transform(tab.times, tab.forward, omega),
                      even_cosine_transform(tab.times, tab.backward, omega)};
}

double ratio_r(double charging_energy, double tau_e) {
  if (!(charging_energy > 0.0) || !(tau_e > 0.0)) throw std::invalid_argument("E_C and tau_E must be positive");
  return 2.0 * charging_energy * tau_e;
}

double h_k(const BathSpec& bath, double charging_energy, std::int64_t k) {
  if (!bath.is_exponential()) throw std::invalid_argument("h_k requires the exponential bath");
  const double rk = ratio_r(charging_energy, bath.tau_e()) * static_cast<double>(k);
  return 2.0 * bath.g2() * bath.tau_e() / (1.0 + rk * rk);
}

BathSpec load_correlation_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open correlation table " + path.string());
  TabulatedCorrelation table;
  std::string line;
  bool header_seen = false;
  std::size_t columns = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> values;
    double v = 0.0;
    while (row >> v) values.push_back(v);
    if (!row.eof() || values.size() < 2 || values.size() > 3) {
      throw std::invalid_argument("malformed correlation row at line " + std::to_string(lineno));
    }
    if (columns == 0) columns = values.size();
    if (values.size() != columns) {
      throw std::invalid_argument("inconsistent column count at line " + std::to_string(lineno));
    }
    table.times.push_back(values[0]);
    table.forward.push_back(values[1]);
    table.backward.push_back(values.size() == 3 ? values[2] : values[1]);
  }
  return BathSpec::tabulated(std::move(table));
}

}  // namespace scb
