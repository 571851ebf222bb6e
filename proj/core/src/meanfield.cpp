#include "scb/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scb/format.hpp"

namespace scb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct GpState {
  Complex l;
  Complex r;
};

GpState axpy(const GpState& s, double h, const GpDerivative& d) { return {s.l + h * d.d_left, s.r + h * d.d_right}; }

GpDerivative rhs(const GpState& s, const ModelParams& p) {
  return gp_rhs(OrderParameter{s.l, s.r}, p);
}

PhasePoint h_velocity(const PhasePoint& q, const ModelParams& p) {
  return PhasePoint{-2.0 * p.charging_energy * (q.n_left - p.mean_pairs - p.gate_charge),
                    p.josephson_energy() * std::sin(q.theta)};
}

double signal_power(const std::vector<double>& t, const std::vector<double>& x, double omega) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    re += x[j] * std::cos(omega * t[j]);
    im -= x[j] * std::sin(omega * t[j]);
  }
  return re * re + im * im;
}

}  // namespace

OrderParameter make_order_parameter(Complex psi_left, Complex psi_right) {
  OrderParameter psi{psi_left, psi_right};
  if (!(std::abs(psi.norm() - 1.0) <= 1e-10)) {
    throw std::invalid_argument("order parameter norm " + format_g17(psi.norm()) + " differs from 1");
  }
  return psi;
}

PhasePoint to_phase_point(const OrderParameter& psi, std::int64_t total_pairs) {
  return PhasePoint{std::arg(psi.psi_left) - std::arg(psi.psi_right),
                    static_cast<double>(total_pairs) * std::norm(psi.psi_left)};
}

OrderParameter from_phase_point(const PhasePoint& point, std::int64_t total_pairs) {
  const double total = static_cast<double>(total_pairs);
  if (!(total > 0.0) || !(point.n_left >= 0.0) || !(point.n_left <= total)) {
    throw std::invalid_argument("phase point n_L must lie in [0, N]");
  }
  const double fraction = point.n_left / total;
  return OrderParameter{std::polar(std::sqrt(fraction), point.theta), Complex(std::sqrt(1.0 - fraction), 0.0)};
}

GpDerivative gp_rhs(const OrderParameter& psi, const ModelParams& params) {
  const Complex minus_i(0.0, -1.0);
  const double total = static_cast<double>(params.total_pairs);
  const double self = params.potential_left + total * params.charging_energy * std::norm(psi.psi_left);
  return GpDerivative{minus_i * (self * psi.psi_left - params.tunneling * psi.psi_right),
                      minus_i * (params.potential_right * psi.psi_right - params.tunneling * psi.psi_left)};
}

double gp_energy(const PhasePoint& q, const ModelParams& p) {
  const double n_right = static_cast<double>(p.total_pairs) - q.n_left;
  return 0.5 * p.charging_energy * q.n_left * q.n_left + (p.potential_left - p.potential_right) * q.n_left -
         2.0 * p.tunneling * std::sqrt(std::max(0.0, q.n_left * n_right)) * std::cos(q.theta);
}

double gp_energy(const OrderParameter& psi, const ModelParams& params) {
  // Written on the amplitudes directly so no phase unwrapping is involved.
  const double total = static_cast<double>(params.total_pairs);
  const double n_left = total * std::norm(psi.psi_left);
  const double hop = (std::conj(psi.psi_left) * psi.psi_right).real();
  return 0.5 * params.charging_energy * n_left * n_left +
         (params.potential_left - params.potential_right) * n_left - 2.0 * params.tunneling * total * hop;
}

PhasePoint gp_phase_velocity(const PhasePoint& q, const ModelParams& p) {
  const double total = static_cast<double>(p.total_pairs);
  const double n_right = total - q.n_left;
  const double root = std::sqrt(q.n_left * n_right);
  const double d_root = (total - 2.0 * q.n_left) / root;  // d/dn_L of 2 sqrt(n_L n_R)
  const double theta_dot =
      -(p.charging_energy * q.n_left + p.potential_left - p.potential_right - p.tunneling * d_root * std::cos(q.theta));
  return PhasePoint{theta_dot, 2.0 * p.tunneling * root * std::sin(q.theta)};
}

ModelParams aligned_gp_params(const ModelParams& params) {
  ModelParams p = params;
  const double total = static_cast<double>(params.total_pairs);
  const double n_eq = params.mean_pairs + params.gate_charge;
  if (!(n_eq > 0.0) || !(n_eq < total)) throw std::invalid_argument("nbar + n_g must lie strictly inside (0, N)");
  p.potential_right = 0.0;
  p.potential_left =
      -params.charging_energy * n_eq + params.tunneling * (total - 2.0 * n_eq) / std::sqrt(n_eq * (total - n_eq));
  return p;
}

double hamiltonian_function(const PhasePoint& point, const ModelParams& params) {
  const double x = point.n_left - params.mean_pairs - params.gate_charge;
  return params.charging_energy * x * x - params.josephson_energy() * std::cos(point.theta);
}

PhasePoint hamiltonian_coordinates(const OrderParameter& psi, const ModelParams& params) {
  const PhasePoint q = to_phase_point(psi, params.total_pairs);
  const double n_eq = params.mean_pairs + params.gate_charge;
  return PhasePoint{q.theta, n_eq + 0.5 * (q.n_left - n_eq)};
}

double default_gp_step(const OrderParameter& psi, const ModelParams& params) {
  const double total = static_cast<double>(params.total_pairs);
  // The self-interaction couples psi_L to its conjugate with strength N E_C |psi_L|^2, so the
  // stiffness is |U_L| + 2 N E_C |psi_L|^2 even when the net phase rotation nearly cancels.
  const double left_rate = std::abs(params.potential_left) +
                           2.0 * total * params.charging_energy * std::norm(psi.psi_left) + params.tunneling;
  const double right_rate = std::abs(params.potential_right) + params.tunneling;
  const double fastest = std::max({omega_c(params), left_rate, right_rate});
  if (!(fastest > 0.0)) throw std::invalid_argument("GP dynamics has no time scale; give meanfield.dt");
  return kTwoPi / (400.0 * fastest);
}

GpTrajectory gp_evolve(const OrderParameter& psi0, const ModelParams& params, double t_final,
                       const GpOptions& options) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be finite and >= 0");
  if (options.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  make_order_parameter(psi0.psi_left, psi0.psi_right);
  const double nominal = options.dt > 0.0 ? options.dt : default_gp_step(psi0, params);
  const auto steps = static_cast<std::int64_t>(std::ceil(t_final / nominal - 1e-9));
  const double dt = steps > 0 ? t_final / static_cast<double>(steps) : nominal;

  GpTrajectory traj;
  traj.step = dt;
  GpState s{psi0.psi_left, psi0.psi_right};
  auto record = [&](double t) {
    const OrderParameter psi{s.l, s.r};
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.norm_drift.push_back(std::abs(psi.norm() - 1.0));
    traj.energy.push_back(gp_energy(psi, params));
  };
  record(0.0);
  for (std::int64_t k = 1; k <= steps; ++k) {
    const GpDerivative k1 = rhs(s, params);
    const GpDerivative k2 = rhs(axpy(s, 0.5 * dt, k1), params);
    const GpDerivative k3 = rhs(axpy(s, 0.5 * dt, k2), params);
    const GpDerivative k4 = rhs(axpy(s, dt, k3), params);
    s.l += dt / 6.0 * (k1.d_left + 2.0 * k2.d_left + 2.0 * k3.d_left + k4.d_left);
    s.r += dt / 6.0 * (k1.d_right + 2.0 * k2.d_right + 2.0 * k3.d_right + k4.d_right);
    const double drift = std::abs(std::norm(s.l) + std::norm(s.r) - 1.0);
    const double t = static_cast<double>(k) * dt;
    if (!(drift <= options.max_norm_drift)) {
      throw NormDriftError("GP norm drift " + format_g17(drift) + " at t = " + format_g17(t) +
                           " exceeds " + format_g17(options.max_norm_drift) + "; reduce dt");
    }
    if (k % options.record_every == 0 || k == steps) record(t);
  }
  return traj;
}

PhaseTrajectory phase_evolve(const PhasePoint& start, const ModelParams& params, double t_final, double dt,
                             int record_every) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be finite and >= 0");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  double nominal = dt;
  if (!(nominal > 0.0)) {
    const double w = omega_c(params);
    if (!(w > 0.0)) throw std::invalid_argument("phase flow needs E_J > 0 for the default step");
    nominal = kTwoPi / (400.0 * w);
  }
  const auto steps = static_cast<std::int64_t>(std::ceil(t_final / nominal - 1e-9));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : nominal;

  auto add = [](const PhasePoint& q, double c, const PhasePoint& v) {
    return PhasePoint{q.theta + c * v.theta, q.n_left + c * v.n_left};
  };
  PhaseTrajectory traj;
  traj.step = h;
  PhasePoint q = start;
  traj.times.push_back(0.0);
  traj.points.push_back(q);
  traj.energy.push_back(hamiltonian_function(q, params));
  for (std::int64_t k = 1; k <= steps; ++k) {
    const PhasePoint k1 = h_velocity(q, params);
    const PhasePoint k2 = h_velocity(add(q, 0.5 * h, k1), params);
    const PhasePoint k3 = h_velocity(add(q, 0.5 * h, k2), params);
    const PhasePoint k4 = h_velocity(add(q, h, k3), params);
    q.theta += h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    q.n_left += h / 6.0 * (k1.n_left + 2.0 * k2.n_left + 2.0 * k3.n_left + k4.n_left);
    if (k % record_every == 0 || k == steps) {
      traj.times.push_back(static_cast<double>(k) * h);
      traj.points.push_back(q);
      traj.energy.push_back(hamiltonian_function(q, params));
    }
  }
  return traj;
}

FrequencyEstimate extract_frequency(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 8) {
    throw NoOscillationError("need at least 8 samples of equal length to measure a frequency");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi - *lo > 1e-12 * std::max(1.0, std::abs(mean)))) {
    throw NoOscillationError("signal is flat (peak-to-peak " + format_g17(*hi - *lo) + ")");
  }

  std::vector<double> x(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) x[j] = values[j] - mean;
  std::vector<double> crossings;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    if ((x[j] < 0.0 && x[j + 1] >= 0.0) || (x[j] >= 0.0 && x[j + 1] < 0.0)) {
      const double w = x[j] / (x[j] - x[j + 1]);
      crossings.push_back(times[j] + w * (times[j + 1] - times[j]));
    }
  }
  if (crossings.size() < 3) {
    throw NoOscillationError("only " + std::to_string(crossings.size()) + " zero crossings detected");
  }
  FrequencyEstimate est;
  est.crossings = static_cast<int>(crossings.size());
  est.zero_crossing =
      std::numbers::pi * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());

  // Hann-windowed DFT on at most ~8k samples.
  const std::size_t stride = std::max<std::size_t>(1, x.size() / 8192);
  std::vector<double> ts;
  std::vector<double> xs;
  const double span = times.back() - times.front();
  for (std::size_t j = 0; j < x.size(); j += stride) {
    const double u = (times[j] - times.front()) / span;
    ts.push_back(times[j]);
    xs.push_back(x[j] * 0.5 * (1.0 - std::cos(kTwoPi * u)));
  }
  const int grid = 241;
  const double w_lo = 0.7 * est.zero_crossing;
  const double w_step = 0.6 * est.zero_crossing / (grid - 1);
  int best = 0;
  double best_power = -1.0;
  for (int i = 0; i < grid; ++i) {
    const double p = signal_power(ts, xs, w_lo + w_step * i);
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  double a = w_lo + w_step * std::max(0, best - 1);
  double b = w_lo + w_step * std::min(grid - 1, best + 1);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double pc = signal_power(ts, xs, c);
  double pd = signal_power(ts, xs, d);
  for (int it = 0; it < 60; ++it) {
    if (pc > pd) {
      b = d;
      d = c;
      pd = pc;
      c = b - g * (b - a);
      pc = signal_power(ts, xs, c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + g * (b - a);
      pd = signal_power(ts, xs, d);
    }
  }
  est.spectral_peak = 0.5 * (a + b);
  return est;
}

double default_oscillation_amplitude(const ModelParams& params) {
  return 0.01 * std::sqrt(params.josephson_energy() / (2.0 * params.charging_energy));
}

OscillationRun run_small_oscillation(const ModelParams& params, double amplitude, double periods,
                                     const GpOptions& options) {
  if (!(periods > 0.0)) throw std::invalid_argument("periods must be positive");
  OscillationRun run;
  run.gp_params = aligned_gp_params(params);
  run.omega_c = omega_c(params);
  const double n_eq = params.mean_pairs + params.gate_charge;
  const OrderParameter psi0 = from_phase_point(PhasePoint{0.0, n_eq + 2.0 * amplitude}, params.total_pairs);
  const double time_scale = run.omega_c > 0.0 ? run.omega_c : params.charging_energy;
  const double period = kTwoPi / time_scale;
  GpOptions opts = options;
  if (opts.record_every == 1) {
    const double dt = opts.dt > 0.0 ? opts.dt : default_gp_step(psi0, run.gp_params);
    opts.record_every = static_cast<int>(std::clamp(std::floor(period / dt / 256.0), 1.0, 1e9));
  }
  run.trajectory = gp_evolve(psi0, run.gp_params, periods * period, opts);

  std::vector<double> n_left;
  n_left.reserve(run.trajectory.states.size());
  for (const OrderParameter& psi : run.trajectory.states) {
    n_left.push_back(static_cast<double>(params.total_pairs) * std::norm(psi.psi_left));
  }
  run.frequency = extract_frequency(run.trajectory.times, n_left);
  run.relative_deviation = std::abs(run.frequency.zero_crossing - run.omega_c) / run.omega_c;
  return run;
}

void write_gp_csv(std::ostream& out, const GpTrajectory& trajectory, const ModelParams& params) {
  out << "# scb-meanfield v1\n";
  out << "t,re_psi_l,im_psi_l,re_psi_r,im_psi_r,theta,n_l,hamiltonian,e_gp\n";
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const OrderParameter& psi = trajectory.states[i];
    const PhasePoint q = to_phase_point(psi, params.total_pairs);
    out << format_g17(trajectory.times[i]) << ',' << format_g17(psi.psi_left.real()) << ','
        << format_g17(psi.psi_left.imag()) << ',' << format_g17(psi.psi_right.real()) << ','
        << format_g17(psi.psi_right.imag()) << ',' << format_g17(q.theta) << ',' << format_g17(q.n_left) << ','
        << format_g17(hamiltonian_function(hamiltonian_coordinates(psi, params), params)) << ',' << format_g17(trajectory.energy[i]) << '\n';
  }
}

}  // namespace scb
