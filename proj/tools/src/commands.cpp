#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <thread>

#include "scb/format.hpp"
#include "scb/lindblad.hpp"
#include "scb/meanfield.hpp"
#include "scb/model.hpp"
#include "scb/sector.hpp"

namespace scb::cli {

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::int64_t nearest_index(const ModelParams& p) {
  return std::clamp<std::int64_t>(std::llround(p.mean_pairs), 0, p.total_pairs);
}

void finish_tables(const RunConfig& config, Streams& io, const std::string& stem, const Table& table) {
  if (!config.output.dir) return;
  for (const auto& path : write_table(*config.output.dir, stem, table, config.output.format)) {
    io.out << "wrote " << path.string() << '\n';
  }
}

// For freq only E_C and E_J matter; without N and nbar the pair (N = 2,
// nbar = 1, K = E_J) carries E_J through josephson_energy().
ModelParams frequency_params(const RunConfig& config) {
  const ModelInputs& m = config.model;
  if (m.total_pairs && m.mean_pairs) return resolve_model(config, true);
  if (!m.charging_energy) throw ConfigError("model.E_C", "required");
  if (!(*m.charging_energy > 0.0)) throw ConfigError("model.E_C", "must be positive");
  if (!m.josephson_energy) throw ConfigError("model.E_J", "required (or model.K with model.N and model.nbar)");
  if (!(*m.josephson_energy >= 0.0)) throw ConfigError("model.E_J", "must be >= 0");
  ModelParams p;
  p.charging_energy = *m.charging_energy;
  p.total_pairs = 2;
  p.mean_pairs = 1.0;
  p.tunneling = *m.josephson_energy;
  p.gate_charge = m.gate_charge.value_or(0.5);
  return p;
}

struct OracleColumns {
  double fock_rel = 0.0;
  double coherent_rel = 0.0;
  double superop_rel = 0.0;
  double commutator = 0.0;
};

double superoperator_gamma(const CMatrix& s, const PureState& psi) {
  const CMatrix p = psi.projector();
  const Eigen::Map<const CVector> vec(p.data(), p.size());
  const CVector lvec = s * vec;
  const Eigen::Map<const CMatrix> lp(lvec.data(), p.rows(), p.cols());
  return -(psi.amplitudes().adjoint() * lp * psi.amplitudes())(0, 0).real();
}

OracleColumns rate_oracles(const ModelParams& p, const BathSpec& bath, const RateReport& report) {
  const SectorBasis basis = build_basis(p.total_pairs);
  const Generator gen(h0_full(basis, p), make_dissipator(basis, p, bath));
  const CMatrix s = superoperator(gen);
  const PureState fock = fock_state(basis, nearest_index(p));
  const PureState coherent = coherent_coefficients(basis, p.mean_pairs, 0.0);
  const GammaEstimate gf = numeric_gamma(fock, gen);
  const GammaEstimate gc = numeric_gamma(coherent, gen);
  OracleColumns o;
  o.fock_rel = relative(gf.direct, report.gamma_fock);
  o.coherent_rel = relative(gc.direct, report.gamma_coherent_exact);
  o.superop_rel = std::max(relative(superoperator_gamma(s, fock), gf.direct),
                           relative(superoperator_gamma(s, coherent), gc.direct));
  o.commutator = std::max(gf.commutator, gc.commutator);
  return o;
}

}  // namespace

Row rate_row(const ModelParams& p, const BathSpec& bath, const RateReport& r) {
  return Row{
      {"E_C", p.charging_energy},
      {"E_J", p.josephson_energy()},
      {"K", p.tunneling},
      {"N", p.total_pairs},
      {"nbar", p.mean_pairs},
      {"n_g", p.gate_charge},
      {"lambda", p.coupling},
      {"bath", std::string(bath.is_exponential() ? "exponential" : "table")},
      {"g2", bath.g2()},
      {"tau_E", bath.tau_e()},
      {"r", r.r},
      {"z", r.z},
      {"f", r.f_value},
      {"gamma_fock", r.gamma_fock},
      {"gamma_coherent_exact", r.gamma_coherent_exact},
      {"gamma_coherent_approx", r.gamma_coherent_approx},
      {"gamma_coherent_gauss", r.gamma_coherent_gauss},
      {"gamma_coherent_closed", r.gamma_coherent_closed},
      {"gamma_fock_leading", r.gamma_fock_leading},
      {"gamma_coherent_leading", r.gamma_coherent_leading},
      {"ratio", r.ratio},
      {"ratio_exact", r.ratio_exact},
      {"tau_fock", r.tau_fock},
      {"tau_coherent", r.tau_coherent},
      {"estimate_fock_over_EJ", r.estimate_fock_over_EJ},
      {"estimate_coh_over_EJ", r.estimate_coh_over_EJ},
  };
}

Table freq_table(const RunConfig& config) {
  const ModelParams p = frequency_params(config);
  const QubitFrequency q = omega_q(p);
  const double wc = omega_c(p);
  const double ej = p.josephson_energy();
  const TwoLevelHamiltonian two = effective_two_level(p);
  Table t{"freq", 1, {}};
  t.rows.push_back(Row{
      {"E_C", p.charging_energy},
      {"E_J", ej},
      {"n_g", p.gate_charge},
      {"omega_q", q.exact},
      {"omega_q_resonance", q.resonance},
      {"omega_c", wc},
      {"omega_c_over_omega_q_resonance", wc / q.resonance},
      {"sqrt_2EC_over_EJ", std::sqrt(2.0 * p.charging_energy / ej)},
      {"near_resonance", std::int64_t{two.near_resonance ? 1 : 0}},
  });
  return t;
}

Table rates_table(const RunConfig& config, bool* disagreement) {
  const ModelParams p = resolve_model(config);
  const BathSpec bath = resolve_bath(config, p);
  const RateReport report = rate_report(p, bath);
  Row row = rate_row(p, bath, report);
  bool bad = false;
  if (config.rates.oracle) {
    if (p.total_pairs > 50) throw ConfigError("rates.oracle", "needs model.N <= 50, got " + std::to_string(p.total_pairs));
    const OracleColumns o = rate_oracles(p, bath, report);
    row.push_back({"oracle_fock_rel", o.fock_rel});
    row.push_back({"oracle_coherent_rel", o.coherent_rel});
    row.push_back({"oracle_superop_rel", o.superop_rel});
    row.push_back({"oracle_commutator", o.commutator});
    const double tol = config.rates.tolerance;
    bad = !(o.fock_rel <= tol && o.coherent_rel <= tol && o.superop_rel <= tol);
  }
  if (disagreement) *disagreement = bad;
  Table t{"rates", 1, {}};
  t.rows.push_back(std::move(row));
  return t;
}

std::vector<double> sweep_grid(const SweepInputs& s) {
  if (!s.axis) throw ConfigError("sweep.axis", "required (r, nbar, ec_over_ej, lambda)");
  if (!s.min) throw ConfigError("sweep.min", "required");
  if (!s.max) throw ConfigError("sweep.max", "required");
  if (s.points < 1) throw ConfigError("sweep.points", "required (>= 1)");
  const double lo = *s.min, hi = *s.max;
  if (!(lo <= hi)) throw ConfigError("sweep.max", "must be >= sweep.min");
  if (s.points == 1 && lo != hi) throw ConfigError("sweep.points", "a single point needs sweep.min == sweep.max");
  if (s.log_scale && !(lo > 0.0)) throw ConfigError("sweep.min", "must be positive on a log scale");
  std::vector<double> grid(static_cast<std::size_t>(s.points));
  for (int i = 0; i < s.points; ++i) {
    const double u = s.points == 1 ? 0.0 : static_cast<double>(i) / (s.points - 1);
    grid[static_cast<std::size_t>(i)] =
        s.log_scale ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo))) : lo + u * (hi - lo);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

int threads_from_environment() {
  const char* env = std::getenv("SCB_THREADS");
  if (!env || !*env) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw ConfigError("SCB_THREADS", "expected an integer in [1, 1024], got '" + std::string(env) + "'");
  return static_cast<int>(n);
}

Table sweep_table(const RunConfig& config, int threads) {
  const std::vector<double> grid = sweep_grid(config.sweep);
  const SweepAxis axis = *config.sweep.axis;

  // Resolve every point up front so configuration errors surface before any work.
  double base_ej = 0.0;
  if (axis == SweepAxis::kChargingOverJosephson) base_ej = resolve_model(config).josephson_energy();
  struct Point {
    ModelParams params;
    BathSpec bath;
  };
  std::vector<Point> points;
  points.reserve(grid.size());
  for (double v : grid) {
    RunConfig c = config;
    switch (axis) {
      case SweepAxis::kR:
        if (c.bath.form != "exponential") throw ConfigError("sweep.axis", "r sweeps need bath.form = exponential");
        c.bath.tau_e.reset();
        c.bath.r = v;
        break;
      case SweepAxis::kMeanPairs:
        c.model.mean_pairs = v;
        break;
      case SweepAxis::kChargingOverJosephson:
        if (!(base_ej > 0.0)) throw ConfigError("model.E_J", "must be positive for an ec_over_ej sweep");
        c.model.charging_energy = v * base_ej;
        if (!c.model.josephson_energy) c.model.josephson_energy = base_ej;
        c.model.tunneling.reset();
        break;
      case SweepAxis::kCoupling:
        c.model.coupling = v;
        break;
    }
    ModelParams p = resolve_model(c);
    BathSpec b = resolve_bath(c, p);
    points.push_back(Point{p, std::move(b)});
  }

  std::vector<Row> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size() && !failed; i = next++) {
      try {
        const Point& pt = points[i];
        Row row{{"index", static_cast<std::int64_t>(i)}, {"axis", std::string(axis_name(axis))}, {"value", grid[i]}};
        for (Field& f : rate_row(pt.params, pt.bath, rate_report(pt.params, pt.bath))) row.push_back(std::move(f));
        rows[i] = std::move(row);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, static_cast<int>(points.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  Table t{"sweep", 1, std::move(rows)};
  return t;
}

Table estimate_table(const RunConfig& config) {
  RunConfig c = config;
  const ModelInputs& m = config.model;
  if (!m.mean_pairs) throw ConfigError("model.nbar", "required");
  if (!m.total_pairs) {
    // Coherent-state regime: many more pairs in the sector than on the island.
    const double n = std::round(1e4 * *m.mean_pairs);
    if (!(n < 9e18)) throw ConfigError("model.N", "required for nbar above 9e14");
    c.model.total_pairs = static_cast<std::int64_t>(n);
  }
  if (!m.coupling) c.model.coupling = 0.01;  // cancels after calibration
  const ModelParams p = resolve_model(c);
  const double tau = resolve_tau_e(c, p.charging_energy);
  const RateReport r = estimate_report(p, BathSpec::exponential(1.0, tau));
  const double ej = p.josephson_energy();
  const double oom_fock = r.estimate_fock_over_EJ;
  const double oom_coh = r.estimate_coh_over_EJ;

  Table t{"estimate", 1, {}};
  auto add = [&](const char* name, double value, double leading, double oom, double reference) {
    t.rows.push_back(Row{{"quantity", std::string(name)},
                         {"value", value},
                         {"leading_order", leading},
                         {"order_of_magnitude", oom},
                         {"reference", reference}});
  };
  add("gamma_fock_over_EJ", r.gamma_fock / ej, r.gamma_fock_leading / ej, oom_fock, 0.1);
  add("gamma_coherent_over_EJ", r.gamma_coherent_exact / ej, r.gamma_coherent_leading / ej, oom_coh, 1e-5);
  add("tau_fock", r.tau_fock, 1.0 / r.gamma_fock_leading, 1.0 / (oom_fock * ej), 1e-9);
  add("tau_coherent", r.tau_coherent, 1.0 / r.gamma_coherent_leading, 1.0 / (oom_coh * ej), 1e-5);
  add("tau_coherent_over_tau_fock", r.tau_coherent / r.tau_fock, r.gamma_fock_leading / r.gamma_coherent_leading,
      oom_fock / oom_coh, 1e4);
  return t;
}

int cmd_freq(const RunConfig& config, Streams& io) {
  const Table t = freq_table(config);
  const Row& row = t.rows.front();
  for (const Field& f : row) {
    io.out << f.name << " = ";
    if (const auto* d = std::get_if<double>(&f.value)) io.out << g6(*d);
    else if (const auto* i = std::get_if<std::int64_t>(&f.value)) io.out << *i;
    io.out << '\n';
  }
  finish_tables(config, io, "freq", t);
  return kExitOk;
}

int cmd_rates(const RunConfig& config, Streams& io) {
  bool disagreement = false;
  const Table t = rates_table(config, &disagreement);
  for (const Field& f : t.rows.front()) {
    if (const auto* d = std::get_if<double>(&f.value)) io.out << f.name << " = " << g6(*d) << '\n';
  }
  finish_tables(config, io, "rates", t);
  if (disagreement) {
    throw OracleError("rate formulas disagree with the master-equation oracle beyond " + g6(config.rates.tolerance));
  }
  return kExitOk;
}

int cmd_evolve(const RunConfig& config, Streams& io) {
  const ModelParams p = resolve_model(config, true);
  const bool have_bath = config.bath.g2 || config.bath.table;
  // With lambda = 0 the dissipator vanishes; any bath will do.
  const BathSpec bath = have_bath || p.coupling > 0.0 ? resolve_bath(config, p)
                                                      : BathSpec::exponential(1.0, 1.0 / (2.0 * p.charging_energy));
  const SectorBasis basis = build_basis(p.total_pairs);
  const Operator h = config.evolve.hamiltonian == "number" ? h0_number_rep(basis, p) : h0_full(basis, p);
  const Generator gen(h, make_dissipator(basis, p, bath));

  double analytic = 0.0;
  std::optional<PureState> psi;
  if (config.evolve.state == "fock") {
    const std::int64_t n = config.evolve.n.value_or(nearest_index(p));
    if (n < 0 || n > p.total_pairs) throw ConfigError("evolve.n", "must lie in [0, N]");
    psi.emplace(fock_state(basis, n));
    analytic = gamma_fock(n, p, bath);
  } else {
    psi.emplace(coherent_coefficients(basis, p.mean_pairs, config.evolve.theta));
    analytic = gamma_coherent_exact(p, bath);
  }

  double t_final = 0.0;
  if (config.evolve.t_final) {
    t_final = *config.evolve.t_final;
  } else if (analytic > 0.0) {
    t_final = 0.1 / analytic;
  } else {
    const double wq = omega_q(p).exact;
    if (!(wq > 0.0)) throw ConfigError("evolve.t_final", "required when no decay or oscillation sets a time scale");
    t_final = 2.0 * std::numbers::pi / wq;
  }

  // The early-time fit needs a few dozen samples inside t <= 0.1 / Gamma.
  const double window = analytic > 0.0 ? 0.1 / analytic : t_final;
  EvolveOptions opt;
  opt.dt = config.evolve.dt;
  if (opt.dt <= 0.0 && analytic > 0.0) opt.dt = std::min(kDefaultStepNorm / gen.norm_estimate(), window / 40.0);
  opt.record_every = config.evolve.record_every;
  opt.reference = psi->amplitudes();
  const Trajectory tr = evolve(DensityMatrix::from_pure(*psi), gen, t_final, opt);
  const GammaEstimate g = numeric_gamma(*psi, gen);

  // Through-origin fit of -ln S(t) over the window t <= 0.1 / Gamma.
  double sxy = 0.0, sxx = 0.0, min_survival = 1.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    min_survival = std::min(min_survival, tr.survival[i]);
    if (tr.times[i] > window * (1.0 + 1e-12) || !(tr.survival[i] > 0.0)) continue;
    sxy += tr.times[i] * -std::log(tr.survival[i]);
    sxx += tr.times[i] * tr.times[i];
  }
  const double fitted = sxx > 0.0 ? sxy / sxx : std::nan("");

  Table t{"evolve", 1, {}};
  t.rows.push_back(Row{{"state", config.evolve.state},
                       {"N", p.total_pairs},
                       {"nbar", p.mean_pairs},
                       {"lambda", p.coupling},
                       {"t_final", t_final},
                       {"dt", tr.step},
                       {"points", static_cast<std::int64_t>(tr.times.size())},
                       {"gamma_analytic", analytic},
                       {"gamma_direct", g.direct},
                       {"gamma_finite_difference", g.finite_difference},
                       {"gamma_fit", fitted},
                       {"relative_deviation", analytic > 0.0 ? std::abs(g.finite_difference - analytic) / analytic
                                                             : std::abs(g.finite_difference)},
                       {"min_survival", min_survival},
                       {"consistent", std::int64_t{g.consistent ? 1 : 0}}});

  io.out << "Gamma_numeric (finite difference) = " << g6(g.finite_difference) << '\n';
  io.out << "Gamma_analytic = " << g6(analytic) << '\n';
  if (analytic > 0.0) {
    io.out << "relative deviation = " << g6(std::abs(g.finite_difference - analytic) / analytic) << '\n';
    io.out << "Gamma_fit (-ln S over t <= 0.1/Gamma) = " << g6(fitted) << '\n';
  }
  io.out << "min survival = " << g6(min_survival) << " over t = " << g6(t_final) << '\n';
  if (!g.consistent) io.err << "warning: direct and finite-difference rates disagree; the step may be too coarse\n";

  if (config.output.dir) {
    ensure_directory(*config.output.dir);
    const auto path = *config.output.dir / "trajectory.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output.dir", "cannot write " + path.string());
    write_trajectory_csv(f, tr);
    io.out << "wrote " << path.string() << '\n';
  }
  finish_tables(config, io, "evolve", t);
  return kExitOk;
}

int cmd_meanfield(const RunConfig& config, Streams& io) {
  const ModelParams p = resolve_model(config, true);
  const double amplitude = config.meanfield.amplitude.value_or(default_oscillation_amplitude(p));
  GpOptions opt;
  opt.dt = config.meanfield.dt;
  const OscillationRun run = run_small_oscillation(p, amplitude, config.meanfield.periods, opt);

  double drift = 0.0, energy = 0.0;
  const double e0 = run.trajectory.energy.front();
  for (std::size_t i = 0; i < run.trajectory.times.size(); ++i) {
    drift = std::max(drift, run.trajectory.norm_drift[i]);
    energy = std::max(energy, std::abs(run.trajectory.energy[i] - e0) / std::max(std::abs(e0), 1e-300));
  }
  Table t{"meanfield-report", 1, {}};
  t.rows.push_back(Row{{"E_C", p.charging_energy},
                       {"E_J", p.josephson_energy()},
                       {"N", p.total_pairs},
                       {"nbar", p.mean_pairs},
                       {"n_g", p.gate_charge},
                       {"amplitude", amplitude},
                       {"periods", config.meanfield.periods},
                       {"dt", run.trajectory.step},
                       {"omega_measured", run.frequency.zero_crossing},
                       {"omega_spectral", run.frequency.spectral_peak},
                       {"omega_c", run.omega_c},
                       {"relative_deviation", run.relative_deviation},
                       {"crossings", static_cast<std::int64_t>(run.frequency.crossings)},
                       {"max_norm_drift", drift},
                       {"max_energy_drift", energy}});

  io.out << "omega measured (zero crossings) = " << g6(run.frequency.zero_crossing) << '\n';
  io.out << "omega measured (spectral peak) = " << g6(run.frequency.spectral_peak) << '\n';
  io.out << "omega_c = sqrt(2 E_C E_J) = " << g6(run.omega_c) << '\n';
  io.out << "relative deviation = " << g6(run.relative_deviation) << '\n';
  io.out << "max norm drift = " << g6(drift) << '\n';

  if (config.output.dir) {
    ensure_directory(*config.output.dir);
    const auto path = *config.output.dir / "meanfield.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output.dir", "cannot write " + path.string());
    write_gp_csv(f, run.trajectory, run.gp_params);
    io.out << "wrote " << path.string() << '\n';
  }
  finish_tables(config, io, "meanfield_report", t);
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, Streams& io) {
  const Table t = sweep_table(config, threads_from_environment());
  io.out << "sweep over " << axis_name(*config.sweep.axis) << ": " << t.rows.size() << " points\n";
  io.out << "value,z,ratio,ratio_exact\n";
  auto field = [](const Row& row, const std::string& name) {
    for (const Field& f : row) {
      if (f.name == name) return std::get<double>(f.value);
    }
    return std::nan("");
  };
  PlotSeries closed{"closed form 1/f(z)", "#1f77b4", {}, {}, true};
  PlotSeries exact{"exact sums", "#d62728", {}, {}, true};
  PlotSeries asym{"sqrt(2/pi) z", "#555555", {}, {}, false};
  for (const Row& row : t.rows) {
    const double z = field(row, "z");
    io.out << g6(field(row, "value")) << ',' << g6(z) << ',' << g6(field(row, "ratio")) << ','
           << g6(field(row, "ratio_exact")) << '\n';
    closed.x.push_back(z);
    closed.y.push_back(field(row, "ratio"));
    exact.x.push_back(z);
    exact.y.push_back(field(row, "ratio_exact"));
  }
  std::vector<double> zs = closed.x;
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  for (double z : zs) {
    asym.x.push_back(z);
    asym.y.push_back(std::sqrt(2.0 / std::numbers::pi) * z);
  }
  finish_tables(config, io, "sweep", t);
  if (config.output.dir) {
    const auto path = *config.output.dir / "sweep.svg";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output.dir", "cannot write " + path.string());
    write_loglog_svg(f, "Fock / coherent decay-rate ratio", "z = sqrt(nbar) r", "Gamma_Fock / Gamma_coherent",
                     {closed, exact, asym});
    io.out << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_estimate(const RunConfig& config, Streams& io) {
  const Table t = estimate_table(config);
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %14s %14s %14s %12s\n", "quantity", "value", "leading", "E_J/E_C form",
                "reference");
  io.out << line;
  for (const Row& row : t.rows) {
    std::snprintf(line, sizeof line, "%-28s %14.4g %14.4g %14.4g %12.0e\n", std::get<std::string>(row[0].value).c_str(),
                  std::get<double>(row[1].value), std::get<double>(row[2].value), std::get<double>(row[3].value),
                  std::get<double>(row[4].value));
    io.out << line;
  }
  io.out << "reference column: E_J/E_C = 1/10, r = 1, nbar = 1e8, E_J = 1e10 s^-1\n";
  finish_tables(config, io, "estimate", t);
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& config, Streams& io) {
  try {
    if (name == "freq") return cmd_freq(config, io);
    if (name == "rates") return cmd_rates(config, io);
    if (name == "evolve") return cmd_evolve(config, io);
    if (name == "meanfield") return cmd_meanfield(config, io);
    if (name == "sweep") return cmd_sweep(config, io);
    if (name == "estimate") return cmd_estimate(config, io);
    io.err << "error[usage]: unknown command '" << name << "'\n";
    return kExitInvalidConfig;
  } catch (const ConfigError& e) {
    io.err << "error[config]: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const OracleError& e) {
    io.err << "error[oracle]: " << e.what() << '\n';
    return kExitOracleDisagreement;
  } catch (const StepSizeError& e) {
    io.err << "error[step]: " << e.what() << '\n';
    return kExitStepSize;
  } catch (const NormDriftError& e) {
    io.err << "error[step]: " << e.what() << '\n';
    return kExitStepSize;
  } catch (const NoOscillationError& e) {
    io.err << "error[no-oscillation]: " << e.what()
           << " (E_J = 0 or a vanishing amplitude leaves n_L flat)\n";
    return kExitNoOscillation;
  } catch (const std::invalid_argument& e) {
    io.err << "error[config]: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    io.err << "error[internal]: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace scb::cli
