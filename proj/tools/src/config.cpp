#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "scb/format.hpp"

namespace scb::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

class Reader {
 public:
  Reader(const KeyValues& kv, EnergyConvention convention) : kv_(kv), convention_(convention) {}

  const std::string* raw(const std::string& key) {
    used_.push_back(key);
    const auto it = kv_.entries.find(key);
    return it == kv_.entries.end() ? nullptr : &it->second;
  }

  std::optional<double> number(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    const auto x = to_double(*v);
    if (!x) fail(key, "expected a finite number, got '" + *v + "'");
    return x;
  }

  // Energies accept a trailing ueV (or µeV) and are converted to s^-1.
  std::optional<double> energy(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    std::string_view text = trim(*v);
    bool microev = false;
    for (std::string_view suffix : {std::string_view("ueV"), std::string_view("µeV")}) {
      if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
        text = trim(text.substr(0, text.size() - suffix.size()));
        microev = true;
        break;
      }
    }
    const auto x = to_double(text);
    if (!x) fail(key, "expected an energy in s^-1 or ueV, got '" + *v + "'");
    return microev ? microev_to_rate(*x, convention_) : *x;
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    const std::string_view text = trim(*v);
    std::int64_t n = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec == std::errc() && ptr == text.data() + text.size()) return n;
    // Allow 1e12 style integers.
    const auto x = to_double(text);
    if (x && std::floor(*x) == *x && std::abs(*x) < 9.0e18) return static_cast<std::int64_t>(*x);
    fail(key, "expected an integer, got '" + *v + "'");
  }

  std::optional<std::string> text(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    return std::string(trim(*v));
  }

  std::optional<bool> flag(const std::string& key) {
    const auto v = text(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    fail(key, "expected true or false, got '" + *v + "'");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : kv_.entries) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        const auto o = kv_.origin.find(key);
        fail(key, "unknown key" + (o == kv_.origin.end() ? std::string() : " (" + o->second + ")"));
      }
    }
  }

  [[noreturn]] static void fail(const std::string& key, const std::string& why) { throw ConfigError(key, why); }

 private:
  const KeyValues& kv_;
  EnergyConvention convention_;
  std::vector<std::string> used_;
};

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError(key, why);
}

}  // namespace

KeyValues parse_key_values(std::string_view text, const std::string& source) {
  KeyValues kv;
  std::string section;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError(where, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2))) + ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected key = value");
    const std::string key = section + std::string(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || key.back() == '.') throw ConfigError(where, "empty key");
    kv.entries[key] = value;
    kv.origin[key] = where;
  }
  return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path.string());
}

void apply_override(KeyValues& kv, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("--set", "expected key=value, got '" + std::string(assignment) + "'");
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.empty()) throw ConfigError("--set", "empty key");
  kv.entries[key] = std::string(trim(assignment.substr(eq + 1)));
  kv.origin[key] = "--set";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "r") return SweepAxis::kR;
  if (name == "nbar" || name == "n_bar") return SweepAxis::kMeanPairs;
  if (name == "ec_over_ej" || name == "E_C/E_J") return SweepAxis::kChargingOverJosephson;
  if (name == "lambda") return SweepAxis::kCoupling;
  throw ConfigError("sweep.axis", "unknown axis '" + std::string(name) + "' (r, nbar, ec_over_ej, lambda)");
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kR: return "r";
    case SweepAxis::kMeanPairs: return "nbar";
    case SweepAxis::kChargingOverJosephson: return "ec_over_ej";
    case SweepAxis::kCoupling: return "lambda";
  }
  return "?";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  if (name == "both") return OutputFormat::kBoth;
  throw ConfigError("output.format", "expected csv, json or both, got '" + std::string(name) + "'");
}

RunConfig build_run_config(const KeyValues& kv) {
  RunConfig c;
  {
    Reader pre(kv, EnergyConvention::kRounded);
    if (const auto u = pre.text("units.energy")) {
      if (*u == "rounded") c.convention = EnergyConvention::kRounded;
      else if (*u == "exact") c.convention = EnergyConvention::kExact;
      else Reader::fail("units.energy", "expected rounded or exact, got '" + *u + "'");
    }
  }
  Reader r(kv, c.convention);
  r.text("units.energy");

  auto& m = c.model;
  m.charging_energy = r.energy("model.E_C");
  m.josephson_energy = r.energy("model.E_J");
  m.tunneling = r.energy("model.K");
  m.potential_left = r.energy("model.U_L");
  m.potential_right = r.energy("model.U_R");
  m.total_pairs = r.integer("model.N");
  m.mean_pairs = r.number("model.nbar");
  m.gate_charge = r.number("model.n_g");
  m.coupling = r.number("model.lambda");
  if (const auto cap = r.number("model.lambda_max")) {
    require(*cap > 0.0, "model.lambda_max", "must be positive");
    m.max_coupling = *cap;
  }

  auto& b = c.bath;
  if (const auto form = r.text("bath.form")) {
    require(*form == "exponential" || *form == "table", "bath.form", "expected exponential or table, got '" + *form + "'");
    b.form = *form;
  }
  b.g2 = r.number("bath.g2");
  b.tau_e = r.number("bath.tau_E");
  b.r = r.number("bath.r");
  b.table = r.text("bath.table");

  auto& e = c.evolve;
  e.t_final = r.number("evolve.t_final");
  if (e.t_final) require(*e.t_final > 0.0, "evolve.t_final", "must be positive");
  if (const auto dt = r.number("evolve.dt")) {
    require(*dt >= 0.0, "evolve.dt", "must be >= 0 (0 selects the default step)");
    e.dt = *dt;
  }
  if (const auto every = r.integer("evolve.record_every")) {
    require(*every >= 1 && *every <= 1000000000, "evolve.record_every", "must be >= 1");
    e.record_every = static_cast<int>(*every);
  }
  if (const auto state = r.text("evolve.state")) {
    require(*state == "fock" || *state == "coherent", "evolve.state", "expected fock or coherent, got '" + *state + "'");
    e.state = *state;
  }
  e.n = r.integer("evolve.n");
  if (const auto theta = r.number("evolve.theta")) e.theta = *theta;
  if (const auto h = r.text("evolve.hamiltonian")) {
    require(*h == "full" || *h == "number", "evolve.hamiltonian", "expected full or number, got '" + *h + "'");
    e.hamiltonian = *h;
  }

  auto& mf = c.meanfield;
  if (const auto p = r.number("meanfield.periods")) {
    require(*p >= 3.0, "meanfield.periods", "must be >= 3");
    mf.periods = *p;
  }
  mf.amplitude = r.number("meanfield.amplitude");
  if (mf.amplitude) require(*mf.amplitude > 0.0, "meanfield.amplitude", "must be positive");
  if (const auto dt = r.number("meanfield.dt")) {
    require(*dt >= 0.0, "meanfield.dt", "must be >= 0 (0 selects the default step)");
    mf.dt = *dt;
  }

  auto& s = c.sweep;
  if (const auto axis = r.text("sweep.axis")) s.axis = parse_axis(*axis);
  s.min = r.number("sweep.min");
  s.max = r.number("sweep.max");
  if (const auto pts = r.integer("sweep.points")) {
    require(*pts >= 1 && *pts <= 100000, "sweep.points", "must lie in [1, 100000]");
    s.points = static_cast<int>(*pts);
  }
  if (const auto scale = r.text("sweep.scale")) {
    require(*scale == "log" || *scale == "linear", "sweep.scale", "expected log or linear, got '" + *scale + "'");
    s.log_scale = *scale == "log";
  }

  if (const auto oracle = r.flag("rates.oracle")) c.rates.oracle = *oracle;
  if (const auto tol = r.number("rates.tolerance")) {
    require(*tol > 0.0, "rates.tolerance", "must be positive");
    c.rates.tolerance = *tol;
  }

  if (const auto dir = r.text("output.dir")) c.output.dir = *dir;
  if (const auto fmt = r.text("output.format")) c.output.format = parse_format(*fmt);

  r.reject_unknown();
  return c;
}

ModelParams resolve_model(const RunConfig& config, bool allow_zero_coupling) {
  const ModelInputs& m = config.model;
  require(m.charging_energy.has_value(), "model.E_C", "required");
  require(m.total_pairs.has_value(), "model.N", "required");
  require(m.mean_pairs.has_value(), "model.nbar", "required");

  ModelParams p;
  p.charging_energy = *m.charging_energy;
  p.total_pairs = *m.total_pairs;
  p.mean_pairs = *m.mean_pairs;
  p.potential_left = m.potential_left.value_or(0.0);
  p.potential_right = m.potential_right.value_or(0.0);
  require(p.charging_energy > 0.0, "model.E_C", "must be positive");
  require(p.total_pairs >= 1, "model.N", "must be >= 1");
  require(p.mean_pairs > 0.0 && p.mean_pairs < static_cast<double>(p.total_pairs), "model.nbar", "must lie in (0, N)");

  if (m.tunneling) {
    require(*m.tunneling >= 0.0, "model.K", "must be >= 0");
    p.tunneling = *m.tunneling;
    if (m.josephson_energy) {
      const double ej = derive_josephson_energy(p.tunneling, p.mean_pairs, p.total_pairs);
      require(std::abs(ej - *m.josephson_energy) <= 1e-9 * std::max(std::abs(ej), std::abs(*m.josephson_energy)),
              "model.E_J", "inconsistent with model.K (K sqrt(nbar (N - nbar)) = " + format_g17(ej) + ")");
    }
  } else if (m.josephson_energy) {
    require(*m.josephson_energy >= 0.0, "model.E_J", "must be >= 0");
    p.tunneling = tunneling_for_josephson(*m.josephson_energy, p.mean_pairs, p.total_pairs);
  } else {
    throw ConfigError("model.E_J", "required (or model.K)");
  }

  const bool have_potentials = m.potential_left.has_value() && m.potential_right.has_value();
  if (m.gate_charge) {
    p.gate_charge = *m.gate_charge;
    if (have_potentials) {
      const double derived = derive_gate_charge(p.potential_left, p.potential_right, p.charging_energy, p.mean_pairs);
      require(std::abs(derived - p.gate_charge) <= 1e-9 * std::max(1.0, std::abs(derived)), "model.n_g",
              "inconsistent with model.U_L, model.U_R (which give " + format_g17(derived) + ")");
    }
  } else if (have_potentials) {
    p.gate_charge = derive_gate_charge(p.potential_left, p.potential_right, p.charging_energy, p.mean_pairs);
  } else {
    p.gate_charge = 0.5;
  }

  if (m.coupling) {
    p.coupling = *m.coupling;
  } else if (allow_zero_coupling) {
    p.coupling = 0.0;
  } else {
    throw ConfigError("model.lambda", "required");
  }
  try {
    p.validate(m.max_coupling, allow_zero_coupling);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw ConfigError(what.substr(0, colon), colon == std::string::npos ? what : what.substr(colon + 2));
  }
  return p;
}

double resolve_tau_e(const RunConfig& config, double charging_energy) {
  const BathInputs& b = config.bath;
  if (b.tau_e && b.r) {
    const double from_r = b.r.value() / (2.0 * charging_energy);
    require(std::abs(from_r - *b.tau_e) <= 1e-9 * *b.tau_e, "bath.r", "inconsistent with bath.tau_E");
  }
  if (b.tau_e) {
    require(*b.tau_e > 0.0, "bath.tau_E", "must be positive");
    return *b.tau_e;
  }
  if (b.r) {
    require(*b.r > 0.0, "bath.r", "must be positive (tau_E > 0)");
    return *b.r / (2.0 * charging_energy);
  }
  throw ConfigError("bath.tau_E", "required (or bath.r)");
}

BathSpec resolve_bath(const RunConfig& config, const ModelParams& params) {
  const BathInputs& b = config.bath;
  if (b.form == "table") {
    require(b.table.has_value(), "bath.table", "required when bath.form = table");
    try {
      return load_correlation_csv(*b.table);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("bath.table", e.what());
    }
  }
  require(b.g2.has_value(), "bath.g2", "required");
  require(*b.g2 > 0.0, "bath.g2", "must be positive");
  return BathSpec::exponential(*b.g2, resolve_tau_e(config, params.charging_energy));
}

}  // namespace scb::cli
