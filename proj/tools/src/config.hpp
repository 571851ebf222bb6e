#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scb/bath.hpp"
#include "scb/model.hpp"
#include "scb/units.hpp"

namespace scb::cli {

/// Bad or missing configuration. what() reads "<field>: <reason>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Flat dotted keys. Later assignments replace earlier ones.
struct KeyValues {
  std::map<std::string, std::string> entries;
  std::map<std::string, std::string> origin;  // "file:line" or "--set"
};

/// key = value lines; '#' starts a comment, "[section]" prefixes following keys.
KeyValues parse_key_values(std::string_view text, const std::string& source);
KeyValues load_key_values(const std::filesystem::path& path);

/// "key=value" from the command line; overrides whatever the file set.
void apply_override(KeyValues& kv, std::string_view assignment);

struct ModelInputs {
  std::optional<double> charging_energy, josephson_energy, tunneling;
  std::optional<double> potential_left, potential_right;
  std::optional<std::int64_t> total_pairs;
  std::optional<double> mean_pairs, gate_charge, coupling;
  double max_coupling = 0.1;
};

struct BathInputs {
  std::string form = "exponential";  // exponential | table
  std::optional<double> g2, tau_e, r;
  std::optional<std::string> table;
};

struct EvolveInputs {
  std::optional<double> t_final;
  double dt = 0.0;
  int record_every = 1;
  std::string state = "fock";  // fock | coherent
  std::optional<std::int64_t> n;  // Fock index, default round(nbar)
  double theta = 0.0;             // coherent-state phase
  std::string hamiltonian = "full";  // full | number
};

struct MeanfieldInputs {
  double periods = 100.0;
  std::optional<double> amplitude;
  double dt = 0.0;
};

enum class SweepAxis { kR, kMeanPairs, kChargingOverJosephson, kCoupling };

struct SweepInputs {
  std::optional<SweepAxis> axis;
  std::optional<double> min, max;
  int points = 0;
  bool log_scale = true;
};

struct RatesInputs {
  bool oracle = false;
  double tolerance = 1e-8;
};

enum class OutputFormat { kCsv, kJson, kBoth };

struct OutputInputs {
  std::optional<std::filesystem::path> dir;
  OutputFormat format = OutputFormat::kBoth;
};

struct RunConfig {
  EnergyConvention convention = EnergyConvention::kRounded;
  ModelInputs model;
  BathInputs bath;
  EvolveInputs evolve;
  MeanfieldInputs meanfield;
  SweepInputs sweep;
  RatesInputs rates;
  OutputInputs output;
};

/// Typed view of the key-value map. Unknown keys and malformed values throw.
RunConfig build_run_config(const KeyValues& kv);

SweepAxis parse_axis(std::string_view name);
std::string_view axis_name(SweepAxis axis);
OutputFormat parse_format(std::string_view name);

/// ModelParams from the inputs. E_C, N and nbar are required, and either E_J
/// or K. n_g comes from model.n_g, else from U_L, U_R, else 1/2. lambda is
/// required unless allow_zero_coupling, in which case it defaults to 0.
ModelParams resolve_model(const RunConfig& config, bool allow_zero_coupling = false);

/// Exponential bath from g2 and tau_E (or r = 2 E_C tau_E), or a table file.
BathSpec resolve_bath(const RunConfig& config, const ModelParams& params);

/// tau_E from bath.tau_E or bath.r.
double resolve_tau_e(const RunConfig& config, double charging_energy);

}  // namespace scb::cli
