#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::vector<std::string> overrides;
  bool oracle = false;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace scb::cli;

  CLI::App app{"Decay rates and dynamics of a Cooper pair box coupled to an environment"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for every command");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"freq", "Qubit and charge-oscillation frequencies"},
      {"rates", "Fock and coherent-state decay rates"},
      {"evolve", "Integrate the master equation and compare the measured decay rate"},
      {"meanfield", "Two-mode mean-field oscillation and its frequency"},
      {"sweep", "Rate ratio over a parameter grid, with an SVG plot"},
      {"estimate", "Order-of-magnitude decay times"},
  };
  Common common;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config_path, "Key-value configuration file");
    sub->add_option("--out", common.out_dir, "Output directory for CSV/JSON/SVG files");
    sub->add_option("--format", common.format, "Machine-readable output: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--set", common.overrides, "Override a configuration key (key=value), repeatable");
    if (name == "rates") sub->add_flag("--oracle", common.oracle, "Cross-check against the master equation (N <= 50)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  Streams io{std::cout, std::cerr};
  RunConfig config;
  try {
    KeyValues kv;
    if (!common.config_path.empty()) kv = load_key_values(common.config_path);
    for (const std::string& o : common.overrides) apply_override(kv, o);
    if (!common.out_dir.empty()) apply_override(kv, "output.dir=" + common.out_dir);
    if (!common.format.empty()) apply_override(kv, "output.format=" + common.format);
    if (common.oracle) apply_override(kv, "rates.oracle=true");
    config = build_run_config(kv);
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return run_command(app.get_subcommands().front()->get_name(), config, io);
}
