#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"
#include "scb/rates.hpp"

namespace scb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvalidConfig = 2,
  kExitOracleDisagreement = 3,
  kExitStepSize = 4,
  kExitNoOscillation = 5,
};

/// Cross-check between the rate formulas and the master-equation oracles failed.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Streams {
  std::ostream& out;  // human-readable summary
  std::ostream& err;  // diagnostics
};

/// Model, bath and every RateReport field, in a fixed column order.
Row rate_row(const ModelParams& params, const BathSpec& bath, const RateReport& report);

Table freq_table(const RunConfig& config);

/// Rates for the configured model. With config.rates.oracle the table gains
/// oracle_* columns; disagreement above the tolerance is reported through
/// `disagreement` rather than thrown so the table can still be written.
Table rates_table(const RunConfig& config, bool* disagreement = nullptr);

/// Grid values of the sweep axis in ascending order.
std::vector<double> sweep_grid(const SweepInputs& sweep);

/// One row per grid point, ordered by grid index whatever the thread count.
Table sweep_table(const RunConfig& config, int threads);

/// SCB_THREADS, or the hardware concurrency when unset.
int threads_from_environment();

Table estimate_table(const RunConfig& config);

int cmd_freq(const RunConfig& config, Streams& io);
int cmd_rates(const RunConfig& config, Streams& io);
int cmd_evolve(const RunConfig& config, Streams& io);
int cmd_meanfield(const RunConfig& config, Streams& io);
int cmd_sweep(const RunConfig& config, Streams& io);
int cmd_estimate(const RunConfig& config, Streams& io);

/// Dispatches by name and maps exceptions to exit codes, printing
/// "error[<class>]: <message>" on the error stream.
int run_command(const std::string& name, const RunConfig& config, Streams& io);

}  // namespace scb::cli
