#pragma once

#include "sclink/config.hpp"
#include "sclink/filter_io.hpp"
#include "sclink/metrics.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sclink {

/// Received aggregate waveform, scaled so that a noiseless link returns the
/// transmitted symbols with unit gain.
struct LinkRun {
  SymbolFrame transmitted;  // central WDM channel
  Waveform received;
  double pump_power_w = 0.0;
  PropagationStats propagation;
};

/// Transmitter, fiber and laser phase noise for one frame. Every random
/// source draws from a seed derived from `seed`.
LinkRun simulate_link(const LinkConfig& config, double launch_power_dbm, std::uint64_t seed, Index n_symbols);

/// Regenerates the central channel's transmitted frame for `seed`.
SymbolFrame transmitted_frame(const LinkConfig& config, std::uint64_t seed, Index n_symbols);

/// Demux, dispersion compensation, matched filtering and alignment of a
/// received aggregate waveform against the transmitted frame. The result
/// carries the known symbols and pilot mask.
SymbolFrame receive(const LinkConfig& config, const Waveform& received, const SymbolFrame& transmitted);

/// Trains NLPC on `training`, then PPNC on the NLPC output.
JscprFilters train_jscpr(const LinkConfig& config, const SymbolFrame& training);

struct ExperimentRow {
  double launch_power_dbm = 0.0;
  Scheme scheme = Scheme::MPR;
  std::uint64_t seed = 0;
  SnrReport snr;
  Complexity cost;
  Index train_symbols = 0;
  Index test_symbols = 0;
  double wall_time_s = 0.0;
  std::string status = "ok";  // diagnostic when the row failed
  std::optional<double> cpr_bandwidth;

  bool ok() const { return status == "ok"; }
};

/// One launch power, all configured schemes. Never throws for stage errors;
/// failures are recorded per row.
std::vector<ExperimentRow> run_launch_power(const LinkConfig& config, double launch_power_dbm);

/// Sweeps every configured launch power, up to `workers` points at a time.
/// Rows come back in configuration order regardless of scheduling.
std::vector<ExperimentRow> run_experiment(const LinkConfig& config, int workers = 1);

/// Worker count from SCLINK_WORKERS, default 1.
int workers_from_environment();

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, const LinkConfig& config);

/// Per-stage and total real multiplications per complex symbol.
void complexity_report(std::ostream& os, const LinkConfig& config);

/// Launch power and SNR at the peak of a sampled SNR curve, refined by a
/// parabola through the best grid point and its neighbours.
struct Optimum {
  double launch_power_dbm = 0.0;
  double snr_db = 0.0;
};
Optimum optimum_snr(const std::vector<double>& launch_powers_dbm, const std::vector<double>& snr_db);

}  // namespace sclink
