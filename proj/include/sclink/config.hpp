#pragma once

#include "sclink/fiber.hpp"
#include "sclink/txchain.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sclink {

enum class Scheme { MPR, CPR, NLPC, PPNC, JSCPR };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Everything needed to run one experiment. Loaded from an INI-style text
/// file: `[section]` headers, `key = value` lines, `#` comments, lists as
/// comma-separated values. Unknown keys are rejected.
struct LinkConfig {
  // [constellation]
  double entropy_bits = 5.0;
  // [subcarriers]
  SubcarrierPlan plan;
  // [pilots]
  PilotSchedule pilots;
  // [wdm]
  int wdm_channels = 1;
  double wdm_spacing_hz = 200e9;
  // [fiber], [raman], [steps]
  bool fiber_enabled = true;
  FiberParams fiber;
  RamanParams raman;
  StepConfig steps;
  double target_rx_dbm = -15.0;
  bool ase_enabled = true;
  // [laser]
  double linewidth_hz = 0.0;  // each of TX and LO
  // [dsp]
  Index n_c = 250;
  Index n_fft = 2048;
  Index n_d = 2;
  double ridge = 1e-6;
  double ppnc_ridge = 1e-6;
  bool ppnc_real_taps = false;
  bool ppnc_energy_weighted = true;
  Index nlpc_detrend_window = 0;
  std::vector<double> cpr_bandwidth_grid = {2e-4, 5e-4, 1e-3, 2e-3, 3e-3, 5e-3};
  // [run]
  Index train_symbols = 1 << 16;
  Index test_symbols = 1 << 15;
  std::uint64_t train_seed = 1;
  std::uint64_t test_seed = 2;
  std::vector<Scheme> schemes = {Scheme::MPR, Scheme::NLPC, Scheme::PPNC, Scheme::JSCPR};
  std::vector<double> launch_powers_dbm = {12.0};
  bool report_wall_time = false;

  /// Throws Error describing the first inconsistency.
  void validate() const;
};

LinkConfig parse_config(const std::string& text);
LinkConfig load_config(const std::filesystem::path& path);

}  // namespace sclink
