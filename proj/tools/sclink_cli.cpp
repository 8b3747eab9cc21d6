#include "sclink/experiment.hpp"
#include "sclink/filter_io.hpp"
#include "sclink/jscpr.hpp"
#include "sclink/waveform_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace sclink;

namespace {

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::trunc);
  require(os.good(), "cannot open " + path + " for writing");
  fn(os);
  require(os.good(), "write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subcarrier link simulator with joint-subcarrier carrier phase recovery"};
  app.require_subcommand(1);

  std::string config_path, out_path, filters_path, in_path, waveform_path;
  std::optional<double> launch_power;

  auto* simulate = app.add_subcommand("simulate", "Run the first launch power of a config and print CSV rows");
  simulate->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_path, "CSV output (default stdout)");
  simulate->add_option("--export-waveform", waveform_path, "Also write the received test waveform (WVFM1)");

  auto* sweep = app.add_subcommand("sweep", "Run every launch power x scheme; SCLINK_WORKERS sets parallelism");
  sweep->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "CSV output (default stdout)");

  auto* cost = app.add_subcommand("complexity", "Print real multiplications per symbol for the DSP stages");
  cost->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* train = app.add_subcommand("train", "Train NLPC and PPNC filters on the training frame");
  train->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out_path, "Filter file to write")->required();
  train->add_option("--launch-power", launch_power, "Launch power in dBm (default: first in config)");

  auto* apply = app.add_subcommand("apply", "Run trained filters on an exported received waveform");
  apply->add_option("--filters", filters_path, "Filter file from `train`")->required()->check(CLI::ExistingFile);
  apply->add_option("--in", in_path, "Received waveform (WVFM1)")->required()->check(CLI::ExistingFile);
  apply->add_option("--out", out_path, "CSV output")->required();
  apply->add_option("--config", config_path, "Config the waveform was simulated with")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const LinkConfig config = load_config(config_path);

    if (*simulate) {
      const double p = config.launch_powers_dbm.front();
      const auto rows = run_launch_power(config, p);
      with_output(out_path, [&](std::ostream& os) { write_csv(os, rows, config); });
      if (!waveform_path.empty())
        write_waveform(waveform_path, simulate_link(config, p, config.test_seed, config.test_symbols).received);
      for (const auto& r : rows)
        if (!r.ok()) std::cerr << "row failed: " << r.status << '\n';
    } else if (*sweep) {
      const auto rows = run_experiment(config, workers_from_environment());
      with_output(out_path, [&](std::ostream& os) { write_csv(os, rows, config); });
      for (const auto& r : rows)
        if (!r.ok()) std::cerr << "row failed: " << r.status << '\n';
    } else if (*cost) {
      complexity_report(std::cout, config);
    } else if (*train) {
      const double p = launch_power.value_or(config.launch_powers_dbm.front());
      const LinkRun run = simulate_link(config, p, config.train_seed, config.train_symbols);
      const SymbolFrame frame = receive(config, run.received, run.transmitted);
      write_filters(out_path, train_jscpr(config, frame));
    } else if (*apply) {
      const JscprFilters filters = read_filters(filters_path);
      const Waveform received = read_waveform(in_path);
      const int sps = aggregate_samples_per_symbol(
          config.plan.symbol_rate, config.plan.occupied_bandwidth() + (config.wdm_channels - 1) * config.wdm_spacing_hz);
      require(received.length() % sps == 0, "apply: waveform length is not a whole number of symbols");
      const SymbolFrame tx = transmitted_frame(config, config.test_seed, received.length() / sps);
      const SymbolFrame rx = receive(config, received, tx);
      const SymbolFrame z = jscpr_run(rx, &filters.nlpc, &filters.ppnc, config.pilots);

      ExperimentRow row;
      row.launch_power_dbm = config.launch_powers_dbm.front();
      row.scheme = Scheme::JSCPR;
      row.seed = config.test_seed;
      row.snr = estimate_snr(z.streams, *rx.known_symbols, rx.pilot_mask);
      row.cost = complexity(filters.nlpc.n_fft, filters.nlpc.half_length(), filters.nlpc.subcarriers(),
                            filters.ppnc.half_length);
      row.test_symbols = rx.length();
      with_output(out_path, [&](std::ostream& os) { write_csv(os, {row}, config); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
