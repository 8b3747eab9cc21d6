#include "sclink/experiment.hpp"

#include "sclink/baselines.hpp"
#include "sclink/random.hpp"
#include "sclink/rxfrontend.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace sclink {

namespace {

ConstellationSpec constellation(const LinkConfig& c) { return make_pas_64qam(mb_lambda_for_entropy(c.entropy_bits)); }

int central_channel(const LinkConfig& c) { return c.wdm_channels / 2; }

double total_bandwidth(const LinkConfig& c) {
  return c.plan.occupied_bandwidth() + (c.wdm_channels - 1) * c.wdm_spacing_hz;
}

// Nominal received power per channel for unit-energy symbols is M.
double amplitude_scale(const LinkConfig& c, double launch_power_dbm) {
  return std::sqrt(dbm_to_watt(launch_power_dbm) / c.plan.count);
}

std::string format_number(double v, int digits) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

SymbolFrame transmitted_frame(const LinkConfig& config, std::uint64_t seed, Index n_symbols) {
  return generate_frame(derive_seed(seed, "data", static_cast<std::uint64_t>(central_channel(config))), n_symbols,
                        constellation(config), config.plan, config.pilots);
}

LinkRun simulate_link(const LinkConfig& config, double launch_power_dbm, std::uint64_t seed, Index n_symbols) {
  config.validate();
  const ConstellationSpec spec = constellation(config);
  const int sps = aggregate_samples_per_symbol(config.plan.symbol_rate, total_bandwidth(config));
  const double scale = amplitude_scale(config, launch_power_dbm);

  LinkRun run;
  std::vector<Waveform> channels;
  for (int ch = 0; ch < config.wdm_channels; ++ch) {
    SymbolFrame frame = generate_frame(derive_seed(seed, "data", static_cast<std::uint64_t>(ch)), n_symbols, spec,
                                       config.plan, config.pilots);
    Waveform w = modulate_subcarriers(frame, config.plan, sps);
    w.samples *= scale;
    if (config.linewidth_hz > 0.0)
      w = apply_phase_noise(w, {config.linewidth_hz}, derive_seed(seed, "tx_laser", static_cast<std::uint64_t>(ch)));
    channels.push_back(std::move(w));
    if (ch == central_channel(config)) run.transmitted = std::move(frame);
  }
  Waveform aggregate = channels.size() == 1
                           ? std::move(channels.front())
                           : mux_wdm(channels, config.wdm_spacing_hz, config.plan.occupied_bandwidth());
  channels.clear();

  double gain = 1.0;
  if (config.fiber_enabled) {
    const RamanParams raman = calibrate_raman(config.fiber, config.raman, launch_power_dbm, config.target_rx_dbm);
    run.pump_power_w = raman.pump_power_w;
    std::optional<std::uint64_t> noise_seed;
    if (config.ase_enabled) noise_seed = derive_seed(seed, "ase");
    aggregate = ssfm_propagate(aggregate, config.fiber, raman, config.steps, noise_seed, &run.propagation);
    gain = power_evolution(config.fiber, raman).gain(config.fiber.length_m());
  }
  if (config.linewidth_hz > 0.0) aggregate = apply_phase_noise(aggregate, {config.linewidth_hz}, derive_seed(seed, "lo_laser"));
  aggregate.samples /= scale * std::sqrt(gain);
  run.received = std::move(aggregate);
  return run;
}

SymbolFrame receive(const LinkConfig& config, const Waveform& received, const SymbolFrame& transmitted) {
  Waveform w = demux_channel(received, 0.0, config.plan.occupied_bandwidth());
  if (config.fiber_enabled) w = cd_compensate(w, config.fiber);
  const SymbolFrame raw = demodulate_subcarriers(w, config.plan);
  require(raw.length() == transmitted.length() && raw.stream_count() == transmitted.stream_count(),
          "receive: demodulated frame does not match the transmitted frame");
  SymbolFrame out = align_frame(raw, transmitted.streams, 16);
  out.symbol_rate = transmitted.symbol_rate;
  out.pilot_mask = transmitted.pilot_mask;
  out.known_symbols = transmitted.streams;
  return out;
}

static PpncTrainOptions ppnc_options(const LinkConfig& config) {
  PpncTrainOptions options;
  options.half_length = config.n_d;
  options.ridge = config.ppnc_ridge;
  options.real_taps = config.ppnc_real_taps;
  options.energy_weighted = config.ppnc_energy_weighted;
  return options;
}

JscprFilters train_jscpr(const LinkConfig& config, const SymbolFrame& training) {
  NlpcTrainOptions nlpc_options;
  nlpc_options.half_length = config.n_c;
  nlpc_options.n_fft = config.n_fft;
  nlpc_options.ridge = config.ridge;
  nlpc_options.detrend_window = config.nlpc_detrend_window;

  JscprFilters filters;
  filters.nlpc = nlpc_train({training}, nlpc_options);
  const SymbolFrame stage1 = nlpc_apply(training, filters.nlpc).y;
  filters.ppnc = ppnc_train({stage1}, config.pilots, ppnc_options(config));
  return filters;
}

std::vector<ExperimentRow> run_launch_power(const LinkConfig& config, double launch_power_dbm) {
  using Clock = std::chrono::steady_clock;
  const auto seconds_since = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::vector<ExperimentRow> rows;
  for (Scheme s : config.schemes) {
    ExperimentRow row;
    row.launch_power_dbm = launch_power_dbm;
    row.scheme = s;
    row.seed = config.test_seed;
    row.train_symbols = config.train_symbols;
    row.test_symbols = config.test_symbols;
    rows.push_back(row);
  }

  const auto t_link = Clock::now();
  SymbolFrame train, test;
  try {
    const LinkRun train_run = simulate_link(config, launch_power_dbm, config.train_seed, config.train_symbols);
    train = receive(config, train_run.received, train_run.transmitted);
    const LinkRun test_run = simulate_link(config, launch_power_dbm, config.test_seed, config.test_symbols);
    test = receive(config, test_run.received, test_run.transmitted);
  } catch (const std::exception& e) {
    for (auto& row : rows) row.status = std::string("link: ") + e.what();
    return rows;
  }
  const double link_time = seconds_since(t_link);
  const ComplexMatrix& known = *test.known_symbols;
  const Complexity cost = complexity(config.n_fft, config.n_c, config.plan.count, config.n_d);

  // Filters are shared between schemes and trained on first use.
  std::optional<JscprFilters> jscpr_filters;
  auto jscpr = [&]() -> const JscprFilters& {
    if (!jscpr_filters) jscpr_filters = train_jscpr(config, train);
    return *jscpr_filters;
  };

  for (auto& row : rows) {
    const auto t0 = Clock::now();
    try {
      SymbolFrame out;
      switch (row.scheme) {
        case Scheme::MPR:
          out = mean_phase_removal(test, known);
          break;
        case Scheme::CPR:
          row.cpr_bandwidth = optimize_cpr_bandwidth(train, config.pilots, config.cpr_bandwidth_grid);
          out = gaussian_cpr(test, config.pilots, *row.cpr_bandwidth);
          break;
        case Scheme::NLPC:
          // The NLPC output keeps a constant phase offset; remove it the same
          // way as the MPR baseline.
          out = mean_phase_removal(nlpc_apply(test, jscpr().nlpc).y, known);
          row.cost.nlpc = cost.nlpc;
          break;
        case Scheme::PPNC: {
          const PpncFilterBank bank = ppnc_train({train}, config.pilots, ppnc_options(config));
          out = ppnc_apply(test, config.pilots, bank).z;
          row.cost.ppnc = cost.ppnc;
          break;
        }
        case Scheme::JSCPR: {
          const JscprFilters& f = jscpr();
          out = jscpr_run(test, &f.nlpc, &f.ppnc, config.pilots);
          row.cost = cost;
          break;
        }
      }
      row.snr = estimate_snr(out.streams, known, test.pilot_mask);
    } catch (const std::exception& e) {
      row.status = std::string(to_string(row.scheme)) + ": " + e.what();
    }
    row.wall_time_s = link_time + seconds_since(t0);
  }
  return rows;
}

std::vector<ExperimentRow> run_experiment(const LinkConfig& config, int workers) {
  config.validate();
  const auto& powers = config.launch_powers_dbm;
  std::vector<std::vector<ExperimentRow>> results(powers.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < powers.size(); i = next++) results[i] = run_launch_power(config, powers[i]);
  };
  const int count = std::clamp<int>(workers, 1, static_cast<int>(powers.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<ExperimentRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

int workers_from_environment() {
  const char* v = std::getenv("SCLINK_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  require(end && *end == '\0' && n >= 1 && n <= 1024, "SCLINK_WORKERS must be an integer in [1, 1024]");
  return static_cast<int>(n);
}

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, const LinkConfig& config) {
  const Index streams = 2 * config.plan.count;
  os << "launch_power_dbm,scheme,seed,snr_db_aggregate";
  for (Index i = 1; i <= streams; ++i) os << ",snr_db_stream_" << i;
  os << ",c_nlpc,c_ppnc,c_total,train_symbols,test_symbols,wall_time_s,status\n";
  for (const auto& r : rows) {
    os << format_number(r.launch_power_dbm, 3) << ',' << to_string(r.scheme) << ',' << r.seed << ',';
    os << (r.ok() ? format_number(r.snr.aggregate_db, 6) : "nan");
    for (Index i = 0; i < streams; ++i) {
      const bool have = r.ok() && i < static_cast<Index>(r.snr.stream_db.size());
      os << ',' << (have ? format_number(r.snr.stream_db[static_cast<size_t>(i)], 6) : "nan");
    }
    os << ',' << format_number(r.cost.nlpc, 4) << ',' << format_number(r.cost.ppnc, 4) << ','
       << format_number(r.cost.total(), 4) << ',' << r.train_symbols << ',' << r.test_symbols << ','
       << format_number(config.report_wall_time ? r.wall_time_s : 0.0, 3) << ',' << csv_field(r.status) << '\n';
  }
}

void complexity_report(std::ostream& os, const LinkConfig& config) {
  const Complexity c = complexity(config.n_fft, config.n_c, config.plan.count, config.n_d);
  os << "stage,real_multiplications_per_symbol\n";
  os << "nlpc," << format_number(c.nlpc, 4) << '\n';
  os << "ppnc," << format_number(c.ppnc, 4) << '\n';
  os << "total," << format_number(c.total(), 4) << '\n';
}

Optimum optimum_snr(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && !x.empty(), "optimum_snr: need matching, non-empty power and SNR lists");
  size_t best = x.size();
  for (size_t i = 0; i < y.size(); ++i)
    if (std::isfinite(y[i]) && (best == x.size() || y[i] > y[best])) best = i;
  require(best < x.size(), "optimum_snr: no finite SNR values");
  Optimum opt{x[best], y[best]};
  if (best == 0 || best + 1 == x.size() || !std::isfinite(y[best - 1]) || !std::isfinite(y[best + 1])) return opt;

  const double x0 = x[best - 1], x1 = x[best], x2 = x[best + 1];
  const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
  // Parabola through the three points in Newton form.
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  if (!(a < 0.0)) return opt;
  const double b = d01 - a * (x0 + x1);
  const double xv = std::clamp(-b / (2.0 * a), x0, x2);
  opt.launch_power_dbm = xv;
  opt.snr_db = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
  return opt;
}

}  // namespace sclink
