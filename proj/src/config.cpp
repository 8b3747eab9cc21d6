#include "sclink/config.hpp"

#include "sclink/fft.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sclink {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::MPR: return "MPR";
    case Scheme::CPR: return "CPR";
    case Scheme::NLPC: return "NLPC";
    case Scheme::PPNC: return "PPNC";
    case Scheme::JSCPR: return "JSCPR";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Scheme s : {Scheme::MPR, Scheme::CPR, Scheme::NLPC, Scheme::PPNC, Scheme::JSCPR})
    if (to_string(s) == up) return s;
  throw Error("unknown scheme '" + name + "' (expected MPR, CPR, NLPC, PPNC or JSCPR)");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && !v.empty(), "config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == v.size() && !v.empty(), "config: '" + key + "' expects an integer, got '" + v + "'");
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("config: '" + key + "' expects true/false, got '" + v + "'");
}

using Setter = std::function<void(LinkConfig&, const std::string& key, const std::string& value)>;

template <typename T>
Setter real(T LinkConfig::*field) {
  return [field](LinkConfig& c, const std::string& k, const std::string& v) { c.*field = to_double(k, v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [](auto apply) {
      return [apply](LinkConfig& c, const std::string& k, const std::string& v) { apply(c, to_double(k, v)); };
    };
    auto integer = [](auto apply) {
      return [apply](LinkConfig& c, const std::string& k, const std::string& v) { apply(c, to_int(k, v)); };
    };
    auto flag = [](auto apply) {
      return [apply](LinkConfig& c, const std::string& k, const std::string& v) { apply(c, to_bool(k, v)); };
    };

    t["constellation.entropy_bits"] = real(&LinkConfig::entropy_bits);

    t["subcarriers.count"] = integer([](LinkConfig& c, auto v) { c.plan.count = static_cast<int>(v); });
    t["subcarriers.symbol_rate_hz"] = num([](LinkConfig& c, double v) { c.plan.symbol_rate = v; });
    t["subcarriers.spacing_hz"] = num([](LinkConfig& c, double v) { c.plan.spacing = v; });
    t["subcarriers.roll_off"] = num([](LinkConfig& c, double v) { c.plan.roll_off = v; });

    t["pilots.period"] = integer([](LinkConfig& c, auto v) { c.pilots.period = v; });
    t["pilots.offset"] = integer([](LinkConfig& c, auto v) { c.pilots.offset = v; });

    t["wdm.channels"] = integer([](LinkConfig& c, auto v) { c.wdm_channels = static_cast<int>(v); });
    t["wdm.spacing_hz"] = real(&LinkConfig::wdm_spacing_hz);

    t["fiber.enabled"] = flag([](LinkConfig& c, bool v) { c.fiber_enabled = v; });
    t["fiber.length_km"] = num([](LinkConfig& c, double v) { c.fiber.length_km = v; });
    t["fiber.attenuation_db_per_km"] = num([](LinkConfig& c, double v) { c.fiber.attenuation_db_per_km = v; });
    t["fiber.gamma_per_w_km"] = num([](LinkConfig& c, double v) { c.fiber.gamma_per_w_km = v; });
    t["fiber.dispersion_ps_nm_km"] = num([](LinkConfig& c, double v) { c.fiber.dispersion_ps_nm_km = v; });
    t["fiber.reference_wavelength_nm"] = num([](LinkConfig& c, double v) { c.fiber.reference_wavelength_nm = v; });

    t["raman.pump_attenuation_db_per_km"] =
        num([](LinkConfig& c, double v) { c.raman.pump_attenuation_db_per_km = v; });
    t["raman.gain_efficiency_per_w_km"] = num([](LinkConfig& c, double v) { c.raman.gain_efficiency_per_w_km = v; });
    t["raman.spontaneous_factor"] = num([](LinkConfig& c, double v) { c.raman.spontaneous_factor = v; });
    t["raman.target_rx_dbm"] = real(&LinkConfig::target_rx_dbm);
    t["raman.ase_enabled"] = flag([](LinkConfig& c, bool v) { c.ase_enabled = v; });

    t["steps.policy"] = [](LinkConfig& c, const std::string& k, const std::string& v) {
      if (v == "uniform") c.steps.policy = StepPolicy::Uniform;
      else if (v == "logarithmic") c.steps.policy = StepPolicy::Logarithmic;
      else throw Error("config: '" + k + "' expects uniform or logarithmic, got '" + v + "'");
    };
    t["steps.max_step_km"] = num([](LinkConfig& c, double v) { c.steps.max_step_km = v; });
    t["steps.max_nonlinear_phase_rad"] = num([](LinkConfig& c, double v) { c.steps.max_nonlinear_phase_rad = v; });

    t["laser.linewidth_hz"] = real(&LinkConfig::linewidth_hz);

    t["dsp.n_c"] = integer([](LinkConfig& c, auto v) { c.n_c = v; });
    t["dsp.n_fft"] = integer([](LinkConfig& c, auto v) { c.n_fft = v; });
    t["dsp.n_d"] = integer([](LinkConfig& c, auto v) { c.n_d = v; });
    t["dsp.ridge"] = real(&LinkConfig::ridge);
    t["dsp.ppnc_ridge"] = real(&LinkConfig::ppnc_ridge);
    t["dsp.ppnc_energy_weighted"] = flag([](LinkConfig& c, bool v) { c.ppnc_energy_weighted = v; });
    t["dsp.ppnc_real_taps"] = flag([](LinkConfig& c, bool v) { c.ppnc_real_taps = v; });
    t["dsp.nlpc_detrend_window"] = integer([](LinkConfig& c, auto v) { c.nlpc_detrend_window = v; });
    t["dsp.cpr_bandwidth_grid"] = [](LinkConfig& c, const std::string& k, const std::string& v) {
      c.cpr_bandwidth_grid.clear();
      for (const auto& item : split_list(v)) c.cpr_bandwidth_grid.push_back(to_double(k, item));
    };

    t["run.train_symbols"] = integer([](LinkConfig& c, auto v) { c.train_symbols = v; });
    t["run.test_symbols"] = integer([](LinkConfig& c, auto v) { c.test_symbols = v; });
    t["run.train_seed"] = integer([](LinkConfig& c, auto v) { c.train_seed = static_cast<std::uint64_t>(v); });
    t["run.test_seed"] = integer([](LinkConfig& c, auto v) { c.test_seed = static_cast<std::uint64_t>(v); });
    t["run.schemes"] = [](LinkConfig& c, const std::string&, const std::string& v) {
      c.schemes.clear();
      for (const auto& item : split_list(v)) c.schemes.push_back(parse_scheme(item));
    };
    t["run.launch_power_dbm"] = [](LinkConfig& c, const std::string& k, const std::string& v) {
      c.launch_powers_dbm.clear();
      for (const auto& item : split_list(v)) c.launch_powers_dbm.push_back(to_double(k, item));
    };
    t["run.report_wall_time"] = flag([](LinkConfig& c, bool v) { c.report_wall_time = v; });
    return t;
  }();
  return table;
}

}  // namespace

void LinkConfig::validate() const {
  require(entropy_bits > 2.0 && entropy_bits <= 6.0, "config: constellation.entropy_bits must lie in (2, 6]");
  plan.validate();
  pilots.validate();
  require(wdm_channels >= 1 && wdm_channels % 2 == 1, "config: wdm.channels must be odd (central channel is demodulated)");
  require(wdm_channels == 1 || wdm_spacing_hz >= plan.occupied_bandwidth(),
          "config: wdm.spacing_hz smaller than the channel bandwidth");
  if (fiber_enabled) {
    fiber.validate();
    raman.validate();
  }
  require(steps.max_step_km > 0.0 && steps.max_nonlinear_phase_rad > 0.0, "config: step limits must be positive");
  require(linewidth_hz >= 0.0, "config: laser.linewidth_hz must be >= 0");
  require(n_c >= 0 && is_power_of_two(n_fft) && n_fft > 2 * n_c, "config: need power-of-two dsp.n_fft > 2 dsp.n_c");
  require(n_d >= 0 && ridge >= 0.0 && ppnc_ridge >= 0.0 && nlpc_detrend_window >= 0, "config: n_d, ridge and detrend window must be >= 0");
  for (Index n : {train_symbols, test_symbols})
    require(is_power_of_two(n) && n % pilots.period == 0,
            "config: symbol counts must be powers of two and multiples of the pilot period");
  require(train_seed != test_seed, "config: run.train_seed and run.test_seed must differ");
  require(!schemes.empty(), "config: run.schemes is empty");
  require(!launch_powers_dbm.empty(), "config: run.launch_power_dbm is empty");
  for (double b : cpr_bandwidth_grid) require(b > 0.0, "config: CPR bandwidths must be positive");
  if (std::find(schemes.begin(), schemes.end(), Scheme::CPR) != schemes.end())
    require(!cpr_bandwidth_grid.empty(), "config: CPR selected with an empty dsp.cpr_bandwidth_grid");
}

LinkConfig parse_config(const std::string& text) {
  LinkConfig config;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', "config line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    require(it != setters().end(), "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

LinkConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(is.good(), "cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace sclink
