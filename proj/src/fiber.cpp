#include "sclink/fiber.hpp"

#include "sclink/fft.hpp"
#include "sclink/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace sclink {

namespace {

constexpr double kManakov = 8.0 / 9.0;

double db_per_km_to_per_m(double db_per_km) { return db_per_km * std::log(10.0) / 10.0 * 1e-3; }

// 8-point Gauss-Legendre on [a, b], split into pieces no longer than 1 km.
template <typename F>
double integrate(F&& f, double a, double b) {
  static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                              0.9602898564975363};
  static constexpr std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};
  if (b <= a) return 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 1000.0)));
  const double width = (b - a) / pieces;
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * width;
    const double c = lo + 0.5 * width;
    const double r = 0.5 * width;
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * (f(c - r * x[i]) + f(c + r * x[i]));
    total += r * s;
  }
  return total;
}

}  // namespace

double FiberParams::alpha_per_m() const { return db_per_km_to_per_m(attenuation_db_per_km); }

double FiberParams::beta2() const {
  const double lambda = reference_wavelength_nm * 1e-9;
  const double d = dispersion_ps_nm_km * 1e-6;  // s/m^2
  return -d * lambda * lambda / (2.0 * kPi * kSpeedOfLight);
}

void FiberParams::validate() const {
  require(length_km > 0.0, "FiberParams: length must be positive");
  require(attenuation_db_per_km >= 0.0 && gamma_per_w_km >= 0.0 && reference_wavelength_nm > 0.0,
          "FiberParams: attenuation, gamma and wavelength must be non-negative");
}

void RamanParams::validate() const {
  require(pump_power_w >= 0.0, "RamanParams: pump power must be >= 0");
  require(spontaneous_factor >= 1.0, "RamanParams: n_sp must be >= 1");
  require(pump_attenuation_db_per_km >= 0.0 && gain_efficiency_per_w_km >= 0.0,
          "RamanParams: pump attenuation and gain efficiency must be >= 0");
}

PowerProfile::PowerProfile(const FiberParams& fiber, const RamanParams& raman)
    : length_(fiber.length_m()),
      alpha_(fiber.alpha_per_m()),
      alpha_pump_(db_per_km_to_per_m(raman.pump_attenuation_db_per_km)),
      pump_gain_(raman.gain_efficiency_per_w_km * 1e-3 * raman.pump_power_w) {
  fiber.validate();
  raman.validate();
}

double PowerProfile::raman_gain(double z) const {
  return pump_gain_ * std::exp(-alpha_pump_ * (length_ - z));
}

double PowerProfile::log_gain(double z) const {
  // integral_0^z exp(-a (L - z')) dz' = exp(-a (L - z)) (1 - exp(-a z)) / a
  double pump_integral = z;
  if (alpha_pump_ > 0.0) pump_integral = std::exp(-alpha_pump_ * (length_ - z)) * (-std::expm1(-alpha_pump_ * z)) / alpha_pump_;
  return -alpha_ * z + pump_gain_ * pump_integral;
}

double PowerProfile::integrate_relative_gain(double z0, double z1, double z_ref) const {
  const double ref = log_gain(z_ref);
  return integrate([&](double z) { return std::exp(log_gain(z) - ref); }, z0, z1);
}

double PowerProfile::integrate_noise_source(double z0, double z1, double z_ref) const {
  const double ref = log_gain(z_ref);
  return integrate([&](double z) { return raman_gain(z) * std::exp(ref - log_gain(z)); }, z0, z1);
}

PowerProfile power_evolution(const FiberParams& fiber, const RamanParams& raman) { return {fiber, raman}; }

double span_gain_db(const FiberParams& fiber, const RamanParams& raman) {
  const PowerProfile p(fiber, raman);
  return 10.0 * p.log_gain(p.length_m()) / std::log(10.0);
}

RamanParams calibrate_raman(const FiberParams& fiber, const RamanParams& raman, double launch_power_dbm,
                            double target_rx_dbm) {
  RamanParams r = raman;
  auto rx_at = [&](double pump) {
    r.pump_power_w = pump;
    return launch_power_dbm + span_gain_db(fiber, r);
  };
  const double passive = rx_at(0.0);
  require(target_rx_dbm >= passive - 1e-9,
          "calibrate_raman: target below the passive (pump-off) received power is unreachable");
  require(raman.gain_efficiency_per_w_km > 0.0 || std::abs(target_rx_dbm - passive) <= 0.01,
          "calibrate_raman: zero gain efficiency cannot raise the received power");
  double lo = 0.0;
  double hi = 0.1;
  while (rx_at(hi) < target_rx_dbm) {
    hi *= 2.0;
    require(hi <= 1e4, "calibrate_raman: target unreachable with pump powers up to 10 kW");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rx_at(mid) < target_rx_dbm) lo = mid;
    else hi = mid;
  }
  r.pump_power_w = 0.5 * (lo + hi);
  r.target_rx_power_dbm_per_channel = target_rx_dbm;
  return r;
}

Waveform apply_dispersion(const Waveform& waveform, const FiberParams& fiber, double length_m) {
  Waveform out = waveform;
  if (length_m == 0.0 || out.length() == 0) return out;
  const RealVector w = angular_frequency_grid(out.length(), out.sample_rate);
  const ComplexVector h = (w.array().square() * (0.5 * fiber.beta2() * length_m))
                              .unaryExpr([](double ph) { return std::polar(1.0, ph); });
  ComplexVector col(out.length());
  for (Index c = 0; c < out.channels(); ++c) {
    col = out.samples.col(c);
    fft_inplace(col);
    col.array() *= h.array();
    ifft_inplace(col);
    out.samples.col(c) = col;
  }
  return out;
}

Waveform ssfm_propagate(const Waveform& waveform, const FiberParams& fiber, const RamanParams& raman,
                        const StepConfig& steps, std::optional<std::uint64_t> noise_seed,
                        PropagationStats* stats) {
  require(waveform.channels() == 2, "ssfm_propagate: expects a 2-channel (pol-x, pol-y) waveform");
  require(steps.max_step_km > 0.0 && steps.max_nonlinear_phase_rad > 0.0,
          "ssfm_propagate: max step and max nonlinear phase must be positive");
  const PowerProfile profile(fiber, raman);
  const Index n = waveform.length();
  const double length = profile.length_m();
  const double gamma = kManakov * fiber.gamma_per_w_m();
  const double launch_power = waveform.samples.cwiseAbs2().sum() / std::max<Index>(n, 1);
  const double max_step = steps.max_step_km * 1e3;

  auto step_phase = [&](double z0, double z1) {
    return gamma * launch_power * profile.integrate_relative_gain(z0, z1, 0.0);
  };

  // Step boundaries.
  std::vector<double> grid{0.0};
  double z = 0.0;
  double worst = 0.0;
  while (z < length) {
    double h = std::min(max_step, length - z);
    if (steps.policy == StepPolicy::Logarithmic) {
      if (gamma * launch_power > 0.0) {
        h = std::min(h, steps.max_nonlinear_phase_rad / (gamma * launch_power * profile.gain(z)));
        while (step_phase(z, z + h) > steps.max_nonlinear_phase_rad * (1.0 + 1e-9)) h *= 0.5;
      }
    } else {
      const double phase = step_phase(z, z + h);
      if (phase > steps.max_nonlinear_phase_rad * (1.0 + 1e-9)) {
        require(steps.auto_refine, "ssfm_propagate: uniform step exceeds the nonlinear phase limit");
        h /= std::ceil(phase / steps.max_nonlinear_phase_rad);
      }
    }
    double next = z + h;
    if (length - next < 1e-9 * length) next = length;
    worst = std::max(worst, step_phase(z, next));
    grid.push_back(next);
    z = next;
  }
  const auto count = static_cast<Index>(grid.size()) - 1;
  if (stats) *stats = {count, worst};

  const RealVector w = angular_frequency_grid(n, waveform.sample_rate);
  const RealVector disp = w.array().square() * (0.5 * fiber.beta2());
  ComplexVector linear(n);
  auto set_linear = [&](double from, double to) {
    const double amp = std::exp(0.5 * (profile.log_gain(to) - profile.log_gain(from)));
    const double dz = to - from;
    for (Index k = 0; k < n; ++k) linear[k] = std::polar(amp, disp[k] * dz);
  };

  std::optional<Rng> rng;
  if (noise_seed) rng.emplace(*noise_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double photon = kPlanck * fiber.carrier_frequency();

  ComplexVector ax = waveform.samples.col(0);
  ComplexVector ay = waveform.samples.col(1);
  fft_inplace(ax);
  fft_inplace(ay);

  double prev_mid = 0.0;
  double last_dz = -1.0, last_amp = -1.0;
  for (Index s = 0; s < count; ++s) {
    const double z0 = grid[static_cast<size_t>(s)];
    const double z1 = grid[static_cast<size_t>(s + 1)];
    const double mid = 0.5 * (z0 + z1);

    const double dz = mid - prev_mid;
    const double amp = profile.log_gain(mid) - profile.log_gain(prev_mid);
    if (dz != last_dz || amp != last_amp) {
      set_linear(prev_mid, mid);
      last_dz = dz;
      last_amp = amp;
    }
    ax.array() *= linear.array();
    ay.array() *= linear.array();
    ifft_inplace(ax);
    ifft_inplace(ay);

    if (gamma > 0.0) {
      const double h_eff = profile.integrate_relative_gain(z0, z1, mid);
      const double g = gamma * h_eff;
      for (Index k = 0; k < n; ++k) {
        const auto rot = std::polar(1.0, g * (std::norm(ax[k]) + std::norm(ay[k])));
        ax[k] *= rot;
        ay[k] *= rot;
      }
    }
    if (rng) {
      const double psd = raman.spontaneous_factor * photon * profile.integrate_noise_source(z0, z1, mid);
      const double sigma = std::sqrt(0.5 * psd * waveform.sample_rate);
      if (sigma > 0.0) {
        for (Index k = 0; k < n; ++k) ax[k] += cdouble(sigma * gauss(*rng), sigma * gauss(*rng));
        for (Index k = 0; k < n; ++k) ay[k] += cdouble(sigma * gauss(*rng), sigma * gauss(*rng));
      }
    }
    fft_inplace(ax);
    fft_inplace(ay);
    prev_mid = mid;
  }
  set_linear(prev_mid, length);
  ax.array() *= linear.array();
  ay.array() *= linear.array();
  ifft_inplace(ax);
  ifft_inplace(ay);

  Waveform out;
  out.sample_rate = waveform.sample_rate;
  out.center_offsets = waveform.center_offsets;
  out.samples.resize(n, 2);
  out.samples.col(0) = ax;
  out.samples.col(1) = ay;
  return out;
}

double ase_output_psd(const FiberParams& fiber, const RamanParams& raman) {
  const PowerProfile p(fiber, raman);
  return raman.spontaneous_factor * kPlanck * fiber.carrier_frequency() *
         p.integrate_noise_source(0.0, p.length_m(), p.length_m());
}

}  // namespace sclink
