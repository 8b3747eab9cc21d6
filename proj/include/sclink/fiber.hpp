#pragma once

#include "sclink/types.hpp"

#include <cstdint>
#include <optional>

namespace sclink {

struct FiberParams {
  double length_km = 250.0;
  double attenuation_db_per_km = 0.2;
  double gamma_per_w_km = 1.27;
  double dispersion_ps_nm_km = 17.0;
  double reference_wavelength_nm = 1550.0;

  double length_m() const { return length_km * 1e3; }
  double alpha_per_m() const;  // power attenuation, 1/m
  double gamma_per_w_m() const { return gamma_per_w_km * 1e-3; }
  double beta2() const;        // s^2/m
  double carrier_frequency() const { return kSpeedOfLight / (reference_wavelength_nm * 1e-9); }
  void validate() const;
};

/// Backward-pumped distributed Raman amplification with an undepleted pump
/// P_pump(z) = pump_power * exp(-alpha_p (L - z)).
struct RamanParams {
  double pump_power_w = 0.0;
  double pump_attenuation_db_per_km = 0.25;
  double gain_efficiency_per_w_km = 0.4;
  double spontaneous_factor = 1.13;  // n_sp
  std::optional<double> target_rx_power_dbm_per_channel;

  void validate() const;
};

enum class StepPolicy {
  Uniform,      // fixed max_step_km
  Logarithmic,  // steps sized for equal nonlinear phase as the power evolves
};

struct StepConfig {
  StepPolicy policy = StepPolicy::Logarithmic;
  double max_step_km = 1.0;
  double max_nonlinear_phase_rad = 1e-3;
  bool auto_refine = true;  // Uniform: subdivide instead of failing
};

/// Net power gain G(z) = P(z)/P(0) along the span.
class PowerProfile {
public:
  PowerProfile(const FiberParams& fiber, const RamanParams& raman);

  double log_gain(double z_m) const;
  double gain(double z_m) const { return std::exp(log_gain(z_m)); }
  /// Local Raman gain coefficient g_R * P_pump(z), 1/m.
  double raman_gain(double z_m) const;
  double length_m() const { return length_; }

  /// Integral of G(z')/G(ref) over [z0, z1] (Gauss-Legendre).
  double integrate_relative_gain(double z0, double z1, double z_ref) const;
  /// Integral of g(z') * G(ref)/G(z') over [z0, z1].
  double integrate_noise_source(double z0, double z1, double z_ref) const;

private:
  double length_;
  double alpha_;
  double alpha_pump_;
  double pump_gain_;  // g_R * P_p, 1/m
};

/// Returns z -> G(z); G(L) in dB is 10 log10(power_evolution(...).gain(L)).
PowerProfile power_evolution(const FiberParams& fiber, const RamanParams& raman);

double span_gain_db(const FiberParams& fiber, const RamanParams& raman);

/// Bisects the pump power so launch + G(L)[dB] hits target_rx_dbm (0.01 dB).
RamanParams calibrate_raman(const FiberParams& fiber, const RamanParams& raman, double launch_power_dbm,
                            double target_rx_dbm);

/// Applies the fiber's chromatic dispersion exp(i beta2 w^2 L / 2) to every
/// channel (no loss, no nonlinearity).
Waveform apply_dispersion(const Waveform& waveform, const FiberParams& fiber, double length_m);

struct PropagationStats {
  Index steps = 0;
  double max_step_phase = 0.0;
};

/// Symmetrized split-step solution of the Manakov equation on a 2-channel
/// (pol-x, pol-y) waveform. ASE is added per step when noise_seed is set.
Waveform ssfm_propagate(const Waveform& waveform, const FiberParams& fiber, const RamanParams& raman,
                        const StepConfig& steps, std::optional<std::uint64_t> noise_seed,
                        PropagationStats* stats = nullptr);

/// Analytic output ASE PSD per polarization (W/Hz):
/// n_sp h nu * integral of g(z) G(L)/G(z) dz.
double ase_output_psd(const FiberParams& fiber, const RamanParams& raman);

}  // namespace sclink
