#pragma once

#include "sclink/convolution.hpp"
#include "sclink/txchain.hpp"
#include "sclink/types.hpp"

#include <vector>

namespace sclink {

// ---------------------------------------------------------------------------
// Nonlinear phase compensation (stage 1)
// ---------------------------------------------------------------------------

/// Real M x M MIMO filter mapping mean-removed subcarrier intensities to
/// per-subcarrier phase corrections, run with overlap-and-save.
struct NlpcFilter {
  RealMimoTaps taps;           // C(j), j = -N_c..N_c
  Index n_fft = 2048;
  RealVector mean_intensity;   // training mean of I_m

  Index subcarriers() const { return taps.outputs(); }
  Index half_length() const { return taps.half_length; }
  void validate() const;
};

struct NlpcResult {
  SymbolFrame y;
  RealMatrix theta;  // K x M
};

struct NlpcTrainOptions {
  Index half_length = 250;
  Index n_fft = 2048;
  /// Ridge weight relative to trace(normal matrix)/dimension. Zero disables
  /// regularization and makes a rank-deficient problem an error.
  double ridge = 1e-6;
  /// When > 0, the target phase is referenced to a moving average of the
  /// polarization-summed phasor over this many symbols, which removes slow
  /// laser phase wander from the training target.
  Index detrend_window = 0;
};

/// I_m(k) = |r_{2m}(k)|^2 + |r_{2m+1}(k)|^2 (0-based streams), K x M.
RealMatrix compute_intensities(const SymbolFrame& frame);

/// Least-squares target: arg(sum over pols of x* r) per subcarrier, K x M,
/// not mean-removed.
RealMatrix nlpc_target_phase(const SymbolFrame& frame, Index detrend_window = 0);

NlpcResult nlpc_apply(const SymbolFrame& frame, const NlpcFilter& filter);

/// Fits C by least squares over all training frames (edge-replicated
/// regressors, targets and regressors centered over the training set).
NlpcFilter nlpc_train(const std::vector<SymbolFrame>& frames, const NlpcTrainOptions& options);

// ---------------------------------------------------------------------------
// Pilot-aided phase noise compensation (stage 2)
// ---------------------------------------------------------------------------

/// Bank of P complex 2M x 2M Wiener filters; filters[p] produces the phasor
/// estimate for symbols p positions after a pilot.
struct PpncFilterBank {
  Index period = 32;
  Index half_length = 2;                 // N_d
  std::vector<ComplexMimoTaps> filters;  // size period

  Index streams() const { return filters.empty() ? 0 : filters.front().outputs(); }
  void validate() const;
};

struct PpncResult {
  SymbolFrame z;
  ComplexMatrix psi;        // K x 2M
  Index phasor_reads = 0;   // samples of y read to form pilot phasors
};

struct PpncTrainOptions {
  Index half_length = 2;
  /// Relative ridge, as in NlpcTrainOptions. When zero and the normal matrix
  /// is singular, `fallback_ridge` is used instead.
  double ridge = 1e-6;
  double fallback_ridge = 1e-6;
  bool real_taps = false;
  /// Weight each training row by |x_i(k)|^2, i.e. minimize
  /// sum |y_i(k) - psi_i(k) x_i(k)|^2 instead of sum |y_i(k)/x_i(k) - psi_i(k)|^2.
  /// Low-energy symbols otherwise dominate the reference noise.
  bool energy_weighted = false;
};

/// phi_i(n) = y_i(offset + nP) / pilot_n, Npil x 2M. Reads pilot instants only.
ComplexMatrix pilot_phasors(const SymbolFrame& frame, const PilotSchedule& schedule,
                            Index* samples_read = nullptr);

PpncResult ppnc_apply(const SymbolFrame& frame, const PilotSchedule& schedule, const PpncFilterBank& bank);

PpncFilterBank ppnc_train(const std::vector<SymbolFrame>& frames, const PilotSchedule& schedule,
                          const PpncTrainOptions& options);

// ---------------------------------------------------------------------------
// Cascade
// ---------------------------------------------------------------------------

struct JscprStages {
  bool nlpc = true;
  bool ppnc = true;
};

/// z = ppnc(nlpc(r)); a disabled stage passes its input through. Filters for
/// disabled stages are not accessed and may be null.
SymbolFrame jscpr_run(const SymbolFrame& frame, const NlpcFilter* nlpc, const PpncFilterBank* ppnc,
                      const PilotSchedule& schedule, JscprStages stages = {});

}  // namespace sclink
