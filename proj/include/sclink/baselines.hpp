#pragma once

#include "sclink/txchain.hpp"
#include "sclink/types.hpp"

#include <vector>

namespace sclink {

/// Genie baseline: rotates each stream by -arg(sum_k x*(k) r(k)).
SymbolFrame mean_phase_removal(const SymbolFrame& frame, const ComplexMatrix& known);

/// Sigma (in symbols) of the Gaussian interpolator for a bandwidth
/// normalized to the symbol rate: 1 / (2 pi B).
double gaussian_kernel_sigma(double normalized_bandwidth);

/// Pilot-aided CPR with a Gaussian interpolating filter, per subcarrier, with
/// the pilot phasors averaged over both polarizations. The kernel is
/// truncated at +-4 sigma and renormalized; it must span at least one pilot
/// period on each side.
SymbolFrame gaussian_cpr(const SymbolFrame& frame, const PilotSchedule& schedule, double normalized_bandwidth);

/// Grid search maximizing the aggregate SNR of gaussian_cpr on a validation
/// frame; ties go to the smaller bandwidth.
double optimize_cpr_bandwidth(const SymbolFrame& frame, const PilotSchedule& schedule,
                              const std::vector<double>& grid);

}  // namespace sclink
