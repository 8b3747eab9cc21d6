#pragma once

#include "sclink/types.hpp"

#include <vector>

namespace sclink {

struct SnrReport {
  std::vector<double> stream_db;  // per stream
  double aggregate_db = 0.0;      // linear-domain mean over streams, in dB
  bool capped = false;            // some stream had (near) zero error energy
};

constexpr double kSnrCapDb = 80.0;

/// SNR_i = sum |x|^2 / sum |z - x|^2 over non-pilot symbols.
SnrReport estimate_snr(const ComplexMatrix& received, const ComplexMatrix& known,
                       const std::vector<bool>& pilot_mask, Index min_symbols = 1000);

struct Complexity {
  double nlpc = 0.0;
  double ppnc = 0.0;
  double total() const { return nlpc + ppnc; }
};

/// Real multiplications per complex symbol:
/// C_NLPC = 1/2 * N_FFT/(N_FFT - 2N_c) * (log2 N_FFT + (3M + 13)/2),
/// C_PPNC = 4M(2N_d + 1) + 3.
double nlpc_complexity(Index n_fft, Index n_c, Index m);
double ppnc_complexity(Index m, Index n_d);
Complexity complexity(Index n_fft, Index n_c, Index m, Index n_d);

}  // namespace sclink
