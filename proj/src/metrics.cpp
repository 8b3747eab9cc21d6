#include "sclink/metrics.hpp"

#include "sclink/fft.hpp"

#include <cmath>

namespace sclink {

SnrReport estimate_snr(const ComplexMatrix& received, const ComplexMatrix& known,
                       const std::vector<bool>& pilot_mask, Index min_symbols) {
  require(received.rows() == known.rows() && received.cols() == known.cols(),
          "estimate_snr: received and known symbols differ in shape");
  require(pilot_mask.empty() || static_cast<Index>(pilot_mask.size()) == received.rows(),
          "estimate_snr: pilot mask length mismatch");
  Index data = 0;
  for (Index k = 0; k < received.rows(); ++k)
    if (pilot_mask.empty() || !pilot_mask[static_cast<size_t>(k)]) ++data;
  require(data >= min_symbols, "estimate_snr: need at least " + std::to_string(min_symbols) + " data symbols");

  SnrReport report;
  double mean_linear = 0.0;
  const double cap = db_to_linear(kSnrCapDb);
  for (Index i = 0; i < received.cols(); ++i) {
    double signal = 0.0, error = 0.0;
    for (Index k = 0; k < received.rows(); ++k) {
      if (!pilot_mask.empty() && pilot_mask[static_cast<size_t>(k)]) continue;
      signal += std::norm(known(k, i));
      error += std::norm(received(k, i) - known(k, i));
    }
    double snr = error > 0.0 ? signal / error : cap;
    if (snr >= cap) {
      snr = cap;
      report.capped = true;
    }
    report.stream_db.push_back(linear_to_db(snr));
    mean_linear += snr;
  }
  report.aggregate_db = linear_to_db(mean_linear / static_cast<double>(received.cols()));
  return report;
}

double nlpc_complexity(Index n_fft, Index n_c, Index m) {
  require(is_power_of_two(n_fft) && n_c >= 0 && n_fft > 2 * n_c, "complexity: need power-of-two N_FFT > 2N_c");
  require(m >= 1, "complexity: M must be >= 1");
  const double overlap = static_cast<double>(n_fft) / static_cast<double>(n_fft - 2 * n_c);
  return 0.5 * overlap * (std::log2(static_cast<double>(n_fft)) + (3.0 * m + 13.0) / 2.0);
}

double ppnc_complexity(Index m, Index n_d) {
  require(m >= 1 && n_d >= 0, "complexity: need M >= 1 and N_d >= 0");
  return 4.0 * m * (2.0 * n_d + 1.0) + 3.0;
}

Complexity complexity(Index n_fft, Index n_c, Index m, Index n_d) {
  return {nlpc_complexity(n_fft, n_c, m), ppnc_complexity(m, n_d)};
}

}  // namespace sclink
