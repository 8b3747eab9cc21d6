#include "sclink/baselines.hpp"

#include "sclink/jscpr.hpp"
#include "sclink/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace sclink {

SymbolFrame mean_phase_removal(const SymbolFrame& frame, const ComplexMatrix& known) {
  require(known.rows() == frame.length() && known.cols() == frame.stream_count(),
          "mean_phase_removal: known symbols do not match the frame");
  SymbolFrame out = frame;
  for (Index i = 0; i < frame.stream_count(); ++i) {
    const cdouble c = known.col(i).dot(frame.streams.col(i));  // sum conj(x) r
    require(std::abs(c) > 0.0, "mean_phase_removal: zero correlation on stream " + std::to_string(i + 1));
    out.streams.col(i) *= std::polar(1.0, -std::arg(c));
  }
  return out;
}

double gaussian_kernel_sigma(double normalized_bandwidth) {
  require(normalized_bandwidth > 0.0, "gaussian_cpr: bandwidth must be positive");
  return 1.0 / (2.0 * kPi * normalized_bandwidth);
}

SymbolFrame gaussian_cpr(const SymbolFrame& frame, const PilotSchedule& schedule, double normalized_bandwidth) {
  const double sigma = gaussian_kernel_sigma(normalized_bandwidth);
  require(4.0 * sigma >= static_cast<double>(schedule.period),
          "gaussian_cpr: kernel truncated at 4 sigma spans less than one pilot period");
  require(frame.stream_count() % 2 == 0 && frame.stream_count() > 0, "gaussian_cpr: frame must hold 2M streams");

  const ComplexMatrix phi = pilot_phasors(frame, schedule);
  const Index pilots = phi.rows();
  require(pilots > 0, "gaussian_cpr: frame contains no pilots");
  const Index m_count = frame.subcarriers();
  ComplexMatrix averaged(pilots, m_count);
  for (Index m = 0; m < m_count; ++m) averaged.col(m) = 0.5 * (phi.col(2 * m) + phi.col(2 * m + 1));

  // Weights by (distance in pilot blocks, offset within the block).
  const double reach = 4.0 * sigma;
  const Index period = schedule.period;
  const auto blocks = static_cast<Index>(std::min<double>(std::ceil(reach / period) + 1, pilots + 1));
  RealMatrix weight(period, 2 * blocks + 1);
  for (Index p = 0; p < period; ++p)
    for (Index d = -blocks; d <= blocks; ++d) {
      const double t = static_cast<double>(d * period + p);
      weight(p, d + blocks) = std::abs(t) <= reach ? std::exp(-0.5 * t * t / (sigma * sigma)) : 0.0;
    }

  SymbolFrame out = frame;
  for (Index k = 0; k < frame.length(); ++k) {
    const Index rel = k - schedule.offset;
    const Index n0 = rel >= 0 ? rel / period : -((-rel + period - 1) / period);
    const Index p = rel - n0 * period;
    const Index lo = std::max<Index>(0, n0 - blocks);
    const Index hi = std::min<Index>(pilots - 1, n0 + blocks);
    for (Index m = 0; m < m_count; ++m) {
      cdouble acc = 0.0;
      double norm = 0.0;
      for (Index n = lo; n <= hi; ++n) {
        const double w = weight(p, n0 - n + blocks);
        acc += w * averaged(n, m);
        norm += w;
      }
      require(norm > 0.0, "gaussian_cpr: no pilot inside the truncated kernel");
      const cdouble rot = std::polar(1.0, -std::arg(acc));
      out.streams(k, 2 * m) *= rot;
      out.streams(k, 2 * m + 1) *= rot;
    }
  }
  return out;
}

double optimize_cpr_bandwidth(const SymbolFrame& frame, const PilotSchedule& schedule,
                              const std::vector<double>& grid) {
  require(!grid.empty(), "optimize_cpr_bandwidth: empty bandwidth grid");
  require(frame.known_symbols.has_value(), "optimize_cpr_bandwidth: validation frame lacks known symbols");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  double best_bw = sorted.front();
  double best_snr = -1e300;
  for (double bw : sorted) {
    const auto z = gaussian_cpr(frame, schedule, bw);
    const double snr = estimate_snr(z.streams, *frame.known_symbols, frame.pilot_mask, 1).aggregate_db;
    if (snr > best_snr) {
      best_snr = snr;
      best_bw = bw;
    }
  }
  return best_bw;
}

}  // namespace sclink
