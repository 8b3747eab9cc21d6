#include "sclink/rxfrontend.hpp"

#include "sclink/fft.hpp"
#include "sclink/pulse.hpp"
#include "sclink/spectral.hpp"

#include <cmath>

namespace sclink {

Waveform demux_channel(const Waveform& waveform, double center_hz, double bandwidth_hz) {
  require(bandwidth_hz > 0.0, "demux_channel: bandwidth must be positive");
  require(std::abs(center_hz) + 0.5 * bandwidth_hz <= 0.5 * waveform.sample_rate * (1.0 + 1e-12),
          "demux_channel: band exceeds the Nyquist range");
  Waveform out = waveform;
  const double f = bin_aligned_offset(center_hz, waveform.length(), waveform.sample_rate);
  for (Index c = 0; c < out.channels(); ++c) out.samples.col(c) = frequency_shift(waveform.channel(c), -f).samples;
  brickwall_filter(out.samples, out.sample_rate, bandwidth_hz);
  for (auto& off : out.center_offsets) off = 0.0;
  return out;
}

Waveform cd_compensate(const Waveform& waveform, const FiberParams& fiber) {
  return apply_dispersion(waveform, fiber, -fiber.length_m());
}

SymbolFrame demodulate_subcarriers(const Waveform& waveform, const SubcarrierPlan& plan,
                                   Index timing_offset_samples) {
  plan.validate();
  require(waveform.channels() == 2, "demodulate_subcarriers: expects a 2-channel waveform");
  const double sps_real = waveform.sample_rate / plan.symbol_rate;
  const auto sps = static_cast<Index>(std::llround(sps_real));
  require(std::abs(sps_real - static_cast<double>(sps)) < 1e-9 && sps >= 2 && is_power_of_two(sps),
          "demodulate_subcarriers: sample rate must be a power-of-two multiple of the symbol rate");
  const Index n = waveform.length();
  require(n % sps == 0, "demodulate_subcarriers: waveform length is not a whole number of symbols");
  const Index k_sym = n / sps;

  const Index n2 = 2 * k_sym;
  const double fs2 = 2.0 * plan.symbol_rate;
  RealVector matched(n2);
  for (Index k = 0; k < n2; ++k)
    matched[k] = std::sqrt(2.0) *
                 rrc_response(signed_bin(k, n2) * fs2 / static_cast<double>(n2), plan.symbol_rate, plan.roll_off);

  SymbolFrame frame;
  frame.symbol_rate = plan.symbol_rate;
  frame.streams.resize(k_sym, 2 * plan.count);
  frame.pilot_mask.assign(static_cast<size_t>(k_sym), false);

  // Timing offset in whole samples; move it into the sampling grid first.
  for (int m = 0; m < plan.count; ++m) {
    const double f_m = bin_aligned_offset(plan.offset(m), n, waveform.sample_rate);
    for (int pol = 0; pol < 2; ++pol) {
      ComplexSeq base = frequency_shift(waveform.channel(pol), -f_m);
      if (timing_offset_samples != 0) {
        ComplexVector rolled(n);
        for (Index i = 0; i < n; ++i) rolled[i] = base.samples[(i + timing_offset_samples % n + n) % n];
        base.samples = std::move(rolled);
      }
      ComplexVector slow = resample(base, fs2).samples;
      fft_inplace(slow);
      slow.array() *= matched.array();
      ifft_inplace(slow);
      for (Index k = 0; k < k_sym; ++k) frame.streams(k, 2 * m + pol) = slow[2 * k];
    }
  }
  return frame;
}

SymbolFrame align_frame(const SymbolFrame& frame, const ComplexMatrix& known, Index max_delay,
                        Alignment* alignment) {
  require(known.rows() == frame.length() && known.cols() == frame.stream_count(),
          "align_frame: known symbols do not match the frame shape");
  const Index k_sym = frame.length();
  require(k_sym > 0, "align_frame: empty frame");
  max_delay = std::min(max_delay, k_sym / 2);

  SymbolFrame out = frame;
  Alignment result;
  for (Index i = 0; i < frame.stream_count(); ++i) {
    // c(d) = sum_k known*(k) r(k + d), circular.
    Index best_delay = 0;
    double best = -1.0, second = -1.0;
    cdouble best_corr = 0.0;
    for (Index d = -max_delay; d <= max_delay; ++d) {
      cdouble c = 0.0;
      for (Index k = 0; k < k_sym; ++k) c += std::conj(known(k, i)) * frame.streams(((k + d) % k_sym + k_sym) % k_sym, i);
      const double mag = std::abs(c);
      if (mag > best) {
        second = best;
        best = mag;
        best_delay = d;
        best_corr = c;
      } else if (mag > second) {
        second = mag;
      }
    }
    require(best > 0.0 && (max_delay == 0 || best > 2.0 * second),
            "align_frame: ambiguous correlation peak on stream " + std::to_string(i + 1));
    const int quadrant = static_cast<int>(std::lround(std::arg(best_corr) / (0.5 * kPi))) & 3;
    const cdouble derotate = std::polar(1.0, -0.5 * kPi * quadrant);
    for (Index k = 0; k < k_sym; ++k)
      out.streams(k, i) = frame.streams(((k + best_delay) % k_sym + k_sym) % k_sym, i) * derotate;
    result.delays.push_back(best_delay);
    result.quadrants.push_back(quadrant);
  }
  if (alignment) *alignment = std::move(result);
  return out;
}

}  // namespace sclink
