#include "sclink/spectral.hpp"

#include "sclink/fft.hpp"

#include <cmath>

namespace sclink {

ComplexSeq frequency_shift(const ComplexSeq& seq, double offset_hz) {
  require(seq.sample_rate > 0.0, "frequency_shift: sample_rate must be positive");
  require(std::abs(offset_hz) < 0.5 * seq.sample_rate,
          "frequency_shift: offset exceeds the Nyquist band (aliasing)");
  ComplexSeq out{ComplexVector(seq.size()), seq.sample_rate};
  if (offset_hz == 0.0) {
    out.samples = seq.samples;
    return out;
  }
  const double cycles_per_sample = offset_hz / seq.sample_rate;
  for (Index n = 0; n < seq.size(); ++n) {
    const double cycles = std::fmod(cycles_per_sample * static_cast<double>(n), 1.0);
    out.samples[n] = seq.samples[n] * std::polar(1.0, 2.0 * kPi * cycles);
  }
  return out;
}

double bin_aligned_offset(double offset_hz, Index n, double sample_rate) {
  const double df = sample_rate / static_cast<double>(n);
  return std::round(offset_hz / df) * df;
}

ComplexSeq resample(const ComplexSeq& seq, double new_rate) {
  require(seq.sample_rate > 0.0 && new_rate > 0.0, "resample: rates must be positive");
  const Index n = seq.size();
  require(is_power_of_two(n), "resample: length must be a power of two");
  const double ratio = new_rate / seq.sample_rate;
  const double lr = std::log2(ratio);
  require(std::abs(lr - std::round(lr)) < 1e-9, "resample: rate ratio must be a power of two");
  const int shift = static_cast<int>(std::round(lr));
  if (shift == 0) return seq;

  const Index m = shift > 0 ? n << shift : n >> (-shift);
  require(m >= 1, "resample: output would be empty");
  const ComplexVector spec = fft(seq.samples);
  ComplexVector out_spec = ComplexVector::Zero(m);
  const Index keep = std::min(n, m);
  // Copy bins with |k| < keep/2; the shared Nyquist bin is split in halves on
  // upsampling and dropped on downsampling.
  for (Index k = 0; k < keep / 2; ++k) out_spec[k] = spec[k];
  for (Index k = 1; k < keep / 2; ++k) out_spec[m - k] = spec[n - k];
  if (m > n && n >= 2) {
    out_spec[n / 2] = 0.5 * spec[n / 2];
    out_spec[m - n / 2] = 0.5 * spec[n / 2];
  }
  out_spec *= static_cast<double>(m) / static_cast<double>(n);
  return {ifft(out_spec), new_rate};
}

void brickwall_filter(Eigen::Ref<ComplexMatrix> samples, double sample_rate, double bandwidth_hz) {
  const Index n = samples.rows();
  const double df = sample_rate / static_cast<double>(n);
  ComplexVector col(n);
  for (Index c = 0; c < samples.cols(); ++c) {
    col = samples.col(c);
    fft_inplace(col);
    for (Index k = 0; k < n; ++k)
      if (std::abs(static_cast<double>(signed_bin(k, n)) * df) > 0.5 * bandwidth_hz) col[k] = 0.0;
    ifft_inplace(col);
    samples.col(c) = col;
  }
}

}  // namespace sclink
