#pragma once

#include "sclink/types.hpp"

namespace sclink {

/// Multiplies by exp(i 2 pi f t), t = n / sample_rate. |offset| must stay
/// below Nyquist.
ComplexSeq frequency_shift(const ComplexSeq& seq, double offset_hz);

/// Offset rounded to the DFT bin grid of an n-sample frame, so the shifted
/// frame stays periodic.
double bin_aligned_offset(double offset_hz, Index n, double sample_rate);

/// Band-limited (DFT) resampling. The rate ratio must be a power of two and
/// the length a power of two; downsampling removes everything outside the
/// new Nyquist band (brick-wall anti-alias filter).
ComplexSeq resample(const ComplexSeq& seq, double new_rate);

/// Zeroes every DFT bin with |f| > bandwidth/2 (column-wise).
void brickwall_filter(Eigen::Ref<ComplexMatrix> samples, double sample_rate, double bandwidth_hz);

}  // namespace sclink
