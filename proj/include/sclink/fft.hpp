#pragma once

#include "sclink/types.hpp"

namespace sclink {

bool is_power_of_two(Index n);

/// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N).
/// Length must be a power of two.
ComplexVector fft(const Eigen::Ref<const ComplexVector>& x);

/// Inverse DFT with 1/N normalization, so ifft(fft(x)) == x.
ComplexVector ifft(const Eigen::Ref<const ComplexVector>& x);

/// In-place variants used on hot paths (split-step, overlap-save).
void fft_inplace(Eigen::Ref<ComplexVector> x);
void ifft_inplace(Eigen::Ref<ComplexVector> x);

ComplexSeq fft_forward(const ComplexSeq& seq);
ComplexSeq fft_inverse(const ComplexSeq& seq);

/// Angular frequency (rad/s) of each DFT bin in natural FFT order.
RealVector angular_frequency_grid(Index n, double sample_rate);

/// Signed bin index in natural FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1.
inline Index signed_bin(Index k, Index n) { return k < n / 2 ? k : k - n; }

}  // namespace sclink
