#pragma once

#include "sclink/fft.hpp"
#include "sclink/types.hpp"

#include <algorithm>
#include <vector>

namespace sclink {

/// Matrix impulse response H(j), j = -N..N, each H(j) is outputs x inputs.
template <typename Scalar>
struct MimoTaps {
  Index half_length = 0;
  std::vector<Matrix<Scalar>> coeffs;  // coeffs[j + N] == H(j)

  static MimoTaps zeros(Index outputs, Index inputs, Index half_length) {
    MimoTaps t;
    t.half_length = half_length;
    t.coeffs.assign(static_cast<size_t>(2 * half_length + 1), Matrix<Scalar>::Zero(outputs, inputs));
    return t;
  }

  Index span() const { return 2 * half_length + 1; }
  Index outputs() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  Index inputs() const { return coeffs.empty() ? 0 : coeffs.front().cols(); }

  Matrix<Scalar>& at(Index j) { return coeffs[static_cast<size_t>(j + half_length)]; }
  const Matrix<Scalar>& at(Index j) const { return coeffs[static_cast<size_t>(j + half_length)]; }

  bool all_finite() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& c) { return c.allFinite(); });
  }
};

using RealMimoTaps = MimoTaps<double>;
using ComplexMimoTaps = MimoTaps<cdouble>;

namespace detail {

inline Index clamp_index(Index k, Index length) { return std::clamp<Index>(k, 0, length - 1); }

template <typename Scalar>
void check_taps(const MimoTaps<Scalar>& taps, Index input_count, const char* who) {
  require(taps.half_length >= 0 && static_cast<Index>(taps.coeffs.size()) == taps.span(),
          std::string(who) + ": tap vector does not hold 2N+1 matrices");
  for (const auto& c : taps.coeffs)
    require(c.rows() == taps.outputs() && c.cols() == taps.inputs(),
            std::string(who) + ": tap matrices have inconsistent shapes");
  require(taps.inputs() == input_count, std::string(who) + ": tap input dimension " +
                                            std::to_string(taps.inputs()) + " != input count " +
                                            std::to_string(input_count));
}

template <typename Scalar>
Scalar from_complex(const cdouble& v) {
  if constexpr (std::is_same_v<Scalar, double>) return v.real();
  else return v;
}

}  // namespace detail

/// y_m(k) = sum_{m'} sum_{j=-N..N} H_{m,m'}(j) x_{m'}(k - j); inputs are
/// K x M_in (one column per sequence), extended by edge replication.
template <typename Scalar>
Matrix<Scalar> mimo_convolve_direct(const Eigen::Ref<const Matrix<Scalar>>& inputs,
                                    const MimoTaps<Scalar>& taps) {
  detail::check_taps(taps, inputs.cols(), "mimo_convolve_direct");
  const Index length = inputs.rows();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(length, taps.outputs());
  if (length == 0) return out;
  for (Index j = -taps.half_length; j <= taps.half_length; ++j) {
    const auto& h = taps.at(j);
    for (Index k = 0; k < length; ++k)
      out.row(k).noalias() += (h * inputs.row(detail::clamp_index(k - j, length)).transpose()).transpose();
  }
  return out;
}

/// Same result as mimo_convolve_direct, computed block-wise with FFTs of
/// length n_fft (overlap-and-save, n_fft - 2N new outputs per block).
template <typename Scalar>
Matrix<Scalar> mimo_convolve_overlap_save(const Eigen::Ref<const Matrix<Scalar>>& inputs,
                                          const MimoTaps<Scalar>& taps, Index n_fft) {
  detail::check_taps(taps, inputs.cols(), "mimo_convolve_overlap_save");
  require(is_power_of_two(n_fft), "mimo_convolve_overlap_save: n_fft must be a power of two");
  const Index n = taps.half_length;
  require(n_fft > 2 * n, "mimo_convolve_overlap_save: n_fft must exceed 2N");

  const Index length = inputs.rows();
  const Index n_in = taps.inputs();
  const Index n_out = taps.outputs();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(length, n_out);
  if (length == 0) return out;

  // Causal form h'(l) = H(l - N), l = 0..2N, zero-padded to n_fft.
  std::vector<ComplexVector> spectra(static_cast<size_t>(n_out * n_in));
  for (Index m = 0; m < n_out; ++m) {
    for (Index mi = 0; mi < n_in; ++mi) {
      ComplexVector h = ComplexVector::Zero(n_fft);
      for (Index l = 0; l <= 2 * n; ++l) h[l] = taps.at(l - n)(m, mi);
      fft_inplace(h);
      spectra[static_cast<size_t>(m * n_in + mi)] = std::move(h);
    }
  }

  // Extended input xe(t) = x(clamp(t - N)), t = 0..K+2N-1; zero beyond.
  const Index extended = length + 2 * n;
  const Index step = n_fft - 2 * n;
  std::vector<ComplexVector> block(static_cast<size_t>(n_in), ComplexVector(n_fft));
  ComplexVector acc(n_fft);
  for (Index start = 0; start < length; start += step) {
    for (Index mi = 0; mi < n_in; ++mi) {
      auto& b = block[static_cast<size_t>(mi)];
      for (Index i = 0; i < n_fft; ++i) {
        const Index t = start + i;
        b[i] = t < extended ? cdouble(inputs(detail::clamp_index(t - n, length), mi)) : cdouble(0.0);
      }
      fft_inplace(b);
    }
    const Index produced = std::min(step, length - start);
    for (Index m = 0; m < n_out; ++m) {
      acc.setZero();
      for (Index mi = 0; mi < n_in; ++mi)
        acc.array() += spectra[static_cast<size_t>(m * n_in + mi)].array() * block[static_cast<size_t>(mi)].array();
      ifft_inplace(acc);
      for (Index i = 0; i < produced; ++i) out(start + i, m) = detail::from_complex<Scalar>(acc[2 * n + i]);
    }
  }
  return out;
}

}  // namespace sclink
