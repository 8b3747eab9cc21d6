#pragma once

// Shared helpers for the unit tests: seeded generators and brute-force
// reference implementations that the library code is checked against.

#include "sclink/convolution.hpp"
#include "sclink/types.hpp"


#include <cmath>
#include <random>

namespace testutil {

using namespace sclink;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng()); }
inline double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(rng()); }

inline ComplexVector random_complex(Index n) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = {gaussian(), gaussian()};
  return v;
}

inline ComplexMatrix random_complex(Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) m.col(c) = random_complex(rows);
  return m;
}

inline RealMatrix random_real(Index rows, Index cols) {
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = gaussian();
  return m;
}

// Textbook O(N^2) DFT.
inline ComplexVector direct_dft(const ComplexVector& x, int sign = -1) {
  const Index n = x.size();
  ComplexVector y = ComplexVector::Zero(n);
  for (Index k = 0; k < n; ++k)
    for (Index t = 0; t < n; ++t) {
      const double ang = sign * 2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      y[k] += x[t] * cdouble(std::cos(ang), std::sin(ang));
    }
  return y;
}

// Quadruple loop: y_m(k) = sum_j sum_a H_{m,a}(j) x_a(clamp(k - j)).
template <typename Scalar>
Matrix<Scalar> loop_convolve(const Matrix<Scalar>& x, const MimoTaps<Scalar>& taps) {
  const Index len = x.rows();
  Matrix<Scalar> y = Matrix<Scalar>::Zero(len, taps.outputs());
  for (Index k = 0; k < len; ++k)
    for (Index m = 0; m < taps.outputs(); ++m)
      for (Index j = -taps.half_length; j <= taps.half_length; ++j)
        for (Index a = 0; a < taps.inputs(); ++a) {
          Index src = k - j;
          if (src < 0) src = 0;
          if (src >= len) src = len - 1;
          y(k, m) += taps.at(j)(m, a) * x(src, a);
        }
  return y;
}

template <typename Scalar>
MimoTaps<Scalar> random_taps(Index outputs, Index inputs, Index half) {
  auto t = MimoTaps<Scalar>::zeros(outputs, inputs, half);
  for (auto& c : t.coeffs)
    for (Index r = 0; r < outputs; ++r)
      for (Index a = 0; a < inputs; ++a) {
        if constexpr (std::is_same_v<Scalar, double>) c(r, a) = gaussian();
        else c(r, a) = {gaussian(), gaussian()};
      }
  return t;
}

inline double max_abs_diff(const auto& a, const auto& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double rel_l2(const ComplexVector& a, const ComplexVector& b) { return (a - b).norm() / b.norm(); }

}  // namespace testutil
