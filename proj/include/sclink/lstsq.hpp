#pragma once

#include "sclink/types.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace sclink {

/// Solves (A + lambda I) X = B for Hermitian positive semi-definite A with
/// lambda = ridge * trace(A) / dim (ridge itself when the trace vanishes).
/// With ridge == 0 a numerically singular A raises an Error.
template <typename Scalar>
Matrix<Scalar> solve_normal_equations(const Matrix<Scalar>& a, const Matrix<Scalar>& b, double ridge,
                                      const std::string& who) {
  require(a.rows() == a.cols() && a.rows() == b.rows(), who + ": normal equations have mismatched shapes");
  const Index dim = a.rows();
  const double trace = a.diagonal().real().sum();
  Matrix<Scalar> regularized = a;
  if (ridge > 0.0) {
    const double lambda = trace > 0.0 ? ridge * trace / static_cast<double>(dim) : ridge;
    regularized.diagonal().array() += Scalar(lambda);
  }
  Eigen::LLT<Matrix<Scalar>> llt(regularized);
  bool singular = llt.info() != Eigen::Success;
  if (!singular) {
    const auto pivots = llt.matrixLLT().diagonal().real().cwiseAbs2();
    const double scale = regularized.diagonal().real().cwiseAbs().maxCoeff();
    singular = !(pivots.minCoeff() > 1e-11 * scale);
  }
  if (singular)
    throw Error(who + ": normal matrix is rank deficient; use a ridge > 0");
  return llt.solve(b);
}

}  // namespace sclink
