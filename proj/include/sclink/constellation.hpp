#pragma once

#include "sclink/types.hpp"

#include <array>

namespace sclink {

/// Square 64-QAM with Maxwell-Boltzmann probabilities p ~ exp(-lambda |a|^2)
/// over the unnormalized odd-integer grid a; points scaled to unit mean energy.
struct ConstellationSpec {
  std::array<cdouble, 64> points{};
  std::array<double, 64> probabilities{};
  double mb_lambda = 0.0;

  double entropy_bits() const;
  double mean_energy() const;
};

ConstellationSpec make_pas_64qam(double mb_lambda);

/// Entropy (bit/2D) of the MB-shaped 64-QAM with parameter lambda.
double mb_entropy(double mb_lambda);

/// Bisection for lambda with mb_entropy(lambda) == target_bits (to 1e-9 bit).
/// Attainable targets lie in (2, 6].
double mb_lambda_for_entropy(double target_bits);

}  // namespace sclink
