#include "sclink/constellation.hpp"

#include <cmath>

namespace sclink {

namespace {

constexpr std::array<double, 8> kLevels = {-7, -5, -3, -1, 1, 3, 5, 7};

std::array<double, 64> mb_weights(double lambda) {
  std::array<double, 64> p{};
  double total = 0.0;
  // Subtract the minimum energy (2) so large lambda does not underflow.
  for (int i = 0; i < 8; ++i)
    for (int q = 0; q < 8; ++q) {
      const double e = kLevels[i] * kLevels[i] + kLevels[q] * kLevels[q];
      const double w = std::exp(-lambda * (e - 2.0));
      p[static_cast<size_t>(8 * i + q)] = w;
      total += w;
    }
  for (auto& v : p) v /= total;
  return p;
}

}  // namespace

double ConstellationSpec::entropy_bits() const {
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double ConstellationSpec::mean_energy() const {
  double e = 0.0;
  for (size_t i = 0; i < points.size(); ++i) e += probabilities[i] * std::norm(points[i]);
  return e;
}

ConstellationSpec make_pas_64qam(double mb_lambda) {
  require(mb_lambda >= 0.0 && std::isfinite(mb_lambda), "make_pas_64qam: lambda must be finite and >= 0");
  ConstellationSpec c;
  c.mb_lambda = mb_lambda;
  c.probabilities = mb_weights(mb_lambda);
  double energy = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int q = 0; q < 8; ++q) {
      const auto idx = static_cast<size_t>(8 * i + q);
      c.points[idx] = {kLevels[i], kLevels[q]};
      energy += c.probabilities[idx] * std::norm(c.points[idx]);
    }
  const double scale = 1.0 / std::sqrt(energy);
  for (auto& pt : c.points) pt *= scale;
  return c;
}

double mb_entropy(double mb_lambda) {
  double h = 0.0;
  for (double p : mb_weights(mb_lambda))
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double mb_lambda_for_entropy(double target_bits) {
  require(target_bits > 2.0 && target_bits <= 6.0,
          "mb_lambda_for_entropy: target entropy must lie in (2, 6] bit/2D for 64-QAM");
  if (target_bits >= 6.0 - 1e-12) return 0.0;
  double lo = 0.0;
  double hi = 1e-3;
  while (mb_entropy(hi) > target_bits) {
    hi *= 2.0;
    require(hi < 1e6, "mb_lambda_for_entropy: target not attainable");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mb_entropy(mid) > target_bits) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sclink
