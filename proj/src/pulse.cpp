#include "sclink/pulse.hpp"

#include <cmath>

namespace sclink {

namespace {

// Continuous-time RRC at t (in symbol periods), peak-normalized to T = 1.
double rrc_at(double t, double beta) {
  if (t == 0.0) return 1.0 - beta + 4.0 * beta / kPi;
  const double singular = 1.0 / (4.0 * beta);
  if (std::abs(std::abs(t) - singular) < 1e-12) {
    return beta / std::sqrt(2.0) *
           ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta)) +
            (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta)));
  }
  const double num = std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
  const double den = kPi * t * (1.0 - 16.0 * beta * beta * t * t);
  return num / den;
}

}  // namespace

RealVector rrc_taps(double roll_off, int samples_per_symbol, int span_symbols) {
  require(roll_off > 0.0 && roll_off <= 1.0, "rrc_taps: roll_off must be in (0, 1]");
  require(samples_per_symbol >= 2, "rrc_taps: samples_per_symbol must be >= 2");
  require(span_symbols > 0 && span_symbols % 2 == 0, "rrc_taps: span_symbols must be positive and even");

  const Index n = static_cast<Index>(span_symbols) * samples_per_symbol + 1;
  const Index center = n / 2;
  RealVector h(n);
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - center) / samples_per_symbol;
    h[i] = rrc_at(t, roll_off);
  }
  h /= h.norm();
  return h;
}

double rrc_response(double f, double symbol_rate, double roll_off) {
  const double af = std::abs(f) / symbol_rate;
  const double lo = 0.5 * (1.0 - roll_off);
  const double hi = 0.5 * (1.0 + roll_off);
  if (af <= lo) return 1.0;
  if (af > hi) return 0.0;
  return std::sqrt(0.5 * (1.0 + std::cos(kPi / roll_off * (af - lo))));
}

}  // namespace sclink
