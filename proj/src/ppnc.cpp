#include "sclink/jscpr.hpp"
#include "sclink/lstsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sclink {

void PpncFilterBank::validate() const {
  require(period >= 2, "PpncFilterBank: period must be >= 2");
  require(static_cast<Index>(filters.size()) == period, "PpncFilterBank: need one filter per offset");
  for (const auto& f : filters) {
    require(f.half_length == half_length && static_cast<Index>(f.coeffs.size()) == f.span(),
            "PpncFilterBank: filter half length mismatch");
    require(f.outputs() == f.inputs() && f.outputs() == streams() && f.outputs() > 0,
            "PpncFilterBank: filters must all be 2M x 2M");
    require(f.all_finite(), "PpncFilterBank: non-finite coefficients");
  }
}

ComplexMatrix pilot_phasors(const SymbolFrame& frame, const PilotSchedule& schedule, Index* samples_read) {
  schedule.validate();
  const Index count = schedule.pilot_count(frame.length());
  ComplexMatrix phi(count, frame.stream_count());
  Index reads = 0;
  for (Index n = 0; n < count; ++n) {
    const cdouble pilot = schedule.pilot_value(n);
    const Index k = schedule.offset + n * schedule.period;
    for (Index i = 0; i < frame.stream_count(); ++i) {
      phi(n, i) = frame.streams(k, i) / pilot;
      ++reads;
    }
  }
  if (samples_read) *samples_read = reads;
  return phi;
}

namespace {

struct SlotIndex {
  Index block;   // n, may be -1 before the first pilot
  Index offset;  // p in [0, P)
};

SlotIndex slot_of(Index k, const PilotSchedule& s) {
  const Index rel = k - s.offset;
  Index n = rel >= 0 ? rel / s.period : -((-rel + s.period - 1) / s.period);
  return {n, rel - n * s.period};
}

// u(n) stacked as (j + N_d) * 2M + l  ->  phi_l(clamp(n - j)).
void regressor(const ComplexMatrix& phi, Index n, Index half, ComplexVector& u) {
  const Index streams = phi.cols();
  const Index last = phi.rows() - 1;
  for (Index j = -half; j <= half; ++j) {
    const Index src = std::clamp<Index>(n - j, 0, last);
    u.segment((j + half) * streams, streams) = phi.row(src).transpose();
  }
}

}  // namespace

PpncResult ppnc_apply(const SymbolFrame& frame, const PilotSchedule& schedule, const PpncFilterBank& bank) {
  bank.validate();
  require(bank.period == schedule.period, "ppnc_apply: bank period differs from the pilot period");
  require(bank.streams() == frame.stream_count(), "ppnc_apply: bank dimension differs from the stream count");

  PpncResult out;
  const ComplexMatrix phi = pilot_phasors(frame, schedule, &out.phasor_reads);
  require(phi.rows() > 0, "ppnc_apply: frame contains no pilots");

  const Index k_sym = frame.length();
  const Index streams = frame.stream_count();
  const Index half = bank.half_length;
  out.psi.resize(k_sym, streams);
  out.z = frame;
  ComplexVector u(streams * (2 * half + 1));
  Index cached_block = std::numeric_limits<Index>::min();
  for (Index k = 0; k < k_sym; ++k) {
    const auto [n, p] = slot_of(k, schedule);
    if (n != cached_block) {
      regressor(phi, n, half, u);
      cached_block = n;
    }
    const auto& filter = bank.filters[static_cast<size_t>(p)];
    ComplexVector psi = ComplexVector::Zero(streams);
    for (Index j = -half; j <= half; ++j) psi.noalias() += filter.at(j) * u.segment((j + half) * streams, streams);
    out.psi.row(k) = psi.transpose();
    for (Index i = 0; i < streams; ++i) out.z.streams(k, i) *= std::polar(1.0, -std::arg(psi[i]));
  }
  return out;
}

PpncFilterBank ppnc_train(const std::vector<SymbolFrame>& frames, const PilotSchedule& schedule,
                          const PpncTrainOptions& options) {
  require(!frames.empty(), "ppnc_train: no training frames");
  require(options.half_length >= 0, "ppnc_train: negative half length");
  schedule.validate();
  const Index streams = frames.front().stream_count();
  const Index half = options.half_length;
  const Index dim = streams * (2 * half + 1);
  const Index period = schedule.period;

  // One normal-equation system per (offset, output stream); the systems of
  // different outputs only differ when rows are energy weighted.
  const Index systems = options.energy_weighted ? streams : 1;
  auto sys = [&](Index p, Index i) { return static_cast<size_t>(p * systems + (options.energy_weighted ? i : 0)); };
  std::vector<ComplexMatrix> gram(static_cast<size_t>(period * systems), ComplexMatrix::Zero(dim, dim));
  std::vector<ComplexMatrix> rhs(static_cast<size_t>(period), ComplexMatrix::Zero(dim, streams));
  std::vector<Index> rows(static_cast<size_t>(period), 0);

  ComplexVector u(dim);
  ComplexVector target(streams);
  RealVector weight(streams);
  for (const auto& f : frames) {
    require(f.stream_count() == streams, "ppnc_train: frames disagree on the stream count");
    require(f.known_symbols.has_value(), "ppnc_train: training frame lacks known symbols");
    const auto& x = *f.known_symbols;
    const ComplexMatrix phi = pilot_phasors(f, schedule);
    require(phi.rows() > 0, "ppnc_train: training frame contains no pilots");
    for (Index k = schedule.offset; k < f.length(); ++k) {
      const auto [n, p] = slot_of(k, schedule);
      regressor(phi, n, half, u);
      for (Index i = 0; i < streams; ++i) {
        require(std::abs(x(k, i)) > 0.0, "ppnc_train: zero known symbol");
        target[i] = f.streams(k, i) / x(k, i);
        weight[i] = options.energy_weighted ? std::norm(x(k, i)) : 1.0;
      }
      const auto slot = static_cast<size_t>(p);
      if (options.energy_weighted) {
        for (Index i = 0; i < streams; ++i) {
          gram[sys(p, i)].noalias() += weight[i] * (u.conjugate() * u.transpose());
          rhs[slot].col(i).noalias() += (weight[i] * target[i]) * u.conjugate();
        }
      } else {
        gram[sys(p, 0)].noalias() += u.conjugate() * u.transpose();
        rhs[slot].noalias() += u.conjugate() * target.transpose();
      }
      ++rows[slot];
    }
  }

  PpncFilterBank bank;
  bank.period = period;
  bank.half_length = half;
  bank.filters.reserve(static_cast<size_t>(period));
  for (Index p = 0; p < period; ++p) {
    const auto slot = static_cast<size_t>(p);
    require(rows[slot] >= dim, "ppnc_train: too few training rows for offset " + std::to_string(p));
    ComplexMatrix solution(dim, streams);
    auto solve = [&](const ComplexMatrix& a, const ComplexMatrix& b, double ridge) -> ComplexMatrix {
      if (options.real_taps) {
        const RealMatrix ar = a.real();
        const RealMatrix br = b.real();
        return solve_normal_equations<double>(ar, br, ridge, "ppnc_train").cast<cdouble>();
      }
      return solve_normal_equations<cdouble>(a, b, ridge, "ppnc_train");
    };
    auto solve_with_fallback = [&](const ComplexMatrix& a, const ComplexMatrix& b) -> ComplexMatrix {
      try {
        return solve(a, b, options.ridge);
      } catch (const Error&) {
        if (options.ridge > 0.0 || options.fallback_ridge <= 0.0) throw;
        return solve(a, b, options.fallback_ridge);
      }
    };
    if (options.energy_weighted) {
      for (Index i = 0; i < streams; ++i)
        solution.col(i) = solve_with_fallback(gram[sys(p, i)], rhs[slot].col(i));
    } else {
      solution = solve_with_fallback(gram[sys(p, 0)], rhs[slot]);
    }
    auto taps = ComplexMimoTaps::zeros(streams, streams, half);
    for (Index j = -half; j <= half; ++j)
      for (Index i = 0; i < streams; ++i)
        for (Index l = 0; l < streams; ++l) taps.at(j)(i, l) = solution((j + half) * streams + l, i);
    bank.filters.push_back(std::move(taps));
  }
  return bank;
}

}  // namespace sclink
