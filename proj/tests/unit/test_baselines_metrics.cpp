#include "support.hpp"

#include <doctest.h>

#include "sclink/baselines.hpp"
#include "sclink/constellation.hpp"
#include "sclink/metrics.hpp"
#include "sclink/txchain.hpp"

using namespace sclink;
using namespace testutil;

namespace {

SymbolFrame frame(std::uint64_t seed, Index n, int m = 2) {
  SubcarrierPlan plan;
  plan.count = m;
  return generate_frame(seed, n, make_pas_64qam(mb_lambda_for_entropy(5.0)), plan, PilotSchedule{});
}

// Common Wiener phase walk applied to every stream, plus white noise.
SymbolFrame with_phase_walk(const SymbolFrame& f, double step_sigma, double noise, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  SymbolFrame out = f;
  double phi = 0.3;
  for (Index k = 0; k < f.length(); ++k) {
    phi += step_sigma * n01(g);
    for (Index i = 0; i < f.stream_count(); ++i)
      out.streams(k, i) = f.streams(k, i) * std::polar(1.0, phi) + noise * cdouble(n01(g), n01(g));
  }
  return out;
}

}  // namespace

TEST_CASE("complexity at the default operating point: 15.55 + 83 = 98.55") {
  const Complexity c = complexity(2048, 250, 4, 2);
  CHECK(c.nlpc == doctest::Approx(15.545).epsilon(1e-4));
  CHECK(std::abs(c.nlpc - 15.55) <= 0.01);
  CHECK(c.ppnc == 83.0);
  CHECK(std::abs(c.total() - 98.55) <= 0.01);
  // Hand evaluation: 0.5 * 2048/1548 * (11 + 12.5).
  CHECK(c.nlpc == doctest::Approx(0.5 * 2048.0 / 1548.0 * 23.5));
}

TEST_CASE("complexity: PPNC is linear in M and N_d, NLPC validates its block length") {
  for (Index m = 1; m <= 8; ++m)
    for (Index nd = 0; nd <= 5; ++nd) CHECK(ppnc_complexity(m, nd) == 4.0 * m * (2 * nd + 1) + 3.0);
  CHECK_THROWS_AS(nlpc_complexity(512, 256, 4), Error);
  CHECK_THROWS_AS(nlpc_complexity(1000, 250, 4), Error);
  CHECK_THROWS_AS(ppnc_complexity(0, 2), Error);
}

TEST_CASE("NLPC complexity versus block length has a single minimum") {
  // Overlap overhead falls with N_FFT while the FFT cost grows, so the cost
  // decreases to one minimum and increases after it.
  for (Index n_c : {16, 64, 250}) {
    std::vector<double> cost;
    for (Index n_fft = 1; n_fft <= (Index{1} << 22); n_fft *= 2)
      if (n_fft > 2 * n_c) cost.push_back(nlpc_complexity(n_fft, n_c, 4));
    size_t turns = 0;
    for (size_t i = 2; i < cost.size(); ++i)
      if ((cost[i] - cost[i - 1]) * (cost[i - 1] - cost[i - 2]) < 0) ++turns;
    CHECK(turns == 1);
    CHECK(cost[1] < cost[0]);
    CHECK(cost.back() > cost[cost.size() - 2]);
  }
  CHECK(nlpc_complexity(1024, 250, 4) > nlpc_complexity(2048, 250, 4));
  CHECK(nlpc_complexity(2048, 250, 4) > nlpc_complexity(4096, 250, 4));
}

TEST_CASE("SNR estimate excludes pilots and averages streams in the linear domain") {
  const SymbolFrame f = frame(1, 4096);
  ComplexMatrix r = *f.known_symbols;
  Index data = 0;
  for (Index k = 0; k < 4096; ++k) {
    if (f.pilot_mask[static_cast<size_t>(k)]) {
      r.row(k).setConstant(100.0);  // garbage on pilots must not matter
      continue;
    }
    ++data;
    r(k, 0) += 0.1;
    r(k, 1) += 0.01;
  }
  const SnrReport rep = estimate_snr(r, *f.known_symbols, f.pilot_mask);
  double signal0 = 0.0, signal1 = 0.0;
  for (Index k = 0; k < 4096; ++k)
    if (!f.pilot_mask[static_cast<size_t>(k)]) {
      signal0 += std::norm((*f.known_symbols)(k, 0));
      signal1 += std::norm((*f.known_symbols)(k, 1));
    }
  const double s0 = signal0 / (data * 0.01), s1 = signal1 / (data * 1e-4);
  CHECK(rep.stream_db[0] == doctest::Approx(linear_to_db(s0)));
  CHECK(rep.stream_db[1] == doctest::Approx(linear_to_db(s1)));
  CHECK(rep.stream_db[2] == kSnrCapDb);
  CHECK(rep.capped);
  CHECK(rep.aggregate_db ==
        doctest::Approx(linear_to_db((s0 + s1 + 2 * db_to_linear(kSnrCapDb)) / 4.0)));
  CHECK_THROWS_AS(estimate_snr(r.topRows(512), f.known_symbols->topRows(512),
                               std::vector<bool>(f.pilot_mask.begin(), f.pilot_mask.begin() + 512)),
                  Error);
  CHECK_THROWS_AS(estimate_snr(r, f.known_symbols->leftCols(2), f.pilot_mask), Error);
}

TEST_CASE("mean phase removal undoes a constant rotation per stream") {
  const SymbolFrame f = frame(2, 1024);
  SymbolFrame r = f;
  for (Index i = 0; i < 4; ++i) r.streams.col(i) *= std::polar(1.0, 0.7 * i - 1.0);
  CHECK(max_abs_diff(mean_phase_removal(r, *f.known_symbols).streams, f.streams) < 1e-12);
  r.streams.col(1).setZero();
  CHECK_THROWS_AS(mean_phase_removal(r, *f.known_symbols), Error);
}

TEST_CASE("Gaussian CPR kernel width and validity") {
  CHECK(gaussian_kernel_sigma(1e-3) == doctest::Approx(1.0 / (2 * kPi * 1e-3)));
  const SymbolFrame f = frame(3, 2048);
  CHECK_THROWS_AS(gaussian_cpr(f, PilotSchedule{}, 0.05), Error);  // 4 sigma < P
  CHECK_THROWS_AS(gaussian_cpr(f, PilotSchedule{}, 0.0), Error);
  SymbolFrame r = f;
  r.streams *= std::polar(1.0, -2.0);
  CHECK(max_abs_diff(gaussian_cpr(r, PilotSchedule{}, 1e-3).streams, f.streams) < 1e-12);
}

TEST_CASE("Gaussian CPR tracks a phase walk that mean removal cannot") {
  const SymbolFrame f = frame(4, 1 << 14);
  const SymbolFrame r = with_phase_walk(f, 0.01, 0.05, 5);
  const auto& x = *f.known_symbols;
  const double mpr = estimate_snr(mean_phase_removal(r, x).streams, x, f.pilot_mask).aggregate_db;
  const double cpr = estimate_snr(gaussian_cpr(r, PilotSchedule{}, 3e-3).streams, x, f.pilot_mask).aggregate_db;
  CHECK(cpr > mpr + 3.0);
}

TEST_CASE("CPR bandwidth search returns the grid maximizer, smaller on ties") {
  const SymbolFrame f = frame(6, 1 << 13);
  SymbolFrame r = with_phase_walk(f, 0.01, 0.05, 7);
  const std::vector<double> grid = {5e-3, 1e-4, 1e-3, 3e-4};
  const double best = optimize_cpr_bandwidth(r, PilotSchedule{}, grid);
  double best_snr = -1e9;
  for (double bw : grid)
    best_snr = std::max(best_snr, estimate_snr(gaussian_cpr(r, PilotSchedule{}, bw).streams, *f.known_symbols,
                                               f.pilot_mask).aggregate_db);
  CHECK(estimate_snr(gaussian_cpr(r, PilotSchedule{}, best).streams, *f.known_symbols, f.pilot_mask).aggregate_db ==
        best_snr);
  // Noiseless constant phase: every bandwidth is perfect, the smallest wins.
  SymbolFrame clean = f;
  clean.streams *= std::polar(1.0, 0.2);
  CHECK(optimize_cpr_bandwidth(clean, PilotSchedule{}, grid) == 1e-4);
  CHECK_THROWS_AS(optimize_cpr_bandwidth(clean, PilotSchedule{}, {}), Error);
}
