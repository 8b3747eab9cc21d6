#include "support.hpp"

#include <doctest.h>

#include "sclink/constellation.hpp"
#include "sclink/filter_io.hpp"
#include "sclink/jscpr.hpp"

#include <Eigen/QR>

#include <filesystem>
#include <fstream>

using namespace sclink;
using namespace testutil;

namespace {

SymbolFrame shaped_frame(std::uint64_t seed, Index n, int m, const PilotSchedule& pilots = PilotSchedule{}) {
  SubcarrierPlan plan;
  plan.count = m;
  return generate_frame(seed, n, make_pas_64qam(mb_lambda_for_entropy(5.0)), plan, pilots);
}

// Rotates subcarrier m of `frame` (both polarizations) by theta(k, m).
SymbolFrame rotate_subcarriers(const SymbolFrame& frame, const RealMatrix& theta) {
  SymbolFrame out = frame;
  for (Index m = 0; m < theta.cols(); ++m)
    for (Index k = 0; k < frame.length(); ++k) {
      out.streams(k, 2 * m) *= std::polar(1.0, theta(k, m));
      out.streams(k, 2 * m + 1) *= std::polar(1.0, theta(k, m));
    }
  return out;
}

template <typename M>
auto pseudo_inverse_solve(const M& x, const M& y) {
  return x.completeOrthogonalDecomposition().solve(y).eval();
}

// Explicit regression for NLPC: rows k, columns (j, a) = I_a(clamp(k - j)),
// columns and target centered (the intercept).
RealMatrix nlpc_oracle(const SymbolFrame& f, Index half) {
  const RealMatrix inten = compute_intensities(f);
  const RealMatrix target = nlpc_target_phase(f);
  const Index k_sym = f.length(), m = inten.cols();
  RealMatrix x(k_sym, m * (2 * half + 1));
  for (Index k = 0; k < k_sym; ++k)
    for (Index j = -half; j <= half; ++j)
      for (Index a = 0; a < m; ++a)
        x(k, (j + half) * m + a) = inten(std::clamp<Index>(k - j, 0, k_sym - 1), a);
  x.rowwise() -= x.colwise().mean();
  RealMatrix t = target;
  t.rowwise() -= t.colwise().mean();
  return pseudo_inverse_solve(x, t);
}

}  // namespace

TEST_CASE("intensities sum both polarizations of a subcarrier") {
  const SymbolFrame f = shaped_frame(1, 64, 3);
  const RealMatrix i = compute_intensities(f);
  REQUIRE(i.cols() == 3);
  for (Index k = 0; k < 64; ++k)
    CHECK(i(k, 1) == doctest::Approx(std::norm(f.streams(k, 2)) + std::norm(f.streams(k, 3))));
}

TEST_CASE("NLPC trainer matches the dense pseudo-inverse on small instances") {
  for (int trial = 0; trial < 5; ++trial) {
    const int m = static_cast<int>(integer(1, 2));
    const Index half = integer(1, 3);
    SymbolFrame f = shaped_frame(10 + trial, 224, m);
    f.streams += 0.2 * random_complex(f.length(), f.stream_count());
    NlpcTrainOptions o;
    o.half_length = half;
    o.n_fft = 16;
    o.ridge = 0.0;
    const NlpcFilter filt = nlpc_train({f}, o);
    const RealMatrix sol = nlpc_oracle(f, half);
    double worst = 0.0;
    for (Index j = -half; j <= half; ++j)
      for (Index out = 0; out < m; ++out)
        for (Index a = 0; a < m; ++a)
          worst = std::max(worst, std::abs(filt.taps.at(j)(out, a) - sol((j + half) * m + a, out)));
    CHECK(worst < 1e-8);
    CHECK(max_abs_diff(filt.mean_intensity, RealVector(compute_intensities(f).colwise().mean().transpose())) < 1e-12);
  }
}

TEST_CASE("NLPC recovers a planted intensity-to-phase filter") {
  const int m = 4;
  const Index half = 6;
  const SymbolFrame x = shaped_frame(21, 4096, m);
  auto c0 = random_taps<double>(m, m, half);
  for (auto& c : c0.coeffs) c *= 0.02;
  RealMatrix centered = compute_intensities(x);
  const RealVector mean = centered.colwise().mean();
  centered.rowwise() -= mean.transpose();
  const RealMatrix theta = mimo_convolve_direct<double>(centered, c0);
  const SymbolFrame r = rotate_subcarriers(x, theta);

  NlpcTrainOptions o;
  o.half_length = half;
  o.n_fft = 64;
  o.ridge = 0.0;
  const NlpcFilter filt = nlpc_train({r}, o);
  for (Index j = -half; j <= half; ++j) CHECK(max_abs_diff(filt.taps.at(j), c0.at(j)) < 1e-6);

  // Applying the trained filter undoes the planted rotation up to the
  // constant offset carried by the target mean.
  const NlpcResult res = nlpc_apply(r, filt);
  CHECK(max_abs_diff(res.theta, theta) < 1e-6);
  CHECK(max_abs_diff(res.y.streams, x.streams) < 1e-5);
}

TEST_CASE("NLPC on an undistorted frame learns a zero filter") {
  const SymbolFrame x = shaped_frame(22, 4096, 2);
  NlpcTrainOptions o;
  o.half_length = 4;
  o.n_fft = 16;
  const NlpcFilter filt = nlpc_train({x}, o);
  for (const auto& c : filt.taps.coeffs) CHECK(c.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("NLPC without ridge reports a rank-deficient problem") {
  SymbolFrame f = shaped_frame(23, 512, 2);
  f.streams.setConstant(cdouble(0.6, 0.1));  // constant intensities
  f.known_symbols = f.streams;
  NlpcTrainOptions o;
  o.half_length = 2;
  o.n_fft = 16;
  o.ridge = 0.0;
  CHECK_THROWS_WITH_AS(nlpc_train({f}, o), doctest::Contains("ridge > 0"), Error);
  o.ridge = 1e-6;
  CHECK_NOTHROW(nlpc_train({f}, o));
}

TEST_CASE("NLPC rotation is identical on both polarizations and preserves modulus") {
  const SymbolFrame f = shaped_frame(24, 2048, 4);
  NlpcFilter filt;
  filt.taps = random_taps<double>(4, 4, 8);
  filt.n_fft = 64;
  filt.mean_intensity = RealVector::Constant(4, 2.0);
  const NlpcResult res = nlpc_apply(f, filt);
  for (Index k = 0; k < f.length(); ++k)
    for (Index m = 0; m < 4; ++m) {
      const cdouble rx = res.y.streams(k, 2 * m) / f.streams(k, 2 * m);
      const cdouble ry = res.y.streams(k, 2 * m + 1) / f.streams(k, 2 * m + 1);
      CHECK(std::abs(rx - ry) < 1e-12);
      CHECK(std::abs(std::abs(res.y.streams(k, 2 * m)) - std::abs(f.streams(k, 2 * m))) < 1e-12);
      CHECK(std::abs(rx - std::polar(1.0, -res.theta(k, m))) < 1e-12);
    }
  filt.mean_intensity = RealVector::Zero(3);
  CHECK_THROWS_AS(nlpc_apply(f, filt), Error);
}

TEST_CASE("pilot phasors read only pilot instants") {
  PilotSchedule s;
  s.period = 8;
  s.offset = 2;
  const SymbolFrame f = shaped_frame(30, 256, 2, s);
  Index reads = 0;
  const ComplexMatrix phi = pilot_phasors(f, s, &reads);
  CHECK(phi.rows() == 32);
  CHECK(reads == 32 * 4);
  for (Index n = 0; n < 32; ++n) CHECK(std::abs(phi(n, 0) - 1.0) < 1e-15);
}

TEST_CASE("PPNC trainer matches the dense pseudo-inverse on a small instance") {
  PilotSchedule s;
  s.period = 4;
  const Index half = 1;
  SymbolFrame f = shaped_frame(31, 512, 1, s);
  f.streams += 0.1 * random_complex(512, 2);
  PpncTrainOptions o;
  o.half_length = half;
  o.ridge = 0.0;
  const PpncFilterBank bank = ppnc_train({f}, s, o);
  const ComplexMatrix phi = pilot_phasors(f, s);
  const Index streams = 2, npil = phi.rows();
  for (Index p = 0; p < 4; ++p) {
    std::vector<Index> ks;
    for (Index k = p; k < 512; k += 4) ks.push_back(k);
    ComplexMatrix u(static_cast<Index>(ks.size()), streams * (2 * half + 1));
    ComplexMatrix t(static_cast<Index>(ks.size()), streams);
    for (size_t r = 0; r < ks.size(); ++r) {
      const Index k = ks[r], n = k / 4;
      for (Index j = -half; j <= half; ++j)
        for (Index l = 0; l < streams; ++l)
          u(static_cast<Index>(r), (j + half) * streams + l) = phi(std::clamp<Index>(n - j, 0, npil - 1), l);
      for (Index i = 0; i < streams; ++i) t(static_cast<Index>(r), i) = f.streams(k, i) / (*f.known_symbols)(k, i);
    }
    const ComplexMatrix sol = pseudo_inverse_solve(u, t);
    double worst = 0.0;
    for (Index j = -half; j <= half; ++j)
      for (Index i = 0; i < streams; ++i)
        for (Index l = 0; l < streams; ++l)
          worst = std::max(worst, std::abs(bank.filters[static_cast<size_t>(p)].at(j)(i, l) -
                                           sol((j + half) * streams + l, i)));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("energy-weighted PPNC matches the row-scaled pseudo-inverse") {
  PilotSchedule s;
  s.period = 4;
  const Index half = 1;
  SymbolFrame f = shaped_frame(37, 512, 1, s);
  f.streams += 0.1 * random_complex(512, 2);
  PpncTrainOptions o;
  o.half_length = half;
  o.ridge = 0.0;
  o.energy_weighted = true;
  const PpncFilterBank bank = ppnc_train({f}, s, o);
  const ComplexMatrix phi = pilot_phasors(f, s);
  const auto& x = *f.known_symbols;
  const Index streams = 2, npil = phi.rows();
  for (Index p = 0; p < 4; ++p) {
    std::vector<Index> ks;
    for (Index k = p; k < 512; k += 4) ks.push_back(k);
    for (Index i = 0; i < streams; ++i) {
      // min sum |y - psi x|^2: scale each regressor row by x_i(k), target y_i(k).
      ComplexMatrix u(static_cast<Index>(ks.size()), streams * (2 * half + 1));
      ComplexMatrix t(static_cast<Index>(ks.size()), 1);
      for (size_t r = 0; r < ks.size(); ++r) {
        const Index k = ks[r], n = k / 4;
        for (Index j = -half; j <= half; ++j)
          for (Index l = 0; l < streams; ++l)
            u(static_cast<Index>(r), (j + half) * streams + l) =
                x(k, i) * phi(std::clamp<Index>(n - j, 0, npil - 1), l);
        t(static_cast<Index>(r), 0) = f.streams(k, i);
      }
      const ComplexMatrix sol = pseudo_inverse_solve(u, t);
      double worst = 0.0;
      for (Index j = -half; j <= half; ++j)
        for (Index l = 0; l < streams; ++l)
          worst = std::max(worst, std::abs(bank.filters[static_cast<size_t>(p)].at(j)(i, l) -
                                           sol((j + half) * streams + l, 0)));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("PPNC removes a global constant phase exactly") {
  const SymbolFrame x = shaped_frame(32, 4096, 2);
  SymbolFrame y = x;
  y.streams *= std::polar(1.0, 1.1);
  PpncTrainOptions o;
  const PpncFilterBank bank = ppnc_train({y}, PilotSchedule{}, o);
  const PpncResult res = ppnc_apply(y, PilotSchedule{}, bank);
  CHECK(max_abs_diff(res.z.streams, x.streams) < 1e-9);
  // A constant phasor field is interpolated perfectly, up to the ridge
  // shrinkage of the (rank-one) normal matrix.
  for (Index k = 0; k < 4096; ++k)
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(res.psi(k, i) - std::polar(1.0, 1.1)) < 1e-6);
}

TEST_CASE("PPNC center-tap identity bank returns the pilot phasor at pilot instants") {
  const SymbolFrame x = shaped_frame(33, 1024, 2);
  SymbolFrame y = x;
  y.streams += 0.3 * random_complex(1024, 4);
  PpncFilterBank bank;
  bank.period = 32;
  bank.half_length = 2;
  bank.filters.assign(32, ComplexMimoTaps::zeros(4, 4, 2));
  bank.filters[0].at(0).setIdentity();
  const PpncResult res = ppnc_apply(y, PilotSchedule{}, bank);
  const ComplexMatrix phi = pilot_phasors(y, PilotSchedule{});
  for (Index n = 0; n < phi.rows(); ++n)
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(res.psi(32 * n, i) - phi(n, i)) < 1e-15);
  // Moduli are untouched wherever psi is nonzero.
  for (Index k = 0; k < 1024; k += 32)
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(std::abs(res.z.streams(k, i)) - std::abs(y.streams(k, i))) < 1e-12);
}

TEST_CASE("PPNC recovers a planted bank within the noise-scaled bound") {
  // Phasor field driven by the pilot phasors through a known bank.
  PilotSchedule s;
  s.period = 8;
  const Index half = 1, streams = 2;
  const SymbolFrame x = shaped_frame(34, 1 << 15, 1, s);
  std::vector<ComplexMimoTaps> planted;
  for (int p = 0; p < 8; ++p) {
    auto t = ComplexMimoTaps::zeros(streams, streams, half);
    for (auto& c : t.coeffs)
      for (Index r = 0; r < streams; ++r)
        for (Index l = 0; l < streams; ++l) c(r, l) = cdouble(gaussian(), gaussian()) * 0.3;
    planted.push_back(t);
  }
  // Pilots see an i.i.d. random phasor; data symbols see the planted
  // response plus white noise.
  SymbolFrame y = x;
  const Index npil = s.pilot_count(y.length());
  ComplexMatrix phi(npil, streams);
  for (Index n = 0; n < npil; ++n)
    for (Index l = 0; l < streams; ++l) phi(n, l) = std::polar(1.0, uniform(-kPi, kPi));
  const double noise = 0.01;
  for (Index k = 0; k < y.length(); ++k) {
    const Index n = k / 8, p = k % 8;
    if (p == 0) {
      for (Index l = 0; l < streams; ++l) y.streams(k, l) = x.streams(k, l) * phi(n, l);
      continue;
    }
    ComplexVector psi = ComplexVector::Zero(streams);
    for (Index j = -half; j <= half; ++j)
      psi += planted[static_cast<size_t>(p)].at(j) * phi.row(std::clamp<Index>(n - j, 0, npil - 1)).transpose();
    for (Index i = 0; i < streams; ++i)
      y.streams(k, i) = x.streams(k, i) * (psi[i] + noise * cdouble(gaussian(), gaussian()));
  }
  PpncTrainOptions o;
  o.half_length = half;
  o.ridge = 0.0;
  const PpncFilterBank bank = ppnc_train({y}, s, o);
  // 4096 rows per offset, 6 unknowns: coefficient error ~ noise / sqrt(rows).
  const double bound = 6.0 * noise * std::sqrt(2.0 / 4096.0);
  for (int p = 1; p < 8; ++p)
    for (Index j = -half; j <= half; ++j)
      CHECK(max_abs_diff(bank.filters[static_cast<size_t>(p)].at(j), planted[static_cast<size_t>(p)].at(j)) < bound);
}

TEST_CASE("PPNC ridge fallback and argument checks") {
  SymbolFrame y = shaped_frame(35, 1024, 1);
  y.streams.col(1) = y.streams.col(0);  // collinear streams
  y.known_symbols->col(1) = y.known_symbols->col(0);
  PpncTrainOptions o;
  o.ridge = 0.0;
  o.fallback_ridge = 0.0;
  CHECK_THROWS_WITH_AS(ppnc_train({y}, PilotSchedule{}, o), doctest::Contains("ridge"), Error);
  o.fallback_ridge = 1e-6;
  CHECK_NOTHROW(ppnc_train({y}, PilotSchedule{}, o));

  PpncFilterBank bank = ppnc_train({shaped_frame(36, 1024, 1)}, PilotSchedule{}, PpncTrainOptions{});
  PilotSchedule other;
  other.period = 16;
  CHECK_THROWS_AS(ppnc_apply(y, other, bank), Error);
  CHECK_THROWS_AS(ppnc_apply(shaped_frame(37, 1024, 2), PilotSchedule{}, bank), Error);
}

TEST_CASE("real-tap PPNC option produces real coefficients") {
  SymbolFrame y = shaped_frame(38, 4096, 1);
  y.streams += 0.1 * random_complex(4096, 2);
  PpncTrainOptions o;
  o.real_taps = true;
  const PpncFilterBank bank = ppnc_train({y}, PilotSchedule{}, o);
  for (const auto& f : bank.filters)
    for (const auto& c : f.coeffs) CHECK(c.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cascade composition and stage bypass") {
  const SymbolFrame x = shaped_frame(40, 4096, 2);
  SymbolFrame r = x;
  r.streams *= std::polar(1.0, 0.4);
  r.streams += 0.05 * random_complex(4096, 4);
  NlpcTrainOptions no;
  no.half_length = 3;
  no.n_fft = 32;
  const NlpcFilter nlpc = nlpc_train({r}, no);
  const PpncFilterBank ppnc = ppnc_train({nlpc_apply(r, nlpc).y}, PilotSchedule{}, PpncTrainOptions{});

  CHECK(max_abs_diff(jscpr_run(r, nullptr, nullptr, PilotSchedule{}, {false, false}).streams, r.streams) == 0.0);
  CHECK(max_abs_diff(jscpr_run(r, nullptr, &ppnc, PilotSchedule{}, {false, true}).streams,
                     ppnc_apply(r, PilotSchedule{}, ppnc).z.streams) == 0.0);
  CHECK(max_abs_diff(jscpr_run(r, &nlpc, nullptr, PilotSchedule{}, {true, false}).streams,
                     nlpc_apply(r, nlpc).y.streams) == 0.0);
  CHECK(max_abs_diff(jscpr_run(r, &nlpc, &ppnc, PilotSchedule{}).streams,
                     ppnc_apply(nlpc_apply(r, nlpc).y, PilotSchedule{}, ppnc).z.streams) == 0.0);
  CHECK_THROWS_AS(jscpr_run(r, nullptr, &ppnc, PilotSchedule{}), Error);
}

TEST_CASE("filter file round trip and corruption handling") {
  const auto dir = std::filesystem::temp_directory_path() / "sclink_filter_test";
  std::filesystem::create_directories(dir);
  JscprFilters f;
  f.nlpc.taps = random_taps<double>(2, 2, 3);
  f.nlpc.n_fft = 16;
  f.nlpc.mean_intensity = RealVector::Random(2);
  f.ppnc.period = 4;
  f.ppnc.half_length = 1;
  for (int p = 0; p < 4; ++p) f.ppnc.filters.push_back(random_taps<cdouble>(4, 4, 1));
  const auto path = dir / "ok.jscpr";
  write_filters(path, f);
  const JscprFilters g = read_filters(path);
  CHECK(g.nlpc.n_fft == 16);
  for (Index j = -3; j <= 3; ++j) CHECK(max_abs_diff(g.nlpc.taps.at(j), f.nlpc.taps.at(j)) == 0.0);
  CHECK(max_abs_diff(g.nlpc.mean_intensity, f.nlpc.mean_intensity) == 0.0);
  for (int p = 0; p < 4; ++p)
    for (Index j = -1; j <= 1; ++j)
      CHECK(max_abs_diff(g.ppnc.filters[static_cast<size_t>(p)].at(j), f.ppnc.filters[static_cast<size_t>(p)].at(j)) ==
            0.0);

  std::string bytes;
  {
    std::ifstream is(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(is), {});
  }
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream os(dir / name, std::ios::binary);
    os << content;
    return dir / name;
  };
  CHECK_THROWS_WITH_AS(read_filters(write("magic", "XSCPR1" + bytes.substr(6))), doctest::Contains("magic"), Error);
  CHECK_THROWS_WITH_AS(read_filters(write("short", bytes.substr(0, bytes.size() - 5))), doctest::Contains("truncated"),
                       Error);
  CHECK_THROWS_WITH_AS(read_filters(write("long", bytes + "x")), doctest::Contains("trailing"), Error);
  std::filesystem::remove_all(dir);
}
