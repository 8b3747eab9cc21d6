#include "sclink/filter_io.hpp"

#include "sclink/binary_io.hpp"

#include <fstream>

namespace sclink {

namespace {
constexpr const char* kMagic = "JSCPR1";
constexpr std::uint64_t kMaxDim = 1u << 20;
}

void write_filters(const std::filesystem::path& path, const JscprFilters& f) {
  f.nlpc.validate();
  f.ppnc.validate();
  require(f.ppnc.streams() == 2 * f.nlpc.subcarriers(), "write_filters: NLPC and PPNC disagree on M");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), "write_filters: cannot open " + path.string());

  const Index m = f.nlpc.subcarriers();
  os.write(kMagic, 6);
  for (Index v : {m, f.nlpc.half_length(), f.nlpc.n_fft, f.ppnc.period, f.ppnc.half_length})
    binary::put_u64(os, static_cast<std::uint64_t>(v));
  for (const auto& c : f.nlpc.taps.coeffs)
    for (Index r = 0; r < m; ++r)
      for (Index col = 0; col < m; ++col) binary::put_f64(os, c(r, col));
  for (Index i = 0; i < m; ++i) binary::put_f64(os, f.nlpc.mean_intensity[i]);
  for (const auto& filter : f.ppnc.filters)
    for (const auto& c : filter.coeffs)
      for (Index r = 0; r < c.rows(); ++r)
        for (Index col = 0; col < c.cols(); ++col) {
          binary::put_f64(os, c(r, col).real());
          binary::put_f64(os, c(r, col).imag());
        }
  require(os.good(), "write_filters: write failed for " + path.string());
}

JscprFilters read_filters(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "read_filters: cannot open " + path.string());
  const std::string what = "read_filters(" + path.string() + ")";
  binary::expect_magic(is, kMagic, what);
  std::uint64_t dims[5];
  for (auto& d : dims) {
    d = binary::get<std::uint64_t>(is, what);
    require(d < kMaxDim, what + ": implausible dimension in header");
  }
  const auto m = static_cast<Index>(dims[0]);
  const auto n_c = static_cast<Index>(dims[1]);
  const auto period = static_cast<Index>(dims[3]);
  const auto n_d = static_cast<Index>(dims[4]);
  require(m > 0 && period >= 2, what + ": invalid dimensions");

  JscprFilters f;
  f.nlpc.n_fft = static_cast<Index>(dims[2]);
  f.nlpc.taps = RealMimoTaps::zeros(m, m, n_c);
  for (auto& c : f.nlpc.taps.coeffs)
    for (Index r = 0; r < m; ++r)
      for (Index col = 0; col < m; ++col) c(r, col) = binary::get<double>(is, what);
  f.nlpc.mean_intensity.resize(m);
  for (Index i = 0; i < m; ++i) f.nlpc.mean_intensity[i] = binary::get<double>(is, what);

  f.ppnc.period = period;
  f.ppnc.half_length = n_d;
  f.ppnc.filters.assign(static_cast<size_t>(period), ComplexMimoTaps::zeros(2 * m, 2 * m, n_d));
  for (auto& filter : f.ppnc.filters)
    for (auto& c : filter.coeffs)
      for (Index r = 0; r < c.rows(); ++r)
        for (Index col = 0; col < c.cols(); ++col) {
          const double re = binary::get<double>(is, what);
          const double im = binary::get<double>(is, what);
          c(r, col) = {re, im};
        }
  require(is.peek() == std::char_traits<char>::eof(), what + ": trailing bytes after payload");
  f.nlpc.validate();
  f.ppnc.validate();
  return f;
}

}  // namespace sclink
