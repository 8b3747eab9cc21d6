#include "sclink/waveform_io.hpp"

#include "sclink/binary_io.hpp"

#include <fstream>

namespace sclink {

namespace {
constexpr const char* kMagic = "WVFM1";
constexpr std::uint32_t kVersion = 1;
}

void write_waveform(const std::filesystem::path& path, const Waveform& w) {
  require(w.samples.allFinite(), "write_waveform: non-finite samples");
  require(static_cast<Index>(w.center_offsets.size()) == w.channels() || w.center_offsets.empty(),
          "write_waveform: center offsets do not match the channel count");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), "write_waveform: cannot open " + path.string());
  os.write(kMagic, 5);
  binary::put_u32(os, kVersion);
  binary::put_u32(os, static_cast<std::uint32_t>(w.channels()));
  binary::put_u64(os, static_cast<std::uint64_t>(w.length()));
  binary::put_f64(os, w.sample_rate);
  for (Index c = 0; c < w.channels(); ++c)
    binary::put_f64(os, w.center_offsets.empty() ? 0.0 : w.center_offsets[static_cast<size_t>(c)]);
  for (Index c = 0; c < w.channels(); ++c)
    for (Index t = 0; t < w.length(); ++t) {
      binary::put_f64(os, w.samples(t, c).real());
      binary::put_f64(os, w.samples(t, c).imag());
    }
  require(os.good(), "write_waveform: write failed for " + path.string());
}

Waveform read_waveform(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "read_waveform: cannot open " + path.string());
  const std::string what = "read_waveform(" + path.string() + ")";
  binary::expect_magic(is, kMagic, what);
  const auto version = binary::get<std::uint32_t>(is, what);
  require(version == kVersion, what + ": unsupported version " + std::to_string(version));
  const auto channels = binary::get<std::uint32_t>(is, what);
  const auto length = binary::get<std::uint64_t>(is, what);
  require(channels > 0 && channels < 1024 && length < (std::uint64_t{1} << 34), what + ": implausible header");

  Waveform w;
  w.sample_rate = binary::get<double>(is, what);
  require(w.sample_rate > 0.0, what + ": non-positive sample rate");
  w.center_offsets.resize(channels);
  for (auto& f : w.center_offsets) f = binary::get<double>(is, what);
  w.samples.resize(static_cast<Index>(length), channels);
  for (Index c = 0; c < w.channels(); ++c)
    for (Index t = 0; t < w.length(); ++t) {
      const double re = binary::get<double>(is, what);
      const double im = binary::get<double>(is, what);
      w.samples(t, c) = {re, im};
    }
  require(is.peek() == std::char_traits<char>::eof(), what + ": trailing bytes after payload");
  return w;
}

}  // namespace sclink
