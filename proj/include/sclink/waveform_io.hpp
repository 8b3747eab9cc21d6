#pragma once

#include "sclink/types.hpp"

#include <filesystem>

namespace sclink {

/// Binary container: "WVFM1", u32 version (1), u32 channel count, u64 sample
/// count, f64 sample rate, f64 center offset per channel, then each channel's
/// samples as interleaved re/im f64. Little-endian.
void write_waveform(const std::filesystem::path& path, const Waveform& waveform);
Waveform read_waveform(const std::filesystem::path& path);

}  // namespace sclink
