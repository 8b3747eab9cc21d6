#pragma once

#include "sclink/jscpr.hpp"

#include <filesystem>

namespace sclink {

struct JscprFilters {
  NlpcFilter nlpc;
  PpncFilterBank ppnc;
};

/// Binary container: "JSCPR1", then u64 M, N_c, N_FFT, P, N_d, then the NLPC
/// taps C(-N_c..N_c) row-major, the M training mean intensities, and the PPNC
/// taps D_p(-N_d..N_d) for p = 0..P-1 row-major with interleaved re/im. All
/// numbers little-endian, floats IEEE-754 binary64.
void write_filters(const std::filesystem::path& path, const JscprFilters& filters);
JscprFilters read_filters(const std::filesystem::path& path);

}  // namespace sclink
