#pragma once

#include "sclink/fiber.hpp"
#include "sclink/txchain.hpp"
#include "sclink/types.hpp"

#include <vector>

namespace sclink {

/// Shifts `center_hz` (bin-aligned) to baseband and keeps |f| <= bandwidth/2.
Waveform demux_channel(const Waveform& waveform, double center_hz, double bandwidth_hz);

/// Inverse of the fiber's accumulated dispersion over its full length.
Waveform cd_compensate(const Waveform& waveform, const FiberParams& fiber);

/// Matched RRC filtering and symbol-instant sampling of every subcarrier.
/// Symbol k is sampled at sample index timing_offset + k*sps. Output streams
/// are ordered (sc1-x, sc1-y, sc2-x, ...). Unit gain in back-to-back.
SymbolFrame demodulate_subcarriers(const Waveform& waveform, const SubcarrierPlan& plan,
                                   Index timing_offset_samples = 0);

struct Alignment {
  std::vector<Index> delays;    // per stream, in symbols
  std::vector<int> quadrants;   // per stream, rotation by quadrant * 90 deg
};

/// Resolves per-stream integer (circular) symbol delay and the four-fold
/// phase ambiguity against `known`, searching |delay| <= max_delay.
/// Throws when the correlation peak is not clearly above the side peaks.
SymbolFrame align_frame(const SymbolFrame& frame, const ComplexMatrix& known, Index max_delay = 64,
                        Alignment* alignment = nullptr);

}  // namespace sclink
