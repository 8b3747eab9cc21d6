#pragma once

#include "sclink/constellation.hpp"
#include "sclink/types.hpp"

#include <cstdint>
#include <vector>

namespace sclink {

struct SubcarrierPlan {
  int count = 4;                 // M
  double symbol_rate = 45e9;     // baud per subcarrier
  double spacing = 47.25e9;      // Hz
  double roll_off = 0.05;

  /// Center of subcarrier m (0-based): (m - (M-1)/2) * spacing.
  double offset(int m) const { return (m - 0.5 * (count - 1)) * spacing; }
  double subcarrier_bandwidth() const { return symbol_rate * (1.0 + roll_off); }
  double occupied_bandwidth() const { return (count - 1) * spacing + subcarrier_bandwidth(); }
  void validate() const;
};

/// Pilots at k = offset + n*period in every stream; values taken cyclically
/// from `alphabet`, identical across streams.
struct PilotSchedule {
  Index period = 32;
  Index offset = 0;
  std::vector<cdouble> alphabet = default_alphabet();

  bool is_pilot(Index k) const { return k >= offset && (k - offset) % period == 0; }
  Index pilot_count(Index n_symbols) const;
  cdouble pilot_value(Index n) const { return alphabet[static_cast<size_t>(n) % alphabet.size()]; }
  void validate() const;

  /// Fixed pseudo-random unit-power QPSK sequence of length 64.
  static std::vector<cdouble> default_alphabet();
};

struct LaserSpec {
  double linewidth = 0.0;  // Hz
};

/// Smallest power-of-two samples-per-symbol whose rate covers 1.25x the band.
int aggregate_samples_per_symbol(double symbol_rate, double total_bandwidth);

SymbolFrame generate_frame(std::uint64_t seed, Index n_symbols, const ConstellationSpec& spec,
                           const SubcarrierPlan& plan, const PilotSchedule& pilots);

/// Frequency-domain RRC shaping of every stream and subcarrier multiplexing.
/// Returns a 2-channel (pol-x, pol-y) waveform at symbol_rate * sps. Each
/// polarization carries mean power M/2 for unit-energy symbols.
Waveform modulate_subcarriers(const SymbolFrame& frame, const SubcarrierPlan& plan, int samples_per_symbol);

/// Multiplies every channel by exp(i phi(t)), phi a Wiener process with
/// increment variance 2 pi linewidth / sample_rate, phi(0) = 0.
Waveform apply_phase_noise(const Waveform& waveform, const LaserSpec& laser, std::uint64_t seed);

/// Shifts channel i to (i - (N-1)/2) * spacing (rounded to the DFT bin grid)
/// and sums. All inputs must share shape and rate.
Waveform mux_wdm(const std::vector<Waveform>& channels, double channel_spacing, double channel_bandwidth);

}  // namespace sclink
