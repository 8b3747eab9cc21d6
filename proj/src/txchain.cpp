#include "sclink/txchain.hpp"

#include "sclink/fft.hpp"
#include "sclink/pulse.hpp"
#include "sclink/random.hpp"
#include "sclink/spectral.hpp"

#include <cmath>
#include <random>

namespace sclink {

void SubcarrierPlan::validate() const {
  require(count >= 1, "SubcarrierPlan: at least one subcarrier required");
  require(symbol_rate > 0.0, "SubcarrierPlan: symbol_rate must be positive");
  require(roll_off > 0.0 && roll_off <= 1.0, "SubcarrierPlan: roll_off must be in (0, 1]");
  require(count == 1 || spacing >= symbol_rate * (1.0 + roll_off) * (1.0 - 1e-12),
          "SubcarrierPlan: spacing below symbol_rate*(1+roll_off) makes subcarriers overlap");
}

Index PilotSchedule::pilot_count(Index n_symbols) const {
  if (n_symbols <= offset) return 0;
  return (n_symbols - offset + period - 1) / period;
}

void PilotSchedule::validate() const {
  require(period >= 2, "PilotSchedule: period must be >= 2");
  require(offset >= 0 && offset < period, "PilotSchedule: offset must lie in [0, period)");
  require(!alphabet.empty(), "PilotSchedule: empty pilot alphabet");
  for (const auto& a : alphabet) require(std::abs(a) > 0.0, "PilotSchedule: zero-valued pilot");
}

std::vector<cdouble> PilotSchedule::default_alphabet() {
  Rng rng(0x5eed0f91107ull);
  std::uniform_int_distribution<int> quadrant(0, 3);
  std::vector<cdouble> seq(64);
  const double a = 1.0 / std::sqrt(2.0);
  for (auto& s : seq) {
    const int q = quadrant(rng);
    s = {(q & 1) ? -a : a, (q & 2) ? -a : a};
  }
  return seq;
}

int aggregate_samples_per_symbol(double symbol_rate, double total_bandwidth) {
  int sps = 2;
  while (sps * symbol_rate < 1.25 * total_bandwidth) sps *= 2;
  return sps;
}

SymbolFrame generate_frame(std::uint64_t seed, Index n_symbols, const ConstellationSpec& spec,
                           const SubcarrierPlan& plan, const PilotSchedule& pilots) {
  plan.validate();
  pilots.validate();
  require(n_symbols > 0 && n_symbols % pilots.period == 0,
          "generate_frame: n_symbols must be a positive multiple of the pilot period");

  const Index streams = 2 * plan.count;
  SymbolFrame frame;
  frame.symbol_rate = plan.symbol_rate;
  frame.streams.resize(n_symbols, streams);
  frame.pilot_mask.assign(static_cast<size_t>(n_symbols), false);

  Rng rng(seed);
  std::discrete_distribution<int> draw(spec.probabilities.begin(), spec.probabilities.end());
  for (Index i = 0; i < streams; ++i)
    for (Index k = 0; k < n_symbols; ++k) frame.streams(k, i) = spec.points[static_cast<size_t>(draw(rng))];

  Index n = 0;
  for (Index k = 0; k < n_symbols; ++k) {
    if (!pilots.is_pilot(k)) continue;
    frame.pilot_mask[static_cast<size_t>(k)] = true;
    frame.streams.row(k).setConstant(pilots.pilot_value(n++));
  }
  frame.known_symbols = frame.streams;
  return frame;
}

Waveform modulate_subcarriers(const SymbolFrame& frame, const SubcarrierPlan& plan, int samples_per_symbol) {
  plan.validate();
  require(frame.stream_count() == 2 * plan.count, "modulate_subcarriers: frame has " +
                                                      std::to_string(frame.stream_count()) +
                                                      " streams, plan needs 2M");
  require(samples_per_symbol >= 2 && is_power_of_two(samples_per_symbol),
          "modulate_subcarriers: samples_per_symbol must be a power of two >= 2");
  const Index k_sym = frame.length();
  require(is_power_of_two(k_sym), "modulate_subcarriers: symbol count must be a power of two");

  const double fs = plan.symbol_rate * samples_per_symbol;
  for (int m = 0; m < plan.count; ++m)
    require(std::abs(plan.offset(m)) + 0.5 * plan.subcarrier_bandwidth() <= 0.5 * fs,
            "modulate_subcarriers: subcarrier band exceeds Nyquist (aliasing guard)");

  // sqrt(2) * RRC at 2 samples/symbol gives unit gain through TX and matched RX.
  const Index n2 = 2 * k_sym;
  const double fs2 = 2.0 * plan.symbol_rate;
  RealVector shaping(n2);
  for (Index k = 0; k < n2; ++k)
    shaping[k] = std::sqrt(2.0) *
                 rrc_response(signed_bin(k, n2) * fs2 / static_cast<double>(n2), plan.symbol_rate, plan.roll_off);

  const Index n_out = k_sym * samples_per_symbol;
  Waveform out;
  out.sample_rate = fs;
  out.samples = ComplexMatrix::Zero(n_out, 2);
  out.center_offsets = {0.0, 0.0};
  if (frame.streams.isZero(0.0)) return out;

  for (int m = 0; m < plan.count; ++m) {
    const double f_m = bin_aligned_offset(plan.offset(m), n_out, fs);
    for (int pol = 0; pol < 2; ++pol) {
      ComplexVector up = ComplexVector::Zero(n2);
      for (Index k = 0; k < k_sym; ++k) up[2 * k] = frame.streams(k, 2 * m + pol);
      fft_inplace(up);
      up.array() *= shaping.array();
      ifft_inplace(up);
      const ComplexSeq fast = resample({std::move(up), fs2}, fs);
      out.samples.col(pol) += frequency_shift(fast, f_m).samples;
    }
  }
  return out;
}

Waveform apply_phase_noise(const Waveform& waveform, const LaserSpec& laser, std::uint64_t seed) {
  require(laser.linewidth >= 0.0, "apply_phase_noise: negative linewidth");
  if (laser.linewidth == 0.0) return waveform;
  Waveform out = waveform;
  Rng rng(seed);
  std::normal_distribution<double> step(0.0, std::sqrt(2.0 * kPi * laser.linewidth / waveform.sample_rate));
  double phi = 0.0;
  for (Index n = 0; n < out.length(); ++n) {
    if (n > 0) phi += step(rng);
    out.samples.row(n) *= std::polar(1.0, phi);
  }
  return out;
}

Waveform mux_wdm(const std::vector<Waveform>& channels, double channel_spacing, double channel_bandwidth) {
  require(!channels.empty(), "mux_wdm: no channels");
  const auto& ref = channels.front();
  for (const auto& c : channels)
    require(c.length() == ref.length() && c.channels() == ref.channels() && c.sample_rate == ref.sample_rate,
            "mux_wdm: channel waveforms differ in shape or sample rate");
  const auto count = static_cast<Index>(channels.size());
  const double half_span = 0.5 * static_cast<double>(count - 1) * channel_spacing;
  require(half_span + 0.5 * channel_bandwidth <= 0.5 * ref.sample_rate,
          "mux_wdm: WDM grid exceeds the Nyquist band (aliasing guard)");

  Waveform out;
  out.sample_rate = ref.sample_rate;
  out.samples = ComplexMatrix::Zero(ref.length(), ref.channels());
  out.center_offsets.assign(static_cast<size_t>(ref.channels()), 0.0);
  for (Index i = 0; i < count; ++i) {
    const double f = bin_aligned_offset(static_cast<double>(i) * channel_spacing - half_span, ref.length(),
                                        ref.sample_rate);
    for (Index c = 0; c < ref.channels(); ++c)
      out.samples.col(c) += frequency_shift(channels[static_cast<size_t>(i)].channel(c), f).samples;
  }
  return out;
}

}  // namespace sclink
