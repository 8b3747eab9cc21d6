#pragma once

#include "sclink/types.hpp"

namespace sclink {

/// Root-raised-cosine impulse response sampled at `samples_per_symbol`,
/// spanning `span_symbols` symbols (span*sps + 1 taps), unit energy.
RealVector rrc_taps(double roll_off, int samples_per_symbol, int span_symbols);

/// Root-raised-cosine amplitude response at frequency f (Hz) for symbol rate
/// `symbol_rate`; equals 1 in the passband, 0 beyond (1+roll_off)*Rs/2.
double rrc_response(double f, double symbol_rate, double roll_off);

}  // namespace sclink
