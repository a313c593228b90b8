#pragma once

#include "rppg/trace.hpp"
#include "signal/waveform.hpp"

namespace pulsekit::rppg {

// Color-projection pulse extractors over 1.6 s sliding windows with Hann
// overlap-add. Both return a waveform as long as the trace and throw
// NumericError on a pulseless (zero-variance) trace.

// Plane-orthogonal-to-skin projection: S1 = G - B, S2 = G + B - 2R on
// temporally normalized channels, combined as S1 + (sigma1/sigma2) * S2.
signal::Waveform pos(const RoiTrace& trace);

// Fixed chrominance projection X = 3R - 2G, Y = 1.5R + G - 1.5B on
// normalized channels, combined as X - (sigmaX/sigmaY) * Y.
signal::Waveform chrom(const RoiTrace& trace);

} // namespace pulsekit::rppg
