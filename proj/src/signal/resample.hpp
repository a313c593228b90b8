#pragma once

#include "signal/waveform.hpp"

namespace pulsekit::signal {

// Linear interpolation onto a uniform grid at target_hz. A target sample is
// usable only if both bracketing source samples are.
Waveform resample_linear(const Waveform& w, double target_hz);

} // namespace pulsekit::signal
