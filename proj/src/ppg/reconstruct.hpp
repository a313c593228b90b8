#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signal/waveform.hpp"

namespace pulsekit::ppg {

// Fills a gap from its clean neighbourhoods. Returns nullopt (refusal) when
// the provided context is insufficient; the caller then drops the gap.
class Reconstructor {
public:
    virtual ~Reconstructor() = default;
    virtual std::optional<std::vector<double>> reconstruct(
        const signal::Waveform& context_before, std::size_t gap_len,
        const signal::Waveform& context_after) const = 0;
};

// Template synthesis standing in for the pretrained GAN: dominant frequency,
// amplitude and phase are fitted on the flanking context, then a
// phase-continuous fundamental-plus-harmonic template sweeps linearly
// between the two sides.
class BuiltinReconstructor : public Reconstructor {
public:
    static constexpr double kMinContextSeconds = 4.0;

    std::optional<std::vector<double>> reconstruct(
        const signal::Waveform& context_before, std::size_t gap_len,
        const signal::Waveform& context_after) const override;
};

struct FlaggedInterval {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string action; // "reconstructed" | "dropped"
};

struct CleanReport {
    std::vector<FlaggedInterval> flagged_intervals; // non-overlapping, ascending
    double retained_fraction = 1.0;
};

inline constexpr double kMaxReconstructSeconds = 15.0;

// Replaces dirty runs shorter than 15 s via the reconstructor (restoring the
// quality mask); longer runs and runs without usable context are dropped
// (mask false). Samples outside flagged runs are untouched bit-for-bit.
std::pair<signal::Waveform, CleanReport> reconstruct_short_gaps(
    const signal::Waveform& w, const std::vector<bool>& dirty_mask,
    const Reconstructor& reconstructor);

} // namespace pulsekit::ppg
