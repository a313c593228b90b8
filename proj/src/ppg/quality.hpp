#pragma once

#include <array>
#include <vector>

#include "signal/waveform.hpp"

namespace pulsekit::ppg {

// Window-level signal quality score; higher is cleaner. Implementations must
// return a finite score for any finite window of >= 2 s.
class QualityScreen {
public:
    virtual ~QualityScreen() = default;
    virtual double score(const signal::Waveform& window) const = 0;
    virtual double threshold() const = 0; // scores above are clean
};

// Composite statistical screen standing in for the pretrained one-class SVM:
// skewness, excess kurtosis, in-band spectral entropy and autocorrelation
// peak prominence, each z-scored against reference statistics gathered from
// the clean synthetic preset, combined as minus the sum of |z|.
class BuiltinQualityScreen : public QualityScreen {
public:
    struct FeatureStats {
        std::array<double, 4> mean;
        std::array<double, 4> stddev;
    };

    BuiltinQualityScreen() = default;
    BuiltinQualityScreen(FeatureStats long_stats, FeatureStats short_stats,
                         double threshold)
        : long_stats_(long_stats), short_stats_(short_stats), threshold_(threshold) {}

    static std::array<double, 4> features(const signal::Waveform& window);

    double score(const signal::Waveform& window) const override;
    double threshold() const override { return threshold_; }

private:
    // Calibrated once on the clean synthetic preset (seed 7) and frozen;
    // long = 30 s screening windows, short = 2 s refinement tiles. The
    // spreads are floored well above the measured ones so the screen
    // tolerates operating points the calibration did not visit.
    FeatureStats long_stats_{{-0.48100, -1.24360, 0.30819, 0.97550},
                             {0.06, 0.10, 0.04, 0.03}};
    FeatureStats short_stats_{{-0.48520, -1.23706, 0.54684, 0.73854},
                              {0.16, 0.22, 0.07, 0.13}};
    double threshold_ = -5.0;
};

// Sliding 30 s windows with a 2 s shift; a sample is dirty when the majority
// of windows covering it score below threshold. Flagged runs are then
// re-scored with 2 s tiles to restore sample-level localization (a 30 s
// window verdict alone smears each artifact by up to half a window).
std::vector<bool> screen_quality(const signal::Waveform& w, const QualityScreen& screen);

} // namespace pulsekit::ppg
