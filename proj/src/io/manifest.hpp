#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "common/error.hpp"

namespace pulsekit::io {

struct ClipEntry {
    std::string clip_id;
    std::string recording_id; // groups consecutive windows of one recording
    int window_index = 0;     // 2 s window position within the recording
    std::string frames_path;  // relative to the manifest directory
    std::string ppg_path;
    std::vector<double> hr_bpm;   // per-window reference labels
    std::vector<double> spo2_pct;
    std::string split = "train"; // train | val | test
    bool retained = true;        // survives the denoising screens
};

struct SubjectEntry {
    std::string subject_id;
    std::vector<ClipEntry> clips;
};

struct Manifest {
    int version = 1;
    double fps = 30.0;
    std::vector<SubjectEntry> subjects;

    std::size_t clip_count() const {
        std::size_t n = 0;
        for (const auto& s : subjects) n += s.clips.size();
        return n;
    }

    // All clips of a split; retained_only additionally drops clips rejected
    // by the denoising pipeline (referential integrity with ppg-clean).
    std::vector<const ClipEntry*> clips_in_split(const std::string& split,
                                                 bool retained_only = true) const;
    const ClipEntry* find_clip(const std::string& clip_id) const;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const Manifest& m);

// Enforces the structural rules; throws DataError naming the violated rule
// (e.g. "split-leakage" when one subject appears in two splits).
void validate_manifest(const Manifest& m);

// Deterministic subject-level split assignment by fractions (train, val, test).
void assign_splits_by_subject(Manifest& m, double train_frac, double val_frac,
                              uint64_t seed);

} // namespace pulsekit::io
