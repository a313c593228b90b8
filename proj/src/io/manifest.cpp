#include "io/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "common/rng.hpp"

namespace pulsekit::io {

using nlohmann::json;

std::vector<const ClipEntry*> Manifest::clips_in_split(const std::string& split,
                                                       bool retained_only) const {
    std::vector<const ClipEntry*> out;
    for (const auto& s : subjects)
        for (const auto& c : s.clips)
            if (c.split == split && (!retained_only || c.retained)) out.push_back(&c);
    return out;
}

const ClipEntry* Manifest::find_clip(const std::string& clip_id) const {
    for (const auto& s : subjects)
        for (const auto& c : s.clips)
            if (c.clip_id == clip_id) return &c;
    return nullptr;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("manifest parse error: " + std::string(e.what()));
    }
    Manifest m;
    try {
        m.version = j.at("version").get<int>();
        m.fps = j.value("fps", 30.0);
        for (const auto& js : j.at("subjects")) {
            SubjectEntry s;
            s.subject_id = js.at("subject_id").get<std::string>();
            for (const auto& jc : js.at("clips")) {
                ClipEntry c;
                c.clip_id = jc.at("clip_id").get<std::string>();
                c.recording_id = jc.value("recording_id", std::string{});
                c.window_index = jc.value("window_index", 0);
                c.frames_path = jc.value("frames_path", std::string{});
                c.ppg_path = jc.value("ppg_path", std::string{});
                const auto& labels = jc.at("labels");
                c.hr_bpm = labels.value("hr_bpm", std::vector<double>{});
                c.spo2_pct = labels.value("spo2_pct", std::vector<double>{});
                c.split = jc.at("split").get<std::string>();
                c.retained = jc.value("retained", true);
                s.clips.push_back(std::move(c));
            }
            m.subjects.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw DataError("manifest schema error: " + std::string(e.what()));
    }
    return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
    json j;
    j["version"] = m.version;
    j["fps"] = m.fps;
    j["subjects"] = json::array();
    for (const auto& s : m.subjects) {
        json js;
        js["subject_id"] = s.subject_id;
        js["clips"] = json::array();
        for (const auto& c : s.clips) {
            json jc;
            jc["clip_id"] = c.clip_id;
            jc["recording_id"] = c.recording_id;
            jc["window_index"] = c.window_index;
            jc["frames_path"] = c.frames_path;
            jc["ppg_path"] = c.ppg_path;
            jc["labels"] = {{"hr_bpm", c.hr_bpm}, {"spo2_pct", c.spo2_pct}};
            jc["split"] = c.split;
            jc["retained"] = c.retained;
            js["clips"].push_back(std::move(jc));
        }
        j["subjects"].push_back(std::move(js));
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("manifest write failed: " + path.string());
}

void validate_manifest(const Manifest& m) {
    if (m.version != 1) throw DataError("manifest rule 'version': unsupported version");
    std::set<std::string> ids;
    std::map<std::string, std::string> subject_split;
    const std::set<std::string> valid_splits{"train", "val", "test"};
    std::set<std::string> subject_ids;

    for (const auto& s : m.subjects) {
        if (!subject_ids.insert(s.subject_id).second)
            throw DataError("manifest rule 'duplicate-subject': " + s.subject_id);
        for (const auto& c : s.clips) {
            if (!ids.insert(c.clip_id).second)
                throw DataError("manifest rule 'duplicate-clip-id': " + c.clip_id);
            if (!valid_splits.count(c.split))
                throw DataError("manifest rule 'bad-split': " + c.clip_id + " -> " + c.split);
            if (c.hr_bpm.empty() || c.hr_bpm.size() != c.spo2_pct.size())
                throw DataError("manifest rule 'bad-labels': " + c.clip_id);
            auto [it, inserted] = subject_split.emplace(s.subject_id, c.split);
            if (!inserted && it->second != c.split)
                throw DataError("manifest rule 'split-leakage': subject " + s.subject_id +
                                " appears in splits " + it->second + " and " + c.split);
        }
    }
}

void assign_splits_by_subject(Manifest& m, double train_frac, double val_frac,
                              uint64_t seed) {
    if (!(train_frac > 0.0) || !(val_frac >= 0.0) || train_frac + val_frac >= 1.0)
        throw UsageError("assign_splits: fractions must leave room for a test split");
    std::vector<std::size_t> order(m.subjects.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(hash_combine(seed, hash_str("split")));
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);

    const auto n = static_cast<double>(order.size());
    auto n_train = static_cast<std::size_t>(std::max(1.0, std::round(n * train_frac)));
    auto n_val = static_cast<std::size_t>(std::max(1.0, std::round(n * val_frac)));
    while (n_train + n_val + 1 > order.size() && n_train > 1) --n_train;

    for (std::size_t i = 0; i < order.size(); ++i) {
        std::string split = i < n_train ? "train" : (i < n_train + n_val ? "val" : "test");
        for (auto& c : m.subjects[order[i]].clips) c.split = split;
    }
}

} // namespace pulsekit::io
