#include "eval/multiwindow.hpp"

#include <algorithm>
#include <map>

#include "signal/hr.hpp"

namespace pulsekit::eval {

MultiWindowResult multi_window_eval(const std::vector<WindowedPrediction>& windows,
                                    const std::vector<int>& window_lengths_s) {
    // Group into recordings, ordered by window index.
    std::map<std::string, std::vector<const WindowedPrediction*>> recordings;
    for (const auto& w : windows) recordings[w.recording_id].push_back(&w);
    for (auto& [id, ws] : recordings)
        std::sort(ws.begin(), ws.end(),
                  [](const WindowedPrediction* a, const WindowedPrediction* b) {
                      return a->window_index < b->window_index;
                  });

    MultiWindowResult result;
    for (int seconds : window_lengths_s) {
        if (seconds < 2 || seconds % 2 != 0)
            throw UsageError("multi_window_eval: window lengths must be even seconds >= 2");
        const std::size_t group = static_cast<std::size_t>(seconds) / 2;

        std::vector<double> refs, preds;
        for (const auto& [id, ws] : recordings) {
            // Non-overlapping runs of `group` consecutive windows.
            std::size_t i = 0;
            while (i + group <= ws.size()) {
                bool consecutive = true;
                for (std::size_t k = 1; k < group; ++k)
                    if (ws[i + k]->window_index != ws[i]->window_index + static_cast<int>(k))
                        consecutive = false;
                if (!consecutive) {
                    ++i;
                    continue;
                }
                std::vector<double> joined;
                double ref = 0.0;
                for (std::size_t k = 0; k < group; ++k) {
                    joined.insert(joined.end(), ws[i + k]->waveform.begin(),
                                  ws[i + k]->waveform.end());
                    ref += ws[i + k]->hr_ref_bpm;
                }
                signal::Waveform wave(std::move(joined), ws[i]->fps);
                preds.push_back(signal::extract_hr_bpm(wave).bpm);
                refs.push_back(ref / static_cast<double>(group));
                i += group;
            }
        }
        if (refs.empty())
            result.skipped_lengths.push_back(seconds);
        else
            result.tables.emplace_back(seconds,
                                       compute_metrics(refs, preds, static_cast<double>(seconds)));
    }
    return result;
}

} // namespace pulsekit::eval
