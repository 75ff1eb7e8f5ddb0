#pragma once

// Evaluation metrics: discontinuity (RMSE of selected-frame jumps against
// the required speed-up), sliding-window thumbnail instability, semantic
// retention, absolute speed-up deviation, and speed-up transition
// smoothness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "types.hpp"

namespace ffwd {

struct MetricsReport {
    std::optional<double> instability;  // missing when no thumbnails
    double speedup_deviation = 0.0;
    double semantic_retained = 1.0;
    double discontinuity = 0.0;
    std::optional<double> transition_smoothness;  // missing for one segment
    double achieved_speedup = 0.0;
    std::size_t selected_count = 0;
};

inline double discontinuity(const std::vector<std::uint32_t>& selected,
                            double required_speedup) {
    if (selected.size() < 2) throw invariant_error("discontinuity: TooFewFrames");
    double sum = 0.0;
    for (std::size_t i = 1; i < selected.size(); ++i) {
        const double jump = static_cast<double>(selected[i]) - selected[i - 1];
        const double r = jump - required_speedup;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(selected.size()));
}

// Mean over sliding windows of the summed per-pixel standard deviation of
// the selected luminance thumbnails. Population std; windows shorter than
// `window` only occur when the whole selection is shorter, in which case
// the single full-selection window is used.
inline std::optional<double> instability_metric(
    const VideoRecord& video, const std::vector<std::uint32_t>& selected,
    std::size_t window = 4) {
    if (!video.has_thumbnails()) return std::nullopt;
    if (selected.size() < 2) return 0.0;
    const std::size_t w = std::min(std::max<std::size_t>(2, window), selected.size());
    const std::size_t pixels =
        static_cast<std::size_t>(video.thumb_w) * video.thumb_h;

    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t start = 0; start + w <= selected.size(); ++start, ++windows) {
        double win_sum = 0.0;
        for (std::size_t p = 0; p < pixels; ++p) {
            double mean = 0.0;
            for (std::size_t k = 0; k < w; ++k)
                mean += video.frames[selected[start + k]].thumbnail[p];
            mean /= static_cast<double>(w);
            double var = 0.0;
            for (std::size_t k = 0; k < w; ++k) {
                const double d =
                    video.frames[selected[start + k]].thumbnail[p] - mean;
                var += d * d;
            }
            win_sum += std::sqrt(var / static_cast<double>(w));
        }
        total += win_sum;
    }
    return total / static_cast<double>(windows);
}

// Sum of selected scores over the sum of the m_c largest scores; 0/0 is 1.
inline double semantic_retained(const VideoRecord& video,
                                const std::vector<std::uint32_t>& selected) {
    if (selected.empty()) throw invariant_error("semantic_retained: TooFewFrames");
    double numer = 0.0;
    for (std::uint32_t i : selected) numer += video.frames[i].semantic_score;
    std::vector<double> scores;
    scores.reserve(video.size());
    for (const auto& fr : video.frames) scores.push_back(fr.semantic_score);
    std::nth_element(scores.begin(), scores.begin() + (selected.size() - 1),
                     scores.end(), std::greater<>());
    double denom = 0.0;
    for (std::size_t i = 0; i < selected.size(); ++i) denom += scores[i];
    if (denom == 0.0) return 1.0;
    return numer / denom;
}

inline double speedup_deviation(std::size_t selected_count, double required_speedup,
                                std::size_t n) {
    if (selected_count == 0) throw invariant_error("speedup_deviation: TooFewFrames");
    return std::abs(static_cast<double>(n) / selected_count - required_speedup);
}

// Mean squared difference between consecutive applied rates.
inline double transition_smoothness(const std::vector<double>& rates) {
    if (rates.size() < 2)
        throw invariant_error("transition_smoothness: TooFewSegments");
    double sum = 0.0;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        const double d = rates[i] - rates[i - 1];
        sum += d * d;
    }
    return sum / static_cast<double>(rates.size() - 1);
}

inline MetricsReport evaluate(const VideoRecord& video, const Selection& selection,
                              const std::vector<double>& effective_rates,
                              std::size_t window = 4) {
    MetricsReport report;
    const auto selected = selection.indices();
    report.selected_count = selected.size();
    report.achieved_speedup =
        static_cast<double>(video.size()) / static_cast<double>(selected.size());
    report.speedup_deviation =
        speedup_deviation(selected.size(), selection.required_speedup, video.size());
    report.semantic_retained = semantic_retained(video, selected);
    report.discontinuity =
        selected.size() >= 2 ? discontinuity(selected, selection.required_speedup)
                             : 0.0;
    report.instability = instability_metric(video, selected, window);
    if (effective_rates.size() >= 2)
        report.transition_smoothness = transition_smoothness(effective_rates);
    return report;
}

}  // namespace ffwd
