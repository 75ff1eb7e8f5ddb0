#pragma once

// Transition smoothing: the instability of a selected-frame transition is
// the appearance change (1-D EMD between color histograms) times how far
// the frame gap deviates from the segment speed-up. Frames are inserted
// into the shakiest transitions until the segment reaches its frame budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "types.hpp"

namespace ffwd {

// Mean over the 3 channels of the 1-D EMD with unit bin distance,
// computed as the L1 difference of the channel CDFs.
inline double emd_histograms(const std::vector<double>& hx,
                             const std::vector<double>& hy,
                             std::uint16_t bins) {
    if (hx.size() != 3u * bins || hy.size() != 3u * bins)
        throw dimension_mismatch("emd_histograms: BinCountMismatch");
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double cdf_x = 0.0, cdf_y = 0.0, dist = 0.0;
        for (std::uint16_t b = 0; b < bins; ++b) {
            cdf_x += hx[c * bins + b];
            cdf_y += hy[c * bins + b];
            dist += std::abs(cdf_x - cdf_y);
        }
        total += dist;
    }
    return total / 3.0;
}

inline double instability(const VideoRecord& video, std::uint32_t x,
                          std::uint32_t y, double speedup) {
    if (x >= video.size() || y >= video.size())
        throw invariant_error("instability: IndexOutOfRange");
    const double ac = emd_histograms(video.frames[x].histograms,
                                     video.frames[y].histograms, video.hist_bins);
    return ac * (static_cast<double>(y) - static_cast<double>(x) - speedup);
}

// Index of the shakiest transition among consecutive selected pairs;
// ties resolve to the lowest index. `insertable_only` restricts the scan
// to transitions with at least one interior frame.
inline std::ptrdiff_t shakiest_transition(const VideoRecord& video,
                                          const std::vector<std::uint32_t>& selected,
                                          double speedup,
                                          bool insertable_only = false) {
    if (selected.size() < 2)
        throw invariant_error("shakiest_transition: TooFewFrames");
    std::ptrdiff_t best = -1;
    double best_value = 0.0;
    for (std::size_t i = 0; i + 1 < selected.size(); ++i) {
        if (insertable_only && selected[i + 1] - selected[i] < 2) continue;
        const double value = instability(video, selected[i], selected[i + 1], speedup);
        if (best < 0 || value > best_value) {
            best = static_cast<std::ptrdiff_t>(i);
            best_value = value;
        }
    }
    return best;
}

// Interior frame minimizing I(left,j)^2 + I(j,right)^2, exhaustive scan;
// ties resolve to the lowest j.
inline std::uint32_t best_insertion(const VideoRecord& video, std::uint32_t left,
                                    std::uint32_t right, double speedup) {
    if (right - left < 2) throw invariant_error("best_insertion: NoInteriorFrame");
    std::uint32_t best = left + 1;
    double best_cost = 0.0;
    for (std::uint32_t j = left + 1; j < right; ++j) {
        const double a = instability(video, left, j, speedup);
        const double b = instability(video, j, right, speedup);
        const double cost = a * a + b * b;
        if (j == left + 1 || cost < best_cost) {
            best = j;
            best_cost = cost;
        }
    }
    return best;
}

// Insert frames into the shakiest transitions until target_count is reached
// or no transition has an interior frame left.
inline std::vector<SelectionEntry> smooth_segment(const VideoRecord& video,
                                                  const Segment& segment,
                                                  int segment_id,
                                                  std::vector<SelectionEntry> entries,
                                                  std::size_t target_count,
                                                  Provenance provenance = Provenance::smoothed) {
    std::vector<std::uint32_t> selected;
    selected.reserve(entries.size());
    for (const auto& e : entries) selected.push_back(e.frame);

    while (selected.size() < target_count && selected.size() >= 2) {
        const std::ptrdiff_t i =
            shakiest_transition(video, selected, segment.speedup, true);
        if (i < 0) break;  // saturated: every transition is adjacent frames
        const std::uint32_t j =
            best_insertion(video, selected[i], selected[i + 1], segment.speedup);
        selected.insert(selected.begin() + i + 1, j);
        entries.push_back({j, segment_id, provenance});
    }
    std::sort(entries.begin(), entries.end(),
              [](const SelectionEntry& a, const SelectionEntry& b) {
                  return a.frame < b.frame;
              });
    return entries;
}

}  // namespace ffwd
