#pragma once

// Fill gap between segments: when the boundary transition between two
// consecutive segments is shakier than segment A's own average, a bridge
// segment spanning the anchors is sampled and smoothed at the mean of the
// two rates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "profile.hpp"
#include "sampler.hpp"
#include "smoother.hpp"
#include "types.hpp"

namespace ffwd {

struct BridgeSegment {
    std::uint32_t left_anchor = 0;   // last selected frame of segment A
    std::uint32_t right_anchor = 0;  // first selected frame of segment B
    double speedup = 1.0;            // (speedup_A + speedup_B) / 2
};

// A rate plan together with any bridges created, in temporal order of the
// rates actually applied; feeds the transition-smoothness metric.
struct EffectiveRates {
    std::vector<double> rates;
};

inline double mean_instability(const VideoRecord& video,
                               const std::vector<std::uint32_t>& selected,
                               double speedup) {
    if (selected.size() < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < selected.size(); ++i)
        sum += instability(video, selected[i], selected[i + 1], speedup);
    return sum / static_cast<double>(selected.size() - 1);
}

// Boundary transition shakier than segment A's average (both with A's rate).
inline bool needs_bridge(const VideoRecord& video,
                         const std::vector<std::uint32_t>& a_selected,
                         const std::vector<std::uint32_t>& b_selected,
                         double speedup_a) {
    const double boundary =
        instability(video, a_selected.back(), b_selected.front(), speedup_a);
    return boundary > mean_instability(video, a_selected, speedup_a);
}

// Sample + smooth the frames strictly between the anchors at the bridge
// rate; anchors are not duplicated.
inline std::vector<SelectionEntry> fill_gap(const VideoRecord& video,
                                            const BridgeSegment& bridge,
                                            int bridge_id,
                                            const SamplerChoice& choice, int spf) {
    if (bridge.right_anchor - bridge.left_anchor < 2) return {};
    Segment interior;
    interior.start = bridge.left_anchor + 1;
    interior.end = bridge.right_anchor - 1;
    interior.speedup = bridge.speedup;

    auto entries = sample_segment(video, interior, bridge_id, choice, spf);
    // The bridge budget is set by the anchor distance, not the interior count.
    const double gap =
        static_cast<double>(bridge.right_anchor) - bridge.left_anchor;
    const std::size_t target = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(gap / bridge.speedup)));
    entries = smooth_segment(video, interior, bridge_id, std::move(entries), target,
                             Provenance::gapfill);
    for (auto& e : entries) e.provenance = Provenance::gapfill;
    return entries;
}

// Single pass over consecutive segment boundaries; bridges do not trigger
// further bridges. Returns the merged Selection and, via effective_rates,
// the applied rate sequence with bridge rates interleaved.
inline Selection fill_all(const VideoRecord& video, const RatePlan& plan,
                          const std::vector<std::vector<SelectionEntry>>& per_segment,
                          const SamplerChoice& choice, int spf,
                          EffectiveRates* effective_rates = nullptr) {
    Selection out;
    out.required_speedup = plan.required_speedup;
    if (effective_rates) effective_rates->rates.clear();

    std::vector<std::vector<std::uint32_t>> selected(per_segment.size());
    for (std::size_t s = 0; s < per_segment.size(); ++s)
        for (const auto& e : per_segment[s]) selected[s].push_back(e.frame);

    std::vector<std::vector<SelectionEntry>> bridges(per_segment.size());
    for (std::size_t s = 0; s + 1 < per_segment.size(); ++s) {
        if (selected[s].empty() || selected[s + 1].empty()) continue;
        if (!needs_bridge(video, selected[s], selected[s + 1],
                          plan.segments[s].speedup))
            continue;
        BridgeSegment bridge;
        bridge.left_anchor = selected[s].back();
        bridge.right_anchor = selected[s + 1].front();
        bridge.speedup =
            0.5 * (plan.segments[s].speedup + plan.segments[s + 1].speedup);
        bridges[s] = fill_gap(video, bridge, -static_cast<int>(s) - 1, choice, spf);
    }

    for (std::size_t s = 0; s < per_segment.size(); ++s) {
        out.entries.insert(out.entries.end(), per_segment[s].begin(),
                           per_segment[s].end());
        out.entries.insert(out.entries.end(), bridges[s].begin(), bridges[s].end());
        if (effective_rates) {
            effective_rates->rates.push_back(plan.segments[s].speedup);
            if (!bridges[s].empty())
                effective_rates->rates.push_back(
                    0.5 * (plan.segments[s].speedup + plan.segments[s + 1].speedup));
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SelectionEntry& a, const SelectionEntry& b) {
                  return a.frame < b.frame;
              });
    return out;
}

}  // namespace ffwd
