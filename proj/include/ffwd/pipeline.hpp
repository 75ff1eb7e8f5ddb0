#pragma once

// End-to-end orchestration: profile -> rate plan -> per-segment sampling ->
// per-segment smoothing -> gap filling -> metrics. Segments are processed
// in parallel up to the configured worker count; the merge is deterministic.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "gapfill.hpp"
#include "metrics.hpp"
#include "profile.hpp"
#include "sampler.hpp"
#include "smoother.hpp"
#include "types.hpp"

namespace ffwd {

struct PipelineConfig {
    double required_speedup = 10.0;
    SamplerChoice sampler;
    int spf = 2;
    bool fill_gaps = true;
    int levels = 2;
    int smooth_radius = 15;
    std::uint32_t min_seg_len = 0;  // 0 = default 2 * required_speedup
    std::size_t metrics_window = 4;
    int threads = 0;  // 0 = hardware concurrency
};

struct PipelineResult {
    RatePlan plan;
    Selection selection;
    MetricsReport metrics;
    EffectiveRates effective_rates;
    double sampling_seconds = 0.0;  // solver time only, summed over segments
};

inline int resolve_threads(int requested) {
    if (const char* env = std::getenv("FFWD_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline std::uint32_t default_min_seg_len(const PipelineConfig& config) {
    return config.min_seg_len > 0
               ? config.min_seg_len
               : static_cast<std::uint32_t>(
                     std::max(1.0, 2.0 * config.required_speedup));
}

inline std::size_t smoothing_target(const Segment& segment) {
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(segment.length() / segment.speedup)));
}

// Sample then smooth every segment of the plan. Wall time of the solver
// calls (sampling only, no smoothing or I/O) is accumulated into
// sampling_seconds when non-null.
inline std::vector<std::vector<SelectionEntry>> sample_and_smooth(
    const VideoRecord& video, const RatePlan& plan, const SamplerChoice& choice,
    int spf, int threads, double* sampling_seconds = nullptr) {
    const std::size_t count = plan.segments.size();
    std::vector<std::vector<SelectionEntry>> out(count);
    std::vector<double> solver_time(count, 0.0);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t s = next.fetch_add(1);
            if (s >= count) return;
            const Segment& seg = plan.segments[s];
            const auto t0 = std::chrono::steady_clock::now();
            auto entries = sample_segment(video, seg, static_cast<int>(s), choice, spf);
            solver_time[s] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            out[s] = smooth_segment(video, seg, static_cast<int>(s),
                                    std::move(entries), smoothing_target(seg));
        }
    };
    const int workers = std::min<int>(resolve_threads(threads),
                                      static_cast<int>(std::max<std::size_t>(1, count)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (sampling_seconds)
        for (double t : solver_time) *sampling_seconds += t;
    return out;
}

inline PipelineResult run_pipeline(const VideoRecord& video,
                                   const PipelineConfig& config) {
    PipelineResult result;
    const SemanticProfile profile = build_profile(video, config.smooth_radius);
    auto segments =
        segment_profile(profile, config.levels, default_min_seg_len(config));
    result.plan = assign_rates(std::move(segments), config.required_speedup);

    const auto per_segment =
        sample_and_smooth(video, result.plan, config.sampler, config.spf,
                          config.threads, &result.sampling_seconds);

    if (config.fill_gaps) {
        result.selection = fill_all(video, result.plan, per_segment, config.sampler,
                                    config.spf, &result.effective_rates);
    } else {
        result.selection.required_speedup = result.plan.required_speedup;
        for (const auto& seg_entries : per_segment) {
            result.selection.entries.insert(result.selection.entries.end(),
                                            seg_entries.begin(), seg_entries.end());
            // effective rate sequence without bridges
        }
        for (const auto& s : result.plan.segments)
            result.effective_rates.rates.push_back(s.speedup);
        std::sort(result.selection.entries.begin(), result.selection.entries.end(),
                  [](const SelectionEntry& a, const SelectionEntry& b) {
                      return a.frame < b.frame;
                  });
    }
    result.metrics = evaluate(video, result.selection, result.effective_rates.rates,
                              config.metrics_window);
    return result;
}

// Evenly spaced baseline at the same frame budget, for A/B comparisons.
inline Selection uniform_selection(const VideoRecord& video, std::size_t m,
                                   double required_speedup) {
    Selection sel;
    sel.required_speedup = required_speedup;
    const std::size_t n = video.size();
    m = std::max<std::size_t>(1, std::min(m, n));
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint32_t frame = static_cast<std::uint32_t>(
            m == 1 ? 0 : (i * (n - 1)) / (m - 1));
        if (sel.entries.empty() || sel.entries.back().frame != frame)
            sel.entries.push_back({frame, 0, Provenance::sampled});
    }
    return sel;
}

}  // namespace ffwd
