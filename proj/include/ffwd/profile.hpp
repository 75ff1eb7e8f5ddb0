#pragma once

// Temporal semantic profile: smoothing, Otsu segmentation into importance
// levels, and per-segment speed-up assignment under a global budget.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "types.hpp"

namespace ffwd {

struct SemanticProfile {
    std::vector<double> raw;
    std::vector<double> smoothed;
};

struct RatePlan {
    std::vector<Segment> segments;
    double required_speedup = 0.0;
    double rate_min = 1.0;
    double rate_max = 0.0;
    bool feasible = true;
};

// Classifier detection collapsed to a per-frame score: confidence times a
// Gaussian centrality factor times the area fraction, summed over detections.
struct Detection {
    double confidence = 0.0;
    double center_x = 0.5;
    double center_y = 0.5;
    double area_fraction = 0.0;
};

inline double detection_score(const std::vector<Detection>& detections) {
    constexpr double sigma_c = 0.35;
    double score = 0.0;
    for (const auto& d : detections) {
        if (d.confidence < 0 || d.confidence > 1 || d.center_x < 0 ||
            d.center_x > 1 || d.center_y < 0 || d.center_y > 1 ||
            d.area_fraction < 0 || d.area_fraction > 1)
            throw invariant_error("detection_score: OutOfRangeInput");
        const double dx = d.center_x - 0.5;
        const double dy = d.center_y - 0.5;
        score += d.confidence *
                 std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_c * sigma_c)) *
                 d.area_fraction;
    }
    return score;
}

// Moving average with radius r, window clamped at the edges.
inline SemanticProfile build_profile(const VideoRecord& video, int radius) {
    SemanticProfile p;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(video.size());
    p.raw.reserve(n);
    for (const auto& fr : video.frames) p.raw.push_back(fr.semantic_score);
    p.smoothed.resize(n);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - radius);
        const std::ptrdiff_t hi = std::min(n - 1, i + radius);
        double sum = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) sum += p.raw[j];
        p.smoothed[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return p;
}

namespace detail {

// Otsu threshold over a 256-bin histogram of the scores. Returns the
// mean score when the between-class variance never separates two classes.
inline double otsu_threshold(const std::vector<double>& scores) {
    const double lo = *std::min_element(scores.begin(), scores.end());
    const double hi = *std::max_element(scores.begin(), scores.end());
    const double mean =
        std::accumulate(scores.begin(), scores.end(), 0.0) / scores.size();
    if (hi - lo < 1e-12) return mean;

    constexpr int kBins = 256;
    std::vector<double> hist(kBins, 0.0);
    const double scale = (kBins - 1) / (hi - lo);
    for (double s : scores) {
        int b = static_cast<int>((s - lo) * scale);
        hist[std::clamp(b, 0, kBins - 1)] += 1.0;
    }
    const double total = static_cast<double>(scores.size());
    double sum_all = 0.0;
    for (int b = 0; b < kBins; ++b) sum_all += b * hist[b];

    double w0 = 0.0, sum0 = 0.0, best_var = -1.0;
    int best_bin = -1;
    for (int b = 0; b < kBins - 1; ++b) {
        w0 += hist[b];
        if (w0 == 0.0) continue;
        const double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += b * hist[b];
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double var = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (var > best_var) {
            best_var = var;
            best_bin = b;
        }
    }
    if (best_bin < 0 || best_var <= 0.0) return mean;
    return lo + (best_bin + 0.5) / scale;
}

}  // namespace detail

// Threshold the smoothed profile (score > tau is semantic; ties are
// non-semantic), merge runs shorter than min_len into the longer neighbor,
// then grade semantic runs into `levels` quantile bins of their mean score.
inline std::vector<Segment> segment_profile(const SemanticProfile& profile,
                                            int levels, std::uint32_t min_len) {
    if (profile.smoothed.empty()) throw invariant_error("EmptyProfile");
    if (levels < 1) throw invariant_error("segment_profile: levels must be >= 1");
    if (min_len < 1) min_len = 1;
    const std::size_t n = profile.smoothed.size();
    const double tau = detail::otsu_threshold(profile.smoothed);

    std::vector<char> semantic(n);
    for (std::size_t i = 0; i < n; ++i)
        semantic[i] = profile.smoothed[i] > tau ? 1 : 0;

    struct Run {
        std::size_t start, end;
        char label;
        std::size_t len() const { return end - start + 1; }
    };
    auto collect = [&] {
        std::vector<Run> runs;
        std::size_t start = 0;
        for (std::size_t i = 1; i <= n; ++i)
            if (i == n || semantic[i] != semantic[start]) {
                runs.push_back({start, i - 1, semantic[start]});
                start = i;
            }
        return runs;
    };

    // Merge shortest undersized run first; relabeling joins it with a neighbor.
    for (;;) {
        auto runs = collect();
        if (runs.size() <= 1) break;
        std::size_t worst = runs.size();
        for (std::size_t r = 0; r < runs.size(); ++r)
            if (runs[r].len() < min_len &&
                (worst == runs.size() || runs[r].len() < runs[worst].len()))
                worst = r;
        if (worst == runs.size()) break;
        std::size_t neighbor;
        if (worst == 0)
            neighbor = 1;
        else if (worst == runs.size() - 1)
            neighbor = worst - 1;
        else
            neighbor = runs[worst - 1].len() >= runs[worst + 1].len() ? worst - 1
                                                                      : worst + 1;
        for (std::size_t i = runs[worst].start; i <= runs[worst].end; ++i)
            semantic[i] = runs[neighbor].label;
    }

    auto runs = collect();
    std::vector<Segment> segments;
    segments.reserve(runs.size());
    for (const auto& r : runs)
        segments.push_back({static_cast<std::uint32_t>(r.start),
                            static_cast<std::uint32_t>(r.end),
                            r.label ? 1 : 0, 1.0});

    // Importance levels: quantiles of each semantic segment's mean score.
    std::vector<std::size_t> sem_ids;
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (segments[s].importance_level > 0) sem_ids.push_back(s);
    if (!sem_ids.empty() && levels > 1) {
        std::vector<double> means(sem_ids.size());
        for (std::size_t k = 0; k < sem_ids.size(); ++k) {
            const auto& seg = segments[sem_ids[k]];
            double sum = 0.0;
            for (std::uint32_t i = seg.start; i <= seg.end; ++i)
                sum += profile.smoothed[i];
            means[k] = sum / seg.length();
        }
        std::vector<double> sorted = means;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sem_ids.size(); ++k) {
            const std::size_t rank =
                std::lower_bound(sorted.begin(), sorted.end(), means[k]) -
                sorted.begin();
            int level = 1 + static_cast<int>(rank * levels / sorted.size());
            segments[sem_ids[k]].importance_level = std::min(level, levels);
        }
    }
    return segments;
}

// Rates follow s_k = c / (1 + level_k) clamped to [s_min, s_max]; c is found
// by bisection so the total output length lands within one frame of the
// target. Clamping redistributes the residual over unclamped segments
// implicitly, since the bisection searches the clamped objective.
inline RatePlan assign_rates(std::vector<Segment> segments, double required_speedup,
                             double s_min = 1.0, double s_max = 0.0) {
    if (segments.empty()) throw invariant_error("assign_rates: no segments");
    if (required_speedup <= 1.0)
        throw invariant_error("assign_rates: required speed-up must exceed 1");
    if (s_max <= 0.0) s_max = 4.0 * required_speedup;

    double total_len = 0.0;
    int max_level = 0;
    for (const auto& s : segments) {
        total_len += s.length();
        max_level = std::max(max_level, s.importance_level);
    }
    const double target = total_len / required_speedup;

    auto achieved = [&](double c) {
        double out = 0.0;
        for (const auto& s : segments)
            out += s.length() /
                   std::clamp(c / (1.0 + s.importance_level), s_min, s_max);
        return out;  // decreasing in c
    };

    double lo = s_min, hi = s_max * (1 + max_level);
    RatePlan plan;
    plan.required_speedup = required_speedup;
    plan.rate_min = s_min;
    plan.rate_max = s_max;
    if (achieved(hi) > target + 1.0) {
        // even everything clamped at s_max overshoots the frame budget
        plan.feasible = false;
        lo = hi;
    } else if (achieved(lo) < target - 1.0) {
        plan.feasible = false;
        hi = lo;
    } else {
        for (int it = 0; it < 200 && std::abs(achieved(0.5 * (lo + hi)) - target) > 1e-9;
             ++it) {
            const double mid = 0.5 * (lo + hi);
            (achieved(mid) > target ? lo : hi) = mid;
        }
    }
    const double c = 0.5 * (lo + hi);
    for (auto& s : segments)
        s.speedup = std::clamp(c / (1.0 + s.importance_level), s_min, s_max);
    // An infeasible plan is still returned best-effort; plan.feasible tells
    // the caller to report InfeasibleRates.
    plan.segments = std::move(segments);
    return plan;
}

}  // namespace ffwd
