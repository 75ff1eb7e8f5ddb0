#include <catch2/catch_amalgamated.hpp>

#include "ffwd/gapfill.hpp"
#include "ffwd/metrics.hpp"
#include "ffwd/pipeline.hpp"
#include "ffwd/synth.hpp"

using namespace ffwd;

namespace {

// Two-segment scenario with a histogram jump at the boundary so bridging
// triggers; rates 14 and 2 mirror an abrupt semantic transition.
struct TwoSegmentRun {
    VideoRecord video;
    RatePlan plan;
    std::vector<std::vector<SelectionEntry>> per_segment;
};

TwoSegmentRun make_two_segment_run(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.n = 600;
    spec.feature_dim = 8;
    spec.seed = seed;
    spec.semantic_fraction = 0.0;
    // burst centered in segment A pulls samples inward, leaving a visual gap
    // at the segment boundary
    spec.shake_bursts = {{170, 60, 2.0}};
    TwoSegmentRun run;
    run.video = generate(spec);
    run.plan.required_speedup = 10.0;
    run.plan.segments = {{0, 399, 0, 14.0}, {400, 599, 1, 2.0}};
    run.per_segment = sample_and_smooth(run.video, run.plan, {}, 2, 1);
    return run;
}

}  // namespace

TEST_CASE("needs_bridge evaluates the literal comparison") {
    ScenarioSpec spec;
    spec.n = 100;
    spec.feature_dim = 4;
    spec.seed = 3;
    const auto video = generate(spec);

    SECTION("zero boundary instability never exceeds a nonnegative mean") {
        // consecutive frames drift, so segment A's mean is positive while the
        // boundary pair (same frame histograms) contributes zero
        std::vector<std::uint32_t> a = {0, 30, 60};
        std::vector<std::uint32_t> b = {60, 90};
        const double boundary = instability(video, a.back(), b.front(), 14.0);
        REQUIRE(boundary == 0.0);  // same frame on both sides
        if (mean_instability(video, a, 14.0) >= 0.0)
            REQUIRE_FALSE(needs_bridge(video, a, b, 14.0));
    }
    SECTION("positive boundary over a zero mean triggers") {
        std::vector<std::uint32_t> a = {10};  // <2 frames: mean defined as 0
        std::vector<std::uint32_t> b = {90};
        const double boundary = instability(video, 10, 90, 10.0);
        REQUIRE(needs_bridge(video, a, b, 10.0) == (boundary > 0.0));
    }
    SECTION("matches an independent recomputation on a seeded scenario") {
        std::vector<std::uint32_t> a = {0, 11, 19, 33, 47};
        std::vector<std::uint32_t> b = {70, 80, 95};
        double mean = 0.0;
        for (std::size_t i = 0; i + 1 < a.size(); ++i)
            mean += instability(video, a[i], a[i + 1], 9.0);
        mean /= double(a.size() - 1);
        const bool expected = instability(video, 47, 70, 9.0) > mean;
        REQUIRE(needs_bridge(video, a, b, 9.0) == expected);
    }
}

TEST_CASE("fill_gap") {
    ScenarioSpec spec;
    spec.n = 200;
    spec.feature_dim = 6;
    spec.seed = 41;
    const auto video = generate(spec);

    SECTION("adjacent anchors produce nothing") {
        BridgeSegment bridge{50, 51, 8.0};
        REQUIRE(fill_gap(video, bridge, -1, {}, 2).empty());
    }
    SECTION("gap of 28 at bridge speedup 8 inserts 4 frames") {
        BridgeSegment bridge{100, 128, 8.0};
        const auto entries = fill_gap(video, bridge, -1, {}, 2);
        REQUIRE(entries.size() == 4);
        for (const auto& e : entries) {
            REQUIRE(e.frame > 100);
            REQUIRE(e.frame < 128);
            REQUIRE(e.provenance == Provenance::gapfill);
        }
    }
}

TEST_CASE("fill_all preserves and extends the selection") {
    const auto run = make_two_segment_run(7);
    EffectiveRates rates;
    const Selection filled =
        fill_all(run.video, run.plan, run.per_segment, {}, 2, &rates);
    Selection plain;
    plain.required_speedup = 10.0;
    for (const auto& seg : run.per_segment)
        plain.entries.insert(plain.entries.end(), seg.begin(), seg.end());

    // no previously selected frame is removed
    std::vector<std::uint32_t> filled_idx = filled.indices();
    for (const auto& e : plain.entries)
        REQUIRE(std::find(filled_idx.begin(), filled_idx.end(), e.frame) !=
                filled_idx.end());
    // strictly increasing, duplicate-free
    for (std::size_t i = 1; i < filled_idx.size(); ++i)
        REQUIRE(filled_idx[i] > filled_idx[i - 1]);
    // gapfill entries lie strictly between their anchors
    const std::uint32_t left = run.per_segment[0].back().frame;
    const std::uint32_t right = run.per_segment[1].front().frame;
    for (const auto& e : filled.entries)
        if (e.provenance == Provenance::gapfill) {
            REQUIRE(e.frame > left);
            REQUIRE(e.frame < right);
        }
}

TEST_CASE("single segment passes through untouched") {
    ScenarioSpec spec;
    spec.n = 150;
    spec.feature_dim = 4;
    spec.seed = 13;
    const auto video = generate(spec);
    RatePlan plan;
    plan.required_speedup = 10.0;
    plan.segments = {{0, 149, 0, 10.0}};
    const auto per_segment = sample_and_smooth(video, plan, {}, 2, 1);
    const Selection filled = fill_all(video, plan, per_segment, {}, 2);
    REQUIRE(filled.entries.size() == per_segment[0].size());
    for (std::size_t i = 0; i < filled.entries.size(); ++i)
        REQUIRE(filled.entries[i].frame == per_segment[0][i].frame);
}

TEST_CASE("filling reduces discontinuity and transition roughness on seeded runs") {
    int improved_disc = 0, total = 0;
    for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
        const auto run = make_two_segment_run(seed);
        EffectiveRates rates;
        const Selection filled =
            fill_all(run.video, run.plan, run.per_segment, {}, 2, &rates);
        Selection plain;
        plain.required_speedup = 10.0;
        for (const auto& seg : run.per_segment)
            plain.entries.insert(plain.entries.end(), seg.begin(), seg.end());

        if (filled.entries.size() > plain.entries.size()) {
            const double with_fill = discontinuity(filled.indices(), 10.0);
            const double without = discontinuity(plain.indices(), 10.0);
            REQUIRE(with_fill <= without + 1e-9);
            ++improved_disc;
            // bridge rate sits between the segment rates, halving the jump
            REQUIRE(transition_smoothness(rates.rates) <
                    transition_smoothness({14.0, 2.0}));
        }
        ++total;
    }
    REQUIRE(improved_disc >= 1);  // the burst boundary must trigger at least once
}
