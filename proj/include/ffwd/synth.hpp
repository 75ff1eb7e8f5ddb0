#pragma once

// Seeded synthetic scenario generation: plateau-structured videos with semantic
// plateaus covering a requested fraction of frames and shake bursts that
// perturb features, histograms, and thumbnails. Fully determined by the
// 64-bit seed via the counter-based generator.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace ffwd {

struct ShakeBurst {
    std::uint32_t start = 0;
    std::uint32_t length = 0;
    double amplitude = 1.0;
};

struct ScenarioSpec {
    std::uint32_t n = 1000;
    std::uint32_t feature_dim = 16;
    std::uint16_t hist_bins = 16;
    std::uint16_t thumb_w = 8;
    std::uint16_t thumb_h = 8;
    float fps = 30.0f;
    double semantic_fraction = 0.5;  // one of {0, 0.25, 0.5, 0.75}
    std::vector<ShakeBurst> shake_bursts;
    std::uint64_t seed = 1;
};

namespace detail {

// Plateau windows covering round(fraction * n) frames: one block when the
// fraction is small, two otherwise, positioned at the quarter points.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> plateau_windows(
    std::uint32_t n, double fraction) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> windows;
    const std::uint32_t total =
        static_cast<std::uint32_t>(std::llround(fraction * n));
    if (total == 0) return windows;
    if (total <= n / 4 || n < 8) {
        const std::uint32_t start = (n - total) / 2;
        windows.emplace_back(start, start + total);  // [start, stop)
    } else {
        const std::uint32_t first = (total + 1) / 2;
        const std::uint32_t second = total - first;
        std::uint32_t s1 = n / 4 > first / 2 ? n / 4 - first / 2 : 0;
        std::uint32_t s2 = std::min<std::uint32_t>(3 * n / 4 - second / 2, n - second);
        if (s1 + first > s2) s2 = s1 + first;  // keep windows disjoint
        windows.emplace_back(s1, s1 + first);
        windows.emplace_back(s2, std::min(s2 + second, n));
        if (windows[1].second - windows[1].first < second)
            windows[0].second += second - (windows[1].second - windows[1].first);
    }
    return windows;
}

}  // namespace detail

inline void validate_spec(const ScenarioSpec& spec) {
    if (spec.n < 1) throw invariant_error("InvalidSpec: n must be >= 1");
    if (spec.feature_dim < 1)
        throw invariant_error("InvalidSpec: feature_dim must be >= 1");
    if (spec.hist_bins < 1)
        throw invariant_error("InvalidSpec: hist_bins must be >= 1");
    if (spec.semantic_fraction < 0.0 || spec.semantic_fraction > 1.0)
        throw invariant_error("InvalidSpec: semantic_fraction out of [0,1]");
    for (const auto& b : spec.shake_bursts)
        if (b.start >= spec.n || b.start + b.length > spec.n)
            throw invariant_error("InvalidSpec: shake burst outside [0, n)");
}

inline VideoRecord generate(const ScenarioSpec& spec) {
    validate_spec(spec);
    const std::uint32_t n = spec.n;
    const std::uint32_t f = spec.feature_dim;
    const std::uint16_t bins = spec.hist_bins;
    const std::size_t pixels =
        static_cast<std::size_t>(spec.thumb_w) * spec.thumb_h;

    std::vector<double> burst_amp(n, 0.0);
    for (const auto& b : spec.shake_bursts)
        for (std::uint32_t i = b.start; i < b.start + b.length; ++i)
            burst_amp[i] = std::max(burst_amp[i], b.amplitude);

    VideoRecord video;
    video.feature_dim = f;
    video.hist_bins = bins;
    video.thumb_w = spec.thumb_w;
    video.thumb_h = spec.thumb_h;
    video.fps = spec.fps;
    video.frames.resize(n);

    const CounterRng feat_rng(spec.seed, 1);
    const CounterRng score_rng(spec.seed, 2);
    const CounterRng hist_rng(spec.seed, 3);
    const CounterRng thumb_rng(spec.seed, 4);

    // Features: mean-reverting walk (stationary, so activation mass does not
    // pile up at the trajectory extremes), steps scaled up inside bursts.
    // Motion is the per-frame step magnitude.
    std::vector<double> position(f, 0.0);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto& fr = video.frames[i];
        fr.index = i;
        fr.features.resize(f);
        double step_sq = 0.0;
        const double scale = 0.1 * (1.0 + 4.0 * burst_amp[i]);
        for (std::uint32_t d = 0; d < f; ++d) {
            const double step =
                i == 0 ? 0.0
                       : scale * feat_rng.normal(static_cast<std::uint64_t>(i) * f + d);
            position[d] = 0.97 * position[d] + step;
            step_sq += step * step;
            fr.features[d] = position[d] + 1.0;  // offset keeps stories nonzero
        }
        fr.motion = std::sqrt(step_sq);
    }

    // Semantic score: plateaus of height 1 plus clipped Gaussian noise.
    const auto windows = detail::plateau_windows(n, spec.semantic_fraction);
    for (std::uint32_t i = 0; i < n; ++i) {
        double base = 0.0;
        for (const auto& w : windows)
            if (i >= w.first && i < w.second) base = 1.0;
        video.frames[i].semantic_score =
            std::max(0.0, base + 0.05 * score_rng.normal(i));
    }

    // Histograms: slow drift of a per-channel mode, jumps inside bursts.
    double mode[3] = {0.25 * bins, 0.5 * bins, 0.75 * bins};
    for (std::uint32_t i = 0; i < n; ++i) {
        auto& fr = video.frames[i];
        fr.histograms.resize(3u * bins);
        for (int c = 0; c < 3; ++c) {
            const double drift = 0.05 + 2.0 * burst_amp[i];
            mode[c] += drift * hist_rng.normal(3ull * i + c);
            mode[c] = std::clamp(mode[c], 0.0, bins - 1.0);
            double sum = 0.0;
            for (std::uint16_t b = 0; b < bins; ++b) {
                const double d = (b - mode[c]) / (0.15 * bins);
                fr.histograms[c * bins + b] = std::exp(-0.5 * d * d) + 1e-6;
                sum += fr.histograms[c * bins + b];
            }
            for (std::uint16_t b = 0; b < bins; ++b) fr.histograms[c * bins + b] /= sum;
        }
    }

    // Thumbnails: low-frequency gradient sliding with the frame index plus
    // burst jitter.
    if (pixels > 0)
        for (std::uint32_t i = 0; i < n; ++i) {
            auto& fr = video.frames[i];
            fr.thumbnail.resize(pixels);
            const double phase = 0.02 * i;
            for (std::uint16_t y = 0; y < spec.thumb_h; ++y)
                for (std::uint16_t x = 0; x < spec.thumb_w; ++x) {
                    double value =
                        127.5 + 100.0 * std::sin(phase + 0.7 * x + 0.4 * y);
                    if (burst_amp[i] > 0.0)
                        value += 60.0 * burst_amp[i] *
                                 thumb_rng.normal(static_cast<std::uint64_t>(i) * pixels +
                                                  y * spec.thumb_w + x);
                    fr.thumbnail[y * spec.thumb_w + x] = static_cast<std::uint8_t>(
                        std::clamp(value, 0.0, 255.0));
                }
        }

    validate(video);
    return video;
}

// Gradient of the weighted LLC objective at alpha, built from first
// principles; independent of the factorization path in the solver.
inline Eigen::VectorXd oracle_llc_gradient(const Eigen::MatrixXd& dictionary,
                                           const Eigen::VectorXd& weights,
                                           double lambda,
                                           const Eigen::VectorXd& alpha) {
    if (weights.size() != dictionary.cols() || alpha.size() != dictionary.cols())
        throw dimension_mismatch("oracle_llc_gradient: size mismatch");
    const Eigen::VectorXd story = dictionary.rowwise().sum();
    Eigen::VectorXd g(dictionary.cols());
    for (Eigen::Index i = 0; i < dictionary.cols(); ++i)
        g[i] = (dictionary.col(i) - story).norm();
    Eigen::VectorXd grad =
        2.0 * (dictionary.transpose() * (dictionary * alpha - story));
    for (Eigen::Index i = 0; i < dictionary.cols(); ++i) {
        const double wg = weights[i] * g[i];
        grad[i] += 2.0 * lambda * wg * wg * alpha[i];
    }
    return grad;
}

inline double llc_objective(const Eigen::MatrixXd& dictionary,
                            const Eigen::VectorXd& weights, double lambda,
                            const Eigen::VectorXd& alpha) {
    const Eigen::VectorXd story = dictionary.rowwise().sum();
    Eigen::VectorXd g(dictionary.cols());
    for (Eigen::Index i = 0; i < dictionary.cols(); ++i)
        g[i] = (dictionary.col(i) - story).norm();
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < dictionary.cols(); ++i) {
        const double t = weights[i] * g[i] * alpha[i];
        penalty += t * t;
    }
    return (story - dictionary * alpha).squaredNorm() + lambda * penalty;
}

// First-order minimizer of the LLC objective, used as the optimality
// oracle: conjugate gradient on the (symmetric positive definite) normal
// system, driven purely by objective gradients.
inline Eigen::VectorXd oracle_llc_minimizer(const Eigen::MatrixXd& dictionary,
                                            const Eigen::VectorXd& weights,
                                            double lambda,
                                            double grad_tol = 1e-10) {
    const Eigen::Index n = dictionary.cols();
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad = oracle_llc_gradient(dictionary, weights, lambda, alpha);
    Eigen::VectorXd direction = -grad;
    for (Eigen::Index it = 0; it < 4 * n + 100; ++it) {
        if (grad.norm() <= grad_tol) break;
        // curvature along the direction via two gradient evaluations
        const Eigen::VectorXd grad_at =
            oracle_llc_gradient(dictionary, weights, lambda, alpha + direction);
        const double curvature = direction.dot(grad_at - grad);
        if (curvature <= 0.0) break;
        const double step = -grad.dot(direction) / curvature;
        alpha += step * direction;
        const Eigen::VectorXd next_grad =
            oracle_llc_gradient(dictionary, weights, lambda, alpha);
        const double beta =
            next_grad.dot(next_grad - grad) / grad.squaredNorm();
        direction = -next_grad + std::max(0.0, beta) * direction;
        grad = next_grad;
    }
    return alpha;
}

// Exhaustive best m-subset least-squares reconstruction of the story.
inline std::pair<std::vector<Eigen::Index>, double> oracle_best_subset(
    const Eigen::MatrixXd& dictionary, std::size_t m) {
    const Eigen::Index n = dictionary.cols();
    double combos = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        combos *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (combos > 5e5) throw invariant_error("oracle_best_subset: TooLarge");

    const Eigen::VectorXd story = dictionary.rowwise().sum();
    std::vector<Eigen::Index> subset(m), best;
    double best_residual = std::numeric_limits<double>::infinity();
    // lexicographic enumeration of m-combinations
    for (std::size_t i = 0; i < m; ++i) subset[i] = static_cast<Eigen::Index>(i);
    for (;;) {
        Eigen::MatrixXd sub(dictionary.rows(), static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k)
            sub.col(static_cast<Eigen::Index>(k)) = dictionary.col(subset[k]);
        const Eigen::VectorXd coeffs = sub.colPivHouseholderQr().solve(story);
        const double residual = (story - sub * coeffs).norm();
        if (residual < best_residual) {
            best_residual = residual;
            best = subset;
        }
        std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(m) - 1;
        while (pos >= 0 && subset[pos] == n - static_cast<Eigen::Index>(m - pos))
            --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (std::size_t k = pos + 1; k < m; ++k) subset[k] = subset[k - 1] + 1;
    }
    return {best, best_residual};
}

}  // namespace ffwd
