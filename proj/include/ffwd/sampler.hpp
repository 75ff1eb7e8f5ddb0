#pragma once

// Per-segment weighted sparse frame sampling: closed-form weighted LLC,
// plus weighted Lasso (cyclic coordinate descent) and OMP used as
// ablation solvers. The dictionary D holds one frame descriptor per
// column; the story v is the column sum; the solvers pick the frames
// whose activations reconstruct v best.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "types.hpp"

namespace ffwd {

struct ActivationSolution {
    Eigen::VectorXd alpha;
    Eigen::VectorXd locality;        // g_i = ||d_i - v||
    Eigen::VectorXd weights;         // mean-normalized w
    double lambda = 0.0;
    Eigen::VectorXd story;           // v = sum of columns of D
    double reconstruction_error = 0.0;
};

enum class SamplerMethod { LLC, SC, OMP };

struct SamplerChoice {
    SamplerMethod method = SamplerMethod::LLC;
    double lambda_scale = 0.01;  // lambda = lambda_scale * trace(D'D) / n_seg
};

inline Eigen::VectorXd story_vector(const Eigen::MatrixXd& dictionary) {
    return dictionary.rowwise().sum();
}

inline Eigen::VectorXd locality_distances(const Eigen::MatrixXd& dictionary,
                                          const Eigen::VectorXd& story) {
    const Eigen::Index n = dictionary.cols();
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i)
        g[i] = (dictionary.col(i) - story).norm();
    return g;
}

// Camera-motion penalty weights: high motion maps to a low weight, making
// shaky frames cheaper to activate. Rescaled to mean 1.
inline Eigen::VectorXd motion_weights(const std::vector<double>& motion) {
    constexpr double eps = 1e-9;
    const Eigen::Index n = static_cast<Eigen::Index>(motion.size());
    const double mean =
        std::accumulate(motion.begin(), motion.end(), 0.0) / motion.size();
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i)
        w[i] = std::exp(-motion[i] / (mean + eps));
    const double wmean = w.mean();
    if (wmean <= 0.0) return Eigen::VectorXd::Ones(n);
    return w / wmean;
}

// Closed-form weighted LLC:
//   alpha = (D'D + lambda*diag((w_i g_i)^2))^-1 D'v,
// the unique minimizer of ||v - D a||^2 + lambda ||W g (*) a||^2.
// Trace-scaled jitter is added only when the factorization fails
// (duplicate frames make D'D singular at lambda = 0).
inline ActivationSolution solve_llc(const Eigen::MatrixXd& dictionary,
                                    const Eigen::VectorXd& weights,
                                    double lambda) {
    const Eigen::Index n = dictionary.cols();
    if (weights.size() != n)
        throw dimension_mismatch("solve_llc: weight length != column count");
    ActivationSolution sol;
    sol.story = story_vector(dictionary);
    sol.locality = locality_distances(dictionary, sol.story);
    sol.weights = weights;
    sol.lambda = lambda;

    Eigen::MatrixXd normal = dictionary.transpose() * dictionary;
    const Eigen::VectorXd rhs = dictionary.transpose() * sol.story;
    Eigen::MatrixXd system = normal;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double wg = weights[i] * sol.locality[i];
        system(i, i) += lambda * wg * wg;
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
    sol.alpha = ldlt.solve(rhs);
    const double residual_norm = (system * sol.alpha - rhs).norm();
    if (ldlt.info() != Eigen::Success ||
        !sol.alpha.allFinite() ||
        residual_norm > 1e-8 * (rhs.norm() + 1.0)) {
        const double jitter = 1e-10 * normal.trace() / static_cast<double>(n);
        system.diagonal().array() += jitter;
        sol.alpha = Eigen::LDLT<Eigen::MatrixXd>(system).solve(rhs);
    }
    sol.reconstruction_error = (sol.story - dictionary * sol.alpha).norm();
    return sol;
}

namespace detail {

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Cyclic coordinate descent for 0.5||v - D a||^2 + sum_i lambda*w_i*|a_i|.
inline Eigen::VectorXd lasso_cd(const Eigen::MatrixXd& dictionary,
                                const Eigen::VectorXd& story,
                                const Eigen::VectorXd& weights, double lambda,
                                Eigen::VectorXd alpha) {
    const Eigen::Index n = dictionary.cols();
    const Eigen::VectorXd col_sq = dictionary.colwise().squaredNorm();
    Eigen::VectorXd residual = story - dictionary * alpha;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (col_sq[i] <= 0.0) continue;
            const double old = alpha[i];
            const double rho = dictionary.col(i).dot(residual) + col_sq[i] * old;
            const double next = soft_threshold(rho, lambda * weights[i]) / col_sq[i];
            if (next != old) {
                residual += dictionary.col(i) * (old - next);
                alpha[i] = next;
                max_change = std::max(max_change, std::abs(next - old));
            }
        }
        if (max_change < 1e-8) break;
    }
    return alpha;
}

}  // namespace detail

// Weighted Lasso sampler. lambda is bisected (log domain) until the support
// size lands in [m, 1.1m]; the closest achieved support wins if 60 steps
// are not enough.
inline ActivationSolution solve_sc(const Eigen::MatrixXd& dictionary,
                                   const Eigen::VectorXd& weights,
                                   std::size_t target_m) {
    const Eigen::Index n = dictionary.cols();
    if (weights.size() != n)
        throw dimension_mismatch("solve_sc: weight length != column count");
    ActivationSolution sol;
    sol.story = story_vector(dictionary);
    sol.locality = locality_distances(dictionary, sol.story);
    sol.weights = weights;

    const double lambda_hat =
        (dictionary.transpose() * sol.story).cwiseAbs().maxCoeff();
    double log_lo = std::log(1e-6 * lambda_hat);
    double log_hi = std::log(1e6 * lambda_hat);
    const std::size_t m_hi = static_cast<std::size_t>(1.1 * target_m);

    Eigen::VectorXd best_alpha = Eigen::VectorXd::Zero(n);
    double best_lambda = lambda_hat;
    std::size_t best_gap = static_cast<std::size_t>(-1);
    for (int step = 0; step < 60; ++step) {
        const double lambda = std::exp(0.5 * (log_lo + log_hi));
        const Eigen::VectorXd alpha = detail::lasso_cd(
            dictionary, sol.story, weights, lambda, Eigen::VectorXd::Zero(n));
        const std::size_t nnz = static_cast<std::size_t>(
            (alpha.array().abs() > 0.0).count());
        const std::size_t gap =
            nnz < target_m ? target_m - nnz : (nnz > m_hi ? nnz - m_hi : 0);
        if (gap < best_gap) {
            best_gap = gap;
            best_alpha = alpha;
            best_lambda = lambda;
        }
        if (gap == 0) break;
        // nnz decreases as lambda grows
        (nnz > m_hi ? log_lo : log_hi) = std::log(lambda);
    }
    sol.alpha = best_alpha;
    sol.lambda = best_lambda;
    sol.reconstruction_error = (sol.story - dictionary * sol.alpha).norm();
    return sol;
}

// Greedy orthogonal matching pursuit: pick the column most correlated with
// the residual, re-fit least squares on the active set, repeat.
inline ActivationSolution solve_omp(const Eigen::MatrixXd& dictionary,
                                    std::size_t target_m) {
    const Eigen::Index n = dictionary.cols();
    if (target_m < 1 || static_cast<Eigen::Index>(target_m) > n)
        throw dimension_mismatch("solve_omp: target support out of range");
    ActivationSolution sol;
    sol.story = story_vector(dictionary);
    sol.locality = locality_distances(dictionary, sol.story);
    sol.weights = Eigen::VectorXd::Ones(n);
    sol.lambda = 0.0;
    sol.alpha = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Index> active;
    std::vector<char> used(n, 0);
    Eigen::VectorXd residual = sol.story;
    Eigen::VectorXd coeffs;
    while (active.size() < target_m && residual.norm() >= 1e-10) {
        Eigen::Index best = -1;
        double best_corr = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double corr = std::abs(dictionary.col(i).dot(residual));
            if (corr > best_corr) {
                best_corr = corr;
                best = i;
            }
        }
        if (best < 0 || best_corr <= 0.0) break;
        used[best] = 1;
        active.push_back(best);

        Eigen::MatrixXd sub(dictionary.rows(),
                            static_cast<Eigen::Index>(active.size()));
        for (std::size_t k = 0; k < active.size(); ++k)
            sub.col(static_cast<Eigen::Index>(k)) = dictionary.col(active[k]);
        coeffs = sub.colPivHouseholderQr().solve(sol.story);
        residual = sol.story - sub * coeffs;
    }
    for (std::size_t k = 0; k < active.size(); ++k)
        sol.alpha[active[k]] = coeffs[static_cast<Eigen::Index>(k)];
    sol.reconstruction_error = residual.norm();
    return sol;
}

// Top-m activations by magnitude; ties break toward the lower index.
inline std::vector<std::uint32_t> select_frames(const ActivationSolution& sol,
                                                std::size_t m) {
    const std::size_t n = static_cast<std::size_t>(sol.alpha.size());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return std::abs(sol.alpha[a]) > std::abs(sol.alpha[b]);
                     });
    order.resize(std::min(m, n));
    std::sort(order.begin(), order.end());
    return order;
}

inline Eigen::MatrixXd segment_dictionary(const VideoRecord& video,
                                          std::uint32_t start,
                                          std::uint32_t end) {
    const Eigen::Index f = video.feature_dim;
    Eigen::MatrixXd d(f, end - start + 1);
    for (std::uint32_t i = start; i <= end; ++i)
        for (Eigen::Index r = 0; r < f; ++r)
            d(r, i - start) = video.frames[i].features[r];
    return d;
}

// First sampling phase: m = max(1, round(n_seg / (speedup * SpF))) frames,
// so smoothing has the remaining (SpF-1)/SpF of the budget to spend on the
// shakiest transitions.
inline std::vector<SelectionEntry> sample_segment(const VideoRecord& video,
                                                  const Segment& segment,
                                                  int segment_id,
                                                  const SamplerChoice& choice,
                                                  int spf) {
    const std::uint32_t n_seg = segment.length();
    const std::size_t m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               n_seg / (segment.speedup * static_cast<double>(spf)))));

    const Eigen::MatrixXd dict =
        segment_dictionary(video, segment.start, segment.end);
    std::vector<double> motion(n_seg);
    for (std::uint32_t i = 0; i < n_seg; ++i)
        motion[i] = video.frames[segment.start + i].motion;
    const Eigen::VectorXd w = motion_weights(motion);
    // trace(D'D) is the squared Frobenius norm
    const double lambda =
        choice.lambda_scale * dict.squaredNorm() / static_cast<double>(n_seg);

    ActivationSolution sol;
    switch (choice.method) {
        case SamplerMethod::LLC:
            sol = solve_llc(dict, w, lambda);
            break;
        case SamplerMethod::SC:
            sol = solve_sc(dict, w, m);
            break;
        case SamplerMethod::OMP:
            sol = solve_omp(dict, std::min<std::size_t>(m, n_seg));
            break;
    }
    std::vector<SelectionEntry> entries;
    for (std::uint32_t local : select_frames(sol, m))
        entries.push_back({segment.start + local, segment_id, Provenance::sampled});
    return entries;
}

}  // namespace ffwd
