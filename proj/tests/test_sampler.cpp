#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ffwd/sampler.hpp"
#include "ffwd/synth.hpp"

using namespace ffwd;

namespace {

Eigen::MatrixXd random_dictionary(std::uint64_t seed, int f, int n) {
    CounterRng rng(seed);
    Eigen::MatrixXd d(f, n);
    std::uint64_t ctr = 0;
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < f; ++r) d(r, c) = rng.normal(ctr++);
    return d;
}

double l1_objective(const Eigen::MatrixXd& d, const Eigen::VectorXd& w,
                    double lambda, const Eigen::VectorXd& alpha) {
    const Eigen::VectorXd v = d.rowwise().sum();
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        penalty += w[i] * std::abs(alpha[i]);
    return 0.5 * (v - d * alpha).squaredNorm() + lambda * penalty;
}

}  // namespace

TEST_CASE("motion weights") {
    SECTION("equal motion gives all-ones") {
        const auto w = motion_weights({2.0, 2.0, 2.0});
        for (int i = 0; i < 3; ++i) REQUIRE(w[i] == Catch::Approx(1.0));
    }
    SECTION("zero motion everywhere gives all-ones") {
        const auto w = motion_weights({0.0, 0.0});
        REQUIRE(w[0] == 1.0);
        REQUIRE(w[1] == 1.0);
    }
    SECTION("higher motion lowers the weight") {
        const auto w = motion_weights({0.0, 50.0});
        REQUIRE(w[0] > w[1]);
    }
    SECTION("hand-evaluated exponential map for motion (1,2,3)") {
        const auto w = motion_weights({1.0, 2.0, 3.0});
        Eigen::Vector3d expected(std::exp(-0.5), std::exp(-1.0), std::exp(-1.5));
        expected /= expected.mean();
        for (int i = 0; i < 3; ++i)
            REQUIRE(w[i] == Catch::Approx(expected[i]).epsilon(1e-9));
        REQUIRE(w.mean() == Catch::Approx(1.0));
    }
}

TEST_CASE("LLC on a single column reconstructs exactly") {
    Eigen::MatrixXd d(3, 1);
    d << 1.0, 2.0, -1.0;
    const auto sol = solve_llc(d, Eigen::VectorXd::Ones(1), 0.0);
    REQUIRE(sol.alpha[0] == Catch::Approx(1.0));
    REQUIRE(sol.reconstruction_error == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("LLC with orthonormal identity columns reconstructs the column sum") {
    const Eigen::MatrixXd d = Eigen::MatrixXd::Identity(2, 2);
    const auto sol = solve_llc(d, Eigen::VectorXd::Ones(2), 0.0);
    // v = d1 + d2 = (1,1), so alpha = (1,1)
    REQUIRE(sol.alpha[0] == Catch::Approx(1.0));
    REQUIRE(sol.alpha[1] == Catch::Approx(1.0));
}

TEST_CASE("LLC matches the first-order oracle on a seeded 8x20 instance") {
    const auto d = random_dictionary(42, 8, 20);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(20);
    for (int i = 0; i < 20; ++i) w[i] = 0.5 + 0.1 * i / 20.0;
    w /= w.mean();
    const double lambda = 0.01;
    const auto sol = solve_llc(d, w, lambda);
    const Eigen::VectorXd grad = oracle_llc_gradient(d, w, lambda, sol.alpha);
    const double scale = (d.transpose() * sol.story).cwiseAbs().maxCoeff();
    REQUIRE(grad.cwiseAbs().maxCoeff() < 1e-8 * scale);

    const Eigen::VectorXd oracle = oracle_llc_minimizer(d, w, lambda);
    REQUIRE((sol.alpha - oracle).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("LLC survives a singular dictionary via jitter") {
    Eigen::MatrixXd d(3, 4);
    d.col(0) << 1, 0, 0;
    d.col(1) << 1, 0, 0;  // duplicate frame
    d.col(2) << 0, 1, 0;
    d.col(3) << 0, 0, 1;
    const auto sol = solve_llc(d, Eigen::VectorXd::Ones(4), 0.0);
    REQUIRE(sol.alpha.allFinite());
    REQUIRE(sol.reconstruction_error < 1e-5);
}

TEST_CASE("weight monotonicity: lowering one weight never shrinks its activation") {
    // otherwise-identical frames: activation mass flows to the cheap frame
    Eigen::MatrixXd d(4, 10);
    Eigen::Vector4d frame(1.0, -0.5, 0.25, 2.0);
    for (int c = 0; c < 10; ++c) d.col(c) = frame;
    Eigen::VectorXd w = Eigen::VectorXd::Ones(10);
    const double lambda = 0.5;
    const auto base = solve_llc(d, w, lambda);
    w[3] = 0.1;
    const auto tweaked = solve_llc(d, w, lambda);
    REQUIRE(std::abs(tweaked.alpha[3]) >= std::abs(base.alpha[3]) - 1e-12);
}

TEST_CASE("Lasso: huge penalty zeroes the solution") {
    const auto d = random_dictionary(3, 4, 6);
    const Eigen::VectorXd v = d.rowwise().sum();
    const double lambda = 1e9 * (d.transpose() * v).cwiseAbs().maxCoeff();
    const auto alpha = ffwd::detail::lasso_cd(d, v, Eigen::VectorXd::Ones(6),
                                              lambda, Eigen::VectorXd::Zero(6));
    REQUIRE(alpha.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Lasso: zero penalty on a square nonsingular dictionary solves exactly") {
    Eigen::MatrixXd d(3, 3);
    d << 2, 0.3, -0.1, 0.1, 1.5, 0.2, -0.4, 0.0, 1.1;
    const Eigen::VectorXd v = d.rowwise().sum();
    const auto alpha = ffwd::detail::lasso_cd(d, v, Eigen::VectorXd::Ones(3), 0.0,
                                              Eigen::VectorXd::Zero(3));
    const Eigen::VectorXd exact = d.colPivHouseholderQr().solve(v);
    REQUIRE((alpha - exact).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("Lasso bisection hits the requested support size") {
    const auto d = random_dictionary(13, 8, 20);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(20);
    const auto sol = solve_sc(d, w, 5);
    const auto nnz = (sol.alpha.array().abs() > 0.0).count();
    REQUIRE(nnz >= 5);
    REQUIRE(nnz <= 5 + 1);  // ceil(1.1 * 5)
}

TEST_CASE("Lasso output beats LLC's alpha under the L1 objective") {
    const auto d = random_dictionary(21, 8, 20);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(20);
    const auto sc = solve_sc(d, w, 5);
    const auto llc = solve_llc(d, w, sc.lambda);
    REQUIRE(l1_objective(d, w, sc.lambda, sc.alpha) <=
            l1_objective(d, w, sc.lambda, llc.alpha) + 1e-9);
}

TEST_CASE("OMP finds a single matching atom") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d(0, 0) = 5.0;   // v = (5,1,-1); column 0 dominates
    d(1, 1) = 1.0;
    d(2, 2) = -1.0;
    const auto sol = solve_omp(d, 3);
    REQUIRE((sol.alpha.array().abs() > 0).count() == 3);
    REQUIRE(sol.reconstruction_error < 1e-10);
    // with m=1 the greedy pick is the dominant column
    const auto one = solve_omp(d, 1);
    REQUIRE(one.alpha[0] != 0.0);
    REQUIRE(one.alpha[1] == 0.0);
}

TEST_CASE("OMP with full support reaches full least squares") {
    const auto d = random_dictionary(31, 6, 6);
    const auto sol = solve_omp(d, 6);
    REQUIRE(sol.reconstruction_error < 1e-8);
}

// Low-coherence 6x12 dictionaries: six near-orthogonal directions, each
// shared by two collinear atoms with distinct gains. Greedy selection is
// near-optimal here; generic dense dictionaries carry no such bound.
Eigen::MatrixXd low_coherence_dictionary(std::uint64_t seed) {
    CounterRng rng(seed);
    std::uint64_t ctr = 0;
    Eigen::MatrixXd d(6, 12);
    for (int c = 0; c < 6; ++c) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(6);
        u[c] = 1.0;
        for (int r = 0; r < 6; ++r) u[r] += 0.05 * rng.normal(ctr++);
        u.normalize();
        const double gain = 0.4 + rng.uniform(1000 + c);
        d.col(c) = gain * u;
        d.col(c + 6) = 0.35 * gain * u;
    }
    return d;
}

TEST_CASE("OMP is within 2x of the exhaustive best subset on seeded 6x12 instances") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto d = low_coherence_dictionary(seed * 97);
        const auto sol = solve_omp(d, 3);
        const auto [subset, best] = oracle_best_subset(d, 3);
        REQUIRE(sol.reconstruction_error >= best - 1e-9);
        REQUIRE(sol.reconstruction_error <= 2.0 * best + 1e-9);
    }
}

TEST_CASE("select_frames takes top magnitudes with lowest-index ties") {
    ActivationSolution sol;
    sol.alpha = Eigen::Vector3d(0.9, 0.1, 0.5);
    REQUIRE(select_frames(sol, 2) == std::vector<std::uint32_t>{0, 2});
    sol.alpha = Eigen::Vector3d(0.3, 0.3, 0.3);
    REQUIRE(select_frames(sol, 2) == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("select_frames matches an independent sort oracle") {
    CounterRng rng(5);
    ActivationSolution sol;
    sol.alpha.resize(30);
    for (int i = 0; i < 30; ++i) sol.alpha[i] = rng.normal(i);
    const auto got = select_frames(sol, 7);

    std::vector<std::pair<double, int>> keyed;
    for (int i = 0; i < 30; ++i) keyed.push_back({std::abs(sol.alpha[i]), -i});
    std::sort(keyed.begin(), keyed.end(), std::greater<>());
    std::vector<std::uint32_t> expected;
    for (int k = 0; k < 7; ++k) expected.push_back(std::uint32_t(-keyed[k].second));
    std::sort(expected.begin(), expected.end());
    REQUIRE(got == expected);
}

TEST_CASE("sample_segment frame budgets") {
    ScenarioSpec spec;
    spec.n = 100;
    spec.feature_dim = 6;
    spec.seed = 9;
    const auto video = generate(spec);

    SECTION("single-frame segment selects that frame") {
        Segment seg{42, 42, 0, 5.0};
        const auto entries = sample_segment(video, seg, 0, {}, 2);
        REQUIRE(entries.size() == 1);
        REQUIRE(entries[0].frame == 42);
        REQUIRE(entries[0].provenance == Provenance::sampled);
    }
    SECTION("n=100, speedup 10, SpF 2 gives m=5") {
        Segment seg{0, 99, 0, 10.0};
        REQUIRE(sample_segment(video, seg, 0, {}, 2).size() == 5);
    }
    SECTION("n=40, speedup 14, SpF 2 clamps to m=1") {
        Segment seg{10, 49, 0, 14.0};
        REQUIRE(sample_segment(video, seg, 0, {}, 2).size() == 1);
    }
}

TEST_CASE("solvers are deterministic across runs") {
    const auto d = random_dictionary(55, 8, 25);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(25);
    const auto a = solve_llc(d, w, 0.02);
    const auto b = solve_llc(d, w, 0.02);
    REQUIRE(a.alpha == b.alpha);
    const auto s1 = solve_sc(d, w, 6);
    const auto s2 = solve_sc(d, w, 6);
    REQUIRE(s1.alpha == s2.alpha);
}

TEST_CASE("dimension mismatches are rejected") {
    const auto d = random_dictionary(2, 4, 5);
    REQUIRE_THROWS_AS(solve_llc(d, Eigen::VectorXd::Ones(3), 0.1),
                      dimension_mismatch);
    REQUIRE_THROWS_AS(solve_sc(d, Eigen::VectorXd::Ones(4), 2),
                      dimension_mismatch);
    REQUIRE_THROWS_AS(solve_omp(d, 9), dimension_mismatch);
}
