#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracle_signature.hpp"
#include "sigsel/rng.hpp"
#include "sigsel/sigkernel.hpp"
#include "sigsel/wf.hpp"

using namespace sigsel;

namespace {

Path make_path(std::vector<double> times, std::vector<double> points, std::size_t d) {
    Path p;
    p.M = times.size();
    p.d = d;
    p.times = std::move(times);
    p.points = std::move(points);
    return p;
}

Trajectory make_traj(std::vector<std::int64_t> times, std::vector<std::vector<double>> freqs) {
    Trajectory t;
    t.times = std::move(times);
    t.freqs = std::move(freqs);
    return t;
}

constexpr double kFactorialSeries = 2.279585302336067;  // sum over n of 1/(n!)^2

}  // namespace

TEST_CASE("static_kernel values") {
    StaticKernelParams rbf{StaticKernelKind::RBF, 0.1};
    const std::vector<double> z{0.0, 0.0}, o{1.0, 1.0};
    REQUIRE(static_kernel(o, o, rbf) == 1.0);
    REQUIRE(static_kernel(z, o, rbf) == Catch::Approx(std::exp(-0.2)).epsilon(1e-14));
    REQUIRE(static_kernel(z, o, rbf) == Catch::Approx(0.8187307530779818).epsilon(1e-14));

    StaticKernelParams lin{StaticKernelKind::Linear, 0.0};
    REQUIRE(static_kernel({1.0, 2.0}, {3.0, 4.0}, lin) == Catch::Approx(11.0).margin(1e-15));
    REQUIRE_THROWS_AS(static_kernel({1.0}, {1.0, 2.0}, rbf), std::invalid_argument);
}

TEST_CASE("preprocess rescales time and stacks channels") {
    std::vector<std::vector<double>> freqs;
    std::vector<std::int64_t> times;
    for (int i = 0; i <= 10; ++i) {
        times.push_back(10 * i);
        freqs.push_back({0.1 * i, 0.5});
    }
    const Trajectory t = make_traj(times, freqs);

    const Path p = preprocess(t, false);
    REQUIRE(p.M == 11);
    REQUIRE(p.d == 2);
    for (int i = 0; i <= 10; ++i) REQUIRE(p.times[static_cast<std::size_t>(i)] == Catch::Approx(0.1 * i).margin(1e-15));
    REQUIRE(p.times.front() == 0.0);
    REQUIRE(p.times.back() == 1.0);

    const Path q = preprocess(t, true);
    REQUIRE(q.d == 3);
    for (std::size_t i = 0; i < q.M; ++i) REQUIRE(q.at(i, 0) == Catch::Approx(q.times[i]).margin(1e-15));
    for (std::size_t i = 0; i < q.M; ++i) REQUIRE(q.at(i, 1) == Catch::Approx(t.freqs[i][0]).margin(1e-15));

    const Trajectory single = make_traj({0}, {{0.5}});
    REQUIRE_THROWS_AS(preprocess(single, false), std::invalid_argument);
}

TEST_CASE("goursat constant path gives exactly one") {
    const Path c = make_path({0.0, 0.5, 1.0}, {0.3, 0.3, 0.3}, 1);
    const Path x = make_path({0.0, 1.0}, {0.1, 0.9}, 1);
    const StaticKernelParams rbf{StaticKernelKind::RBF, 5.0};
    const PDEConfig cfg{3};
    REQUIRE(goursat_solve(c, x, rbf, cfg) == 1.0);
    REQUIRE(goursat_solve(x, c, rbf, cfg) == 1.0);
}

TEST_CASE("goursat linear paths match the factorial series") {
    // x(t) = t*a, y(t) = t*b with <a,b> = 1
    const Path x = make_path({0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}, 2);
    const Path y = make_path({0.0, 1.0}, {0.0, 0.0, 1.0, 2.0}, 2);
    const StaticKernelParams lin{StaticKernelKind::Linear, 0.0};
    const double v6 = goursat_solve(x, y, lin, PDEConfig{6});
    REQUIRE(v6 == Catch::Approx(kFactorialSeries).margin(1e-3));
    // refinement converges monotonically toward the closed form
    double prev_err = 1e9;
    for (int order : {2, 4, 6}) {
        const double err = std::abs(goursat_solve(x, y, lin, PDEConfig{order}) - kFactorialSeries);
        REQUIRE(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("goursat matches truncated signatures on small piecewise-linear paths") {
    const std::vector<double> xp = {0.0, 0.0, 0.15, 0.05, 0.25, -0.1};
    const std::vector<double> yp = {0.0, 0.0, -0.1, 0.15, 0.05, 0.25};
    const Path x = make_path({0.0, 0.5, 1.0}, xp, 2);
    const Path y = make_path({0.0, 0.5, 1.0}, yp, 2);
    const StaticKernelParams lin{StaticKernelKind::Linear, 0.0};
    const double pde = goursat_solve(x, y, lin, PDEConfig{6});
    const double ref = oracle::signature_kernel(xp, 3, yp, 3, 2, 8);
    REQUIRE(pde == Catch::Approx(ref).margin(1e-4));
}

TEST_CASE("goursat symmetry") {
    Rng rng(21);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> xp(8), yp(8);
        for (auto& v : xp) v = rng.uniform(-0.5, 0.5);
        for (auto& v : yp) v = rng.uniform(-0.5, 0.5);
        const Path x = make_path({0.0, 0.3, 0.7, 1.0}, xp, 2);
        const Path y = make_path({0.0, 0.3, 0.7, 1.0}, yp, 2);
        const StaticKernelParams rbf{StaticKernelKind::RBF, 2.0};
        const double a = goursat_solve(x, y, rbf, PDEConfig{3});
        const double b = goursat_solve(y, x, rbf, PDEConfig{3});
        REQUIRE(a == Catch::Approx(b).margin(1e-10));
    }
}

TEST_CASE("goursat input validation") {
    const Path x = make_path({0.0, 1.0}, {0.0, 1.0}, 1);
    const Path y2 = make_path({0.0, 1.0}, {0.0, 0.0, 1.0, 1.0}, 2);
    const StaticKernelParams rbf{StaticKernelKind::RBF, 1.0};
    REQUIRE_THROWS_AS(goursat_solve(x, y2, rbf, PDEConfig{2}), std::invalid_argument);
    REQUIRE_THROWS_AS(goursat_solve(x, x, rbf, PDEConfig{13}), std::invalid_argument);
    REQUIRE_THROWS_AS(goursat_solve(x, x, rbf, PDEConfig{-1}), std::invalid_argument);

    const Path bad = make_path({0.0, 1.0}, {0.0, std::nan("")}, 1);
    REQUIRE_THROWS_AS(goursat_solve(bad, x, rbf, PDEConfig{2}), std::domain_error);
}

namespace {
std::vector<Trajectory> two_locus_batch(int m, std::uint64_t seed) {
    SimConfig cfg;
    cfg.pop_size = 500;
    cfg.K = 10;
    cfg.delta_t = 10;
    cfg.init_haps = {0.1, 0.2, 0.3, 0.4};
    FitnessModel fm;
    fm.s = {0.02, 0.07};
    fm.dominance = {0.5, 0.5};
    const RecombinationMap rm{{1e-6}};
    const Rng master(seed);
    std::vector<Trajectory> out;
    for (int i = 0; i < m; ++i) {
        Rng r = master.split(static_cast<std::uint64_t>(i));
        out.push_back(simulate_trajectory(cfg, fm, rm, r));
    }
    return out;
}
}  // namespace

TEST_CASE("sig_score m=2 formula") {
    auto batch = two_locus_batch(3, 77);
    const Trajectory obs = batch.back();
    batch.pop_back();
    const StaticKernelParams rbf{StaticKernelKind::RBF, 10.0};
    const PDEConfig cfg{1};

    const double shat = sig_score_unbiased(batch, obs, rbf, cfg, true);
    const Path p0 = preprocess(batch[0], true), p1 = preprocess(batch[1], true), po = preprocess(obs, true);
    const double expect =
        goursat_solve(p0, p1, rbf, cfg) - goursat_solve(p0, po, rbf, cfg) - goursat_solve(p1, po, rbf, cfg);
    REQUIRE(shat == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("sig_score longhand for m=3") {
    auto batch = two_locus_batch(4, 79);
    const Trajectory obs = batch.back();
    batch.pop_back();
    const StaticKernelParams rbf{StaticKernelKind::RBF, 10.0};
    const PDEConfig cfg{1};

    const double shat = sig_score_unbiased(batch, obs, rbf, cfg, true);
    std::vector<Path> paths;
    for (const auto& t : batch) paths.push_back(preprocess(t, true));
    const Path po = preprocess(obs, true);
    const double m = 3.0;
    double t1 = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int q = 0; q < 3; ++q)
            if (j != q)
                t1 += goursat_solve(paths[static_cast<std::size_t>(j)], paths[static_cast<std::size_t>(q)], rbf, cfg);
    double t2 = 0.0;
    for (const auto& p : paths) t2 += goursat_solve(p, po, rbf, cfg);
    const double expect = t1 / (m * (m - 1.0)) - 2.0 * t2 / m;
    REQUIRE(shat == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("sig_score of sims identical to obs is minus the self kernel") {
    const auto batch = two_locus_batch(1, 81);
    const Trajectory& obs = batch.front();
    const std::vector<Trajectory> sims = {obs, obs, obs};
    const StaticKernelParams rbf{StaticKernelKind::RBF, 10.0};
    const PDEConfig cfg{1};
    const Path po = preprocess(obs, true);
    const double kappa = goursat_solve(po, po, rbf, cfg);
    REQUIRE(sig_score_unbiased(sims, obs, rbf, cfg, true) == Catch::Approx(-kappa).margin(1e-12));
}

TEST_CASE("sig_score is invariant to the worker count") {
    auto batch = two_locus_batch(9, 83);
    const Trajectory obs = batch.back();
    batch.pop_back();
    const StaticKernelParams rbf{StaticKernelKind::RBF, 10.0};
    const PDEConfig cfg{1};
    const double s1 = sig_score_unbiased(batch, obs, rbf, cfg, true, 1);
    const double s4 = sig_score_unbiased(batch, obs, rbf, cfg, true, 4);
    REQUIRE(s1 == s4);  // bitwise
}

TEST_CASE("sig_score input validation") {
    auto batch = two_locus_batch(2, 85);
    const StaticKernelParams rbf{StaticKernelKind::RBF, 10.0};
    const PDEConfig cfg{1};
    const std::vector<Trajectory> one = {batch[0]};
    REQUIRE_THROWS_AS(sig_score_unbiased(one, batch[1], rbf, cfg, true), std::invalid_argument);

    Trajectory shifted = batch[1];
    for (auto& t : shifted.times) t += 1;
    REQUIRE_THROWS_AS(sig_score_unbiased(batch, shifted, rbf, cfg, true), std::invalid_argument);
}
