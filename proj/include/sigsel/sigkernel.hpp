#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sigsel/parallel.hpp"
#include "sigsel/wf.hpp"

namespace sigsel {

// Piecewise-linear path: times rescaled to [0,1], points row-major M x d.
struct Path {
    std::vector<double> times;
    std::vector<double> points;
    std::size_t M = 0;
    std::size_t d = 0;

    double at(std::size_t i, std::size_t j) const { return points[i * d + j]; }
};

enum class StaticKernelKind { RBF, Linear };

struct StaticKernelParams {
    StaticKernelKind kind = StaticKernelKind::RBF;
    double gamma = 10.0;  // RBF bandwidth multiplier, ignored for Linear
};

struct PDEConfig {
    int dyadic_order = 2;  // each segment refined into 2^dyadic_order sub-cells
};

inline Path preprocess(const Trajectory& traj, bool add_time) {
    const std::size_t M = traj.rows();
    if (M < 2) throw std::invalid_argument("preprocess: need at least 2 time points");
    const std::size_t l = traj.loci();
    Path p;
    p.M = M;
    p.d = l + (add_time ? 1 : 0);
    p.times.resize(M);
    p.points.resize(M * p.d);
    const double t0 = static_cast<double>(traj.times.front());
    const double t1 = static_cast<double>(traj.times.back());
    if (!(t1 > t0)) throw std::invalid_argument("preprocess: degenerate time span");
    for (std::size_t i = 0; i < M; ++i) {
        const double t = (static_cast<double>(traj.times[i]) - t0) / (t1 - t0);
        p.times[i] = t;
        std::size_t col = 0;
        if (add_time) p.points[i * p.d + col++] = t;
        for (std::size_t j = 0; j < l; ++j) p.points[i * p.d + col++] = traj.freqs[i][j];
    }
    return p;
}

inline double static_kernel(const double* u, const double* v, std::size_t d, const StaticKernelParams& p) {
    if (p.kind == StaticKernelKind::Linear) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) acc += u[i] * v[i];
        return acc;
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = u[i] - v[i];
        d2 += diff * diff;
    }
    return std::exp(-p.gamma * d2);
}

inline double static_kernel(const std::vector<double>& u, const std::vector<double>& v,
                            const StaticKernelParams& p) {
    if (u.size() != v.size()) throw std::invalid_argument("static_kernel: dimension mismatch");
    return static_kernel(u.data(), v.data(), u.size(), p);
}

namespace detail {

// Refined point list: every segment split into 2^order linear sub-segments.
inline void refine_points(const Path& p, int order, std::vector<double>& out, std::size_t& rows) {
    const std::size_t f = std::size_t{1} << order;
    rows = (p.M - 1) * f + 1;
    out.resize(rows * p.d);
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t seg = r / f;
        if (seg >= p.M - 1) seg = p.M - 2;
        const double lam = static_cast<double>(r - seg * f) / static_cast<double>(f);
        const double* a = &p.points[seg * p.d];
        const double* b = &p.points[(seg + 1) * p.d];
        for (std::size_t j = 0; j < p.d; ++j) out[r * p.d + j] = a[j] * (1.0 - lam) + b[j] * lam;
    }
}

// Goursat solve on pre-refined point grids. Explicit second-order scheme
// marching anti-diagonals: u[i+1,j+1] = (u[i+1,j]+u[i,j+1])(1 + A/2 + A^2/12)
//                                        - u[i,j](1 - A^2/12),
// A = double increment of the static kernel over grid cell (i,j).
inline double goursat_corner(const std::vector<double>& X, std::size_t P1, const std::vector<double>& Y,
                             std::size_t Q1, std::size_t d, const StaticKernelParams& kp) {
    const std::size_t P = P1 - 1, Q = Q1 - 1;
    std::vector<double> G(P1 * Q1);
    for (std::size_t i = 0; i < P1; ++i)
        for (std::size_t j = 0; j < Q1; ++j) {
            const double g = static_kernel(&X[i * d], &Y[j * d], d, kp);
            if (!std::isfinite(g)) throw std::domain_error("goursat_solve: non-finite static kernel value");
            G[i * Q1 + j] = g;
        }
    std::vector<double> u(P1 * Q1, 1.0);
    for (std::size_t k = 0; k < P + Q - 1; ++k) {
        const std::size_t i0 = k >= Q ? k - Q + 1 : 0;
        const std::size_t i1 = std::min(P - 1, k);
        for (std::size_t i = i0; i <= i1; ++i) {
            const std::size_t j = k - i;
            const double A = G[(i + 1) * Q1 + (j + 1)] - G[(i + 1) * Q1 + j] - G[i * Q1 + (j + 1)] + G[i * Q1 + j];
            const double a12 = A * A / 12.0;
            u[(i + 1) * Q1 + (j + 1)] =
                (u[(i + 1) * Q1 + j] + u[i * Q1 + (j + 1)]) * (1.0 + 0.5 * A + a12) - u[i * Q1 + j] * (1.0 - a12);
        }
    }
    return u[P * Q1 + Q];
}

}  // namespace detail

// Signature kernel <Sig(x), Sig(y)> under the lifted static kernel, via the
// Goursat PDE u_st = A(s,t) u with u = 1 on the axes.
inline double goursat_solve(const Path& x, const Path& y, const StaticKernelParams& kp, const PDEConfig& cfg) {
    if (x.d != y.d) throw std::invalid_argument("goursat_solve: channel mismatch");
    if (cfg.dyadic_order < 0 || cfg.dyadic_order > 12) throw std::invalid_argument("dyadic_order out of range");
    std::vector<double> X, Y;
    std::size_t P1 = 0, Q1 = 0;
    detail::refine_points(x, cfg.dyadic_order, X, P1);
    detail::refine_points(y, cfg.dyadic_order, Y, Q1);
    return detail::goursat_corner(X, P1, Y, Q1, x.d, kp);
}

// Unbiased kernel score estimate:
//   S_hat = 1/(m(m-1)) sum_{j != q} k(x^j, x^q) - (2/m) sum_j k(x^j, obs).
// Kernel symmetry halves the first sum; pair values are accumulated in fixed
// index order so the result is independent of the worker count.
inline double sig_score_unbiased(const std::vector<Trajectory>& sims, const Trajectory& obs,
                                 const StaticKernelParams& kp, const PDEConfig& cfg, bool add_time,
                                 int threads = 1) {
    const std::size_t m = sims.size();
    if (m < 2) throw std::invalid_argument("sig_score_unbiased: need m >= 2 simulations");
    for (const auto& s : sims)
        if (s.times != obs.times) throw std::invalid_argument("sig_score_unbiased: time-grid mismatch");

    std::vector<std::vector<double>> refined(m + 1);
    std::vector<std::size_t> rows(m + 1);
    std::size_t d = 0;
    for (std::size_t i = 0; i <= m; ++i) {
        const Path p = preprocess(i < m ? sims[i] : obs, add_time);
        d = p.d;
        detail::refine_points(p, cfg.dyadic_order, refined[i], rows[i]);
    }

    struct PairJob {
        std::size_t a, b;
    };
    std::vector<PairJob> jobs;
    jobs.reserve(m * (m - 1) / 2 + m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t q = j + 1; q < m; ++q) jobs.push_back({j, q});
    for (std::size_t j = 0; j < m; ++j) jobs.push_back({j, m});  // vs obs

    std::vector<double> vals(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t idx) {
        const auto [a, b] = jobs[idx];
        vals[idx] = detail::goursat_corner(refined[a], rows[a], refined[b], rows[b], d, kp);
    });

    const std::size_t cross_pairs = m * (m - 1) / 2;
    double term1 = 0.0;
    for (std::size_t idx = 0; idx < cross_pairs; ++idx) term1 += vals[idx];
    double term2 = 0.0;
    for (std::size_t idx = cross_pairs; idx < jobs.size(); ++idx) term2 += vals[idx];
    const double md = static_cast<double>(m);
    return 2.0 * term1 / (md * (md - 1.0)) - 2.0 * term2 / md;
}

}  // namespace sigsel
