#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "sigsel/rng.hpp"
#include "sigsel/wf.hpp"

namespace sigsel {

enum class Ploidy { Haploid, Diploid };

struct LLSEstimate {
    std::vector<double> s_hat;
    Ploidy ploidy = Ploidy::Diploid;
    std::vector<bool> degenerate;  // locus fixed at a boundary for every sample
};

// Least-squares slope of logit allele frequency on generation number; the
// slope equals s (haploid) or s/2 (diploid). Frequencies are clamped to
// [eps, 1-eps] with eps = 1/(2N) when the population size is known.
inline LLSEstimate lls_estimate(const Trajectory& traj, Ploidy ploidy, std::int64_t pop_size = 0) {
    const std::size_t n = traj.rows();
    if (n < 2) throw std::invalid_argument("lls_estimate: need at least 2 time points");
    const std::size_t l = traj.loci();
    const double eps = pop_size > 0 ? 1.0 / (2.0 * static_cast<double>(pop_size)) : 1e-6;

    LLSEstimate est;
    est.ploidy = ploidy;
    est.s_hat.assign(l, 0.0);
    est.degenerate.assign(l, false);

    double t_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) t_mean += static_cast<double>(traj.times[i]);
    t_mean /= static_cast<double>(n);
    double s_tt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(traj.times[i]) - t_mean;
        s_tt += dt * dt;
    }
    if (!(s_tt > 0.0)) throw std::invalid_argument("lls_estimate: degenerate time grid");

    for (std::size_t j = 0; j < l; ++j) {
        bool all_zero = true, all_one = true;
        for (std::size_t i = 0; i < n; ++i) {
            all_zero = all_zero && traj.freqs[i][j] <= 0.0;
            all_one = all_one && traj.freqs[i][j] >= 1.0;
        }
        if (all_zero || all_one) {
            est.degenerate[j] = true;
            continue;
        }
        double s_ty = 0.0, y_mean = 0.0;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::clamp(traj.freqs[i][j], eps, 1.0 - eps);
            y[i] = std::log(a / (1.0 - a));
            y_mean += y[i];
        }
        y_mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            s_ty += (static_cast<double>(traj.times[i]) - t_mean) * (y[i] - y_mean);
        const double slope = s_ty / s_tt;
        est.s_hat[j] = ploidy == Ploidy::Diploid ? 2.0 * slope : slope;
    }
    return est;
}

inline double rmse(std::span<const double> est, std::span<const double> truth) {
    if (est.size() != truth.size()) throw std::invalid_argument("rmse: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double e = est[i] - truth[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(est.size()));
}

inline std::vector<double> posterior_mean(const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) throw std::invalid_argument("posterior_mean: empty sample set");
    const std::size_t d = samples.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& row : samples)
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    for (double& v : mean) v /= static_cast<double>(samples.size());
    return mean;
}

// Product-Gaussian KDE with Scott bandwidths h_j = sd_j * n^(-1/(d+4));
// the mode is the sample point maximizing the joint KDE. Zero-variance
// coordinates contribute their constant and are excluded from the product.
inline std::vector<double> posterior_mode_kde(const std::vector<std::vector<double>>& samples) {
    if (samples.size() > 4000) {  // stride-thin long chains before the O(n^2) scan
        const std::size_t stride = (samples.size() + 3999) / 4000;
        std::vector<std::vector<double>> thin;
        for (std::size_t i = 0; i < samples.size(); i += stride) thin.push_back(samples[i]);
        return posterior_mode_kde(thin);
    }
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("posterior_mode_kde: need at least 2 samples");
    const std::size_t d = samples.front().size();
    std::vector<double> mean = posterior_mean(samples);
    std::vector<double> sd(d, 0.0);
    for (const auto& row : samples)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - mean[j];
            sd[j] += c * c;
        }
    std::vector<std::size_t> active;
    std::vector<double> inv_h;
    const double scott = std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
    for (std::size_t j = 0; j < d; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n - 1));
        if (sd[j] > 0.0) {
            active.push_back(j);
            inv_h.push_back(1.0 / (sd[j] * scott));
        }
    }
    if (active.empty()) return samples.front();

    std::size_t best = 0;
    double best_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double dens = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            double e = 0.0;
            for (std::size_t a = 0; a < active.size(); ++a) {
                const double u = (samples[i][active[a]] - samples[q][active[a]]) * inv_h[a];
                e += u * u;
            }
            dens += std::exp(-0.5 * e);
        }
        const double ld = std::log(dens);
        if (ld > best_log) {
            best_log = ld;
            best = i;
        }
    }
    return samples[best];
}

}  // namespace sigsel
