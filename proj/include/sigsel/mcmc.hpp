#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sigsel/rng.hpp"
#include "sigsel/transforms.hpp"

namespace sigsel {

struct MCMCConfig {
    double w = 1.0;   // learning rate tempering the score term
    int m = 8;        // simulations per score estimate
    double c = 1e-4;  // proposal covariance scale: z' = z + sqrt(c) * eps
    std::int64_t n_steps = 1000;
    std::int64_t burn_in = 200;
    std::uint64_t seed = 0;
    int n_replicates = 1;
};

// neg_score(theta, rng): summed score estimate across replicates; +inf rejects.
using ScoreFn = std::function<double(const std::vector<double>&, Rng&)>;

struct ChainState {
    std::vector<double> z;
    std::vector<double> theta;
    double score_hat = 0.0;
    double log_prior = 0.0;
    double log_jac = 0.0;
};

struct ChainResult {
    std::vector<std::vector<double>> samples;  // constrained scale, post burn-in
    double acceptance_rate = 0.0;
    std::int64_t n_accepted = 0;
    ChainState final_state;
};

inline ChainState make_chain_state(std::vector<double> z, const ParameterSpace& space, const ScoreFn& neg_score,
                                   Rng& score_rng) {
    ChainState st;
    st.z = std::move(z);
    auto [theta, lj] = constrain(st.z, space);
    st.theta = std::move(theta);
    st.log_jac = lj;
    st.log_prior = log_prior(st.theta, space);
    if (!(st.log_prior > -kInf)) throw std::invalid_argument("chain init out of prior support");
    st.score_hat = neg_score(st.theta, score_rng);
    return st;
}

// One pseudo-marginal MH step: the proposal's score is estimated afresh, the
// current state's cached estimate is never recomputed. Proposal covariance c*I
// on the unconstrained scale.
inline bool mh_step(ChainState& st, const ParameterSpace& space, const ScoreFn& neg_score, const MCMCConfig& cfg,
                    Rng& prop_rng, Rng& score_rng) {
    const double sd = std::sqrt(cfg.c);
    std::vector<double> zp(st.z.size());
    for (std::size_t i = 0; i < zp.size(); ++i) zp[i] = st.z[i] + sd * prop_rng.normal();
    auto [theta_p, lj_p] = constrain(zp, space);
    const double lp_p = log_prior(theta_p, space);
    double score_p = kInf;
    if (lp_p > -kInf) score_p = neg_score(theta_p, score_rng);

    const double cur = st.log_prior + st.log_jac - cfg.w * st.score_hat;
    const double prop = lp_p + lj_p - cfg.w * score_p;
    double log_alpha;
    if (prop == -kInf)
        log_alpha = -kInf;
    else if (cur == -kInf)
        log_alpha = kInf;
    else
        log_alpha = prop - cur;
    if (log_alpha >= 0.0 || std::log(prop_rng.uniform01()) < log_alpha) {
        st.z = std::move(zp);
        st.theta = std::move(theta_p);
        st.log_jac = lj_p;
        st.log_prior = lp_p;
        st.score_hat = score_p;
        return true;
    }
    return false;
}

// Random-walk pseudo-marginal MH over the unconstrained scale; returns kept
// samples on the constrained scale. Streams: step i derives its proposal and
// score RNGs from master.split(i+1), the initial score from master.split(0).
inline ChainResult run_chain(const std::vector<double>& init_theta, const ParameterSpace& space,
                             const ScoreFn& neg_score, const MCMCConfig& cfg) {
    if (cfg.burn_in >= cfg.n_steps) throw std::invalid_argument("burn_in must be < n_steps");
    const Rng master(cfg.seed);
    Rng init_rng = master.split(0);
    ChainState st = make_chain_state(unconstrain(init_theta, space), space, neg_score, init_rng);

    ChainResult res;
    res.samples.reserve(static_cast<std::size_t>(cfg.n_steps - cfg.burn_in));
    for (std::int64_t step = 0; step < cfg.n_steps; ++step) {
        Rng key = master.split(static_cast<std::uint64_t>(step) + 1);
        Rng prop_rng = key.split(0);
        Rng score_rng = key.split(1);
        if (mh_step(st, space, neg_score, cfg, prop_rng, score_rng)) ++res.n_accepted;
        if (step >= cfg.burn_in) res.samples.push_back(st.theta);
    }
    res.acceptance_rate = static_cast<double>(res.n_accepted) / static_cast<double>(cfg.n_steps);
    res.final_state = std::move(st);
    return res;
}

}  // namespace sigsel
