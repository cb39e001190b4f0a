#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sigsel/mcmc.hpp"
#include "sigsel/parallel.hpp"
#include "sigsel/sigkernel.hpp"
#include "sigsel/wf.hpp"

namespace sigsel {

// Bundles the forward simulator and the signature-kernel score into the
// neg_score target used by the chain. theta layout: s_1..s_l, then (when
// joint_init) the simplex coordinates h_1..h_{2^l} and the auxiliary r, which
// the simulator ignores.
struct ScoreTarget {
    FitnessModel model;  // s entries overwritten per call
    RecombinationMap rmap;
    SimConfig sim;  // init_haps overwritten when joint_init
    StaticKernelParams kernel;
    PDEConfig pde;
    bool add_time = true;
    bool joint_init = false;
    int m = 8;
    int threads = 1;
    std::vector<Trajectory> obs;

    void decode(const std::vector<double>& theta, FitnessModel& fm, HaplotypeFrequencies& init) const {
        const int l = model.loci();
        fm = model;
        for (int i = 0; i < l; ++i) fm.s[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)];
        init = sim.init_haps;
        if (joint_init) {
            const std::size_t n = std::size_t{1} << l;
            if (theta.size() < static_cast<std::size_t>(l) + n + 1)
                throw std::invalid_argument("theta too short for joint initial-frequency inference");
            init.assign(theta.begin() + l, theta.begin() + l + static_cast<std::ptrdiff_t>(n));
        }
    }

    // Sum of unbiased kernel-score estimates across observed replicates, with
    // fresh m simulations per replicate; +inf when the parameter point is
    // rejected by the simulator (non-positive fitness).
    double operator()(const std::vector<double>& theta, Rng& rng) const {
        FitnessModel fm;
        HaplotypeFrequencies init;
        decode(theta, fm, init);
        SimConfig scfg = sim;
        scfg.init_haps = init;
        try {
            double total = 0.0;
            for (std::size_t rep = 0; rep < obs.size(); ++rep) {
                std::vector<Trajectory> sims(static_cast<std::size_t>(m));
                const Rng rep_key = rng.split(rep);
                parallel_for(sims.size(), threads, [&](std::size_t i) {
                    Rng sim_rng = rep_key.split(i);
                    sims[i] = simulate_trajectory(scfg, fm, rmap, sim_rng);
                });
                total += sig_score_unbiased(sims, obs[rep], kernel, pde, add_time, threads);
            }
            return total;
        } catch (const std::domain_error&) {
            return kInf;
        }
    }

    ScoreFn as_score_fn() const {
        return [copy = *this](const std::vector<double>& theta, Rng& rng) { return copy(theta, rng); };
    }
};

}  // namespace sigsel
