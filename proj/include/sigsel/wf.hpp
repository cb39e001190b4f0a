#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsel/rng.hpp"

namespace sigsel {

// Haplotype index convention: lexicographic allele order, locus 1 most
// significant bit, allele 1 = focal/selected allele. For two loci the order is
// 00, 01, 10, 11.
using HaplotypeFrequencies = std::vector<double>;

enum class SelectionMode { Standard, NFDS };

struct FitnessModel {
    std::vector<double> s;          // per-locus selection coefficients
    std::vector<double> dominance;  // per-locus dominance, default 0.5
    SelectionMode mode = SelectionMode::Standard;

    int loci() const { return static_cast<int>(s.size()); }
    double dom(int l) const { return dominance.empty() ? 0.5 : dominance.at(static_cast<std::size_t>(l)); }
};

struct RecombinationMap {
    std::vector<double> rates;  // length l-1, per-generation crossover prob between adjacent loci
};

struct SimConfig {
    std::int64_t pop_size = 0;  // diploid N; 2N gametes sampled
    std::int64_t t0 = 0;
    std::int64_t K = 0;        // sampling intervals
    std::int64_t delta_t = 1;  // generations per interval
    HaplotypeFrequencies init_haps;
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<std::int64_t> times;         // K+1 generations
    std::vector<std::vector<double>> freqs;  // (K+1) x loci focal-allele frequencies

    std::size_t rows() const { return times.size(); }
    std::size_t loci() const { return freqs.empty() ? 0 : freqs.front().size(); }
};

inline int num_loci_for(std::size_t hap_count) {
    int l = 0;
    while ((std::size_t{1} << l) < hap_count) ++l;
    if ((std::size_t{1} << l) != hap_count) throw std::invalid_argument("haplotype count must be a power of two");
    return l;
}

inline int hap_allele(int hap, int locus, int loci) { return (hap >> (loci - 1 - locus)) & 1; }

inline std::vector<double> haplotype_to_allele(const HaplotypeFrequencies& h) {
    const int L = num_loci_for(h.size());
    std::vector<double> a(static_cast<std::size_t>(L), 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (int l = 0; l < L; ++l)
            if (hap_allele(static_cast<int>(i), l, L)) a[static_cast<std::size_t>(l)] += h[i];
    return a;
}

// w_ij: product over loci of genotype fitness 1 / 1+h*s_eff / 1+s_eff for
// 0/1/2 focal copies; NFDS scales s by the current focal-allele frequency.
inline double diploid_fitness(const FitnessModel& model, int hap_i, int hap_j,
                              const std::vector<double>* allele_freqs = nullptr) {
    const int L = model.loci();
    const int n = 1 << L;
    if (hap_i < 0 || hap_i >= n || hap_j < 0 || hap_j >= n) throw std::out_of_range("haplotype index");
    if (model.mode == SelectionMode::NFDS && allele_freqs == nullptr)
        throw std::invalid_argument("NFDS mode requires current allele frequencies");
    double w = 1.0;
    for (int l = 0; l < L; ++l) {
        const int copies = hap_allele(hap_i, l, L) + hap_allele(hap_j, l, L);
        if (copies == 0) continue;
        double se = model.s[static_cast<std::size_t>(l)];
        if (model.mode == SelectionMode::NFDS) se *= (*allele_freqs)[static_cast<std::size_t>(l)];
        w *= copies == 1 ? 1.0 + model.dom(l) * se : 1.0 + se;
    }
    return w;
}

namespace detail {

// Crossover masks: bit k of a mask means a crossover in interval k (between
// locus k and k+1); offspring takes locus 0 from the first parent and switches
// parent at each crossover (no interference).
inline int crossover_offspring(int pa, int pb, int mask, int loci) {
    int child = 0;
    int cur_is_a = 1;
    for (int l = 0; l < loci; ++l) {
        if (l > 0 && ((mask >> (l - 1)) & 1)) cur_is_a ^= 1;
        const int allele = cur_is_a ? hap_allele(pa, l, loci) : hap_allele(pb, l, loci);
        child = (child << 1) | allele;
    }
    return child;
}

inline double mask_probability(int mask, const std::vector<double>& rates) {
    double p = 1.0;
    for (std::size_t k = 0; k < rates.size(); ++k)
        p *= ((mask >> k) & 1) ? rates[k] : 1.0 - rates[k];
    return p;
}

// pair_table[((c*n + d)*n + i)*n + j] = P(ordered offspring pair (c,d) | ordered parents (i,j)),
// i.e. the crossover-mask mixture sending parent pair (i,j) to gamete pair (c,d).
struct PairTable {
    int n = 0;
    std::vector<double> t;

    PairTable() = default;
    PairTable(int loci, const RecombinationMap& rmap) {
        n = 1 << loci;
        const int masks = loci >= 1 ? (1 << (loci - 1)) : 1;
        if (static_cast<int>(rmap.rates.size()) != loci - 1)
            throw std::invalid_argument("recombination map size must be loci-1");
        t.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < masks; ++m) {
                    const double pm = mask_probability(m, rmap.rates);
                    if (pm == 0.0) continue;
                    const int c = crossover_offspring(i, j, m, loci);
                    const int d = crossover_offspring(j, i, m, loci);
                    at(c, d, i, j) += pm;
                }
    }

    double& at(int c, int d, int i, int j) {
        return t[static_cast<std::size_t>(((c * n + d) * n + i)) * n + j];
    }
    double at(int c, int d, int i, int j) const {
        return t[static_cast<std::size_t>(((c * n + d) * n + i)) * n + j];
    }

    // distribution of ordered gamete pairs after random mating + recombination
    void pair_post(const HaplotypeFrequencies& h, std::vector<double>& out) const {
        out.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            if (h[static_cast<std::size_t>(i)] == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                const double hij = h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)];
                if (hij == 0.0) continue;
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        const double p = at(c, d, i, j);
                        if (p != 0.0) out[static_cast<std::size_t>(c) * n + d] += hij * p;
                    }
            }
        }
    }
};

inline void fitness_matrix(const FitnessModel& model, const std::vector<double>* allele_freqs,
                           std::vector<double>& w) {
    const int n = 1 << model.loci();
    w.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double wij = diploid_fitness(model, i, j, allele_freqs);
            if (!(wij > 0.0)) throw std::domain_error("non-positive genotype fitness at haplotype pair");
            w[static_cast<std::size_t>(i) * n + j] = wij;
        }
}

}  // namespace detail

// Post-recombination gamete pool; marginal of the ordered pair distribution.
inline HaplotypeFrequencies recombine(const HaplotypeFrequencies& h, const RecombinationMap& rmap) {
    const int L = num_loci_for(h.size());
    const detail::PairTable table(L, rmap);
    std::vector<double> pp;
    table.pair_post(h, pp);
    HaplotypeFrequencies out(h.size(), 0.0);
    const int n = table.n;
    for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int d = 0; d < n; ++d) acc += pp[static_cast<std::size_t>(c) * n + d];
        out[static_cast<std::size_t>(c)] = acc;
    }
    return out;
}

namespace detail {

inline void deterministic_update_impl(const HaplotypeFrequencies& h, const FitnessModel& model,
                                      const PairTable& table, std::vector<double>& scratch_pp,
                                      std::vector<double>& scratch_w, HaplotypeFrequencies& out) {
    const int n = table.n;
    const std::vector<double>* freqs = nullptr;
    std::vector<double> a;
    if (model.mode == SelectionMode::NFDS) {
        a = haplotype_to_allele(h);
        freqs = &a;
    }
    fitness_matrix(model, freqs, scratch_w);
    table.pair_post(h, scratch_pp);
    out.assign(static_cast<std::size_t>(n), 0.0);
    double wbar = 0.0;
    for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int d = 0; d < n; ++d)
            acc += scratch_w[static_cast<std::size_t>(c) * n + d] * scratch_pp[static_cast<std::size_t>(c) * n + d];
        out[static_cast<std::size_t>(c)] = acc;
        wbar += acc;
    }
    if (!(wbar > 0.0)) throw std::domain_error("non-positive mean fitness");
    for (double& v : out) v /= wbar;
}

}  // namespace detail

// Expected next-generation haplotype frequencies: recombination-adjusted pair
// frequencies reweighted by diploid fitness and normalized by mean fitness.
inline HaplotypeFrequencies deterministic_update(const HaplotypeFrequencies& h, const FitnessModel& model,
                                                 const RecombinationMap& rmap) {
    const int L = num_loci_for(h.size());
    const detail::PairTable table(L, rmap);
    std::vector<double> pp, w;
    HaplotypeFrequencies out;
    detail::deterministic_update_impl(h, model, table, pp, w, out);
    return out;
}

inline HaplotypeFrequencies wf_generation(const HaplotypeFrequencies& h, const FitnessModel& model,
                                          const RecombinationMap& rmap, std::int64_t pop_size, Rng& rng) {
    if (pop_size < 1) throw std::invalid_argument("pop_size must be >= 1");
    HaplotypeFrequencies expected = deterministic_update(h, model, rmap);
    const std::uint64_t gametes = 2ull * static_cast<std::uint64_t>(pop_size);
    std::vector<std::uint64_t> counts(expected.size());
    rng.multinomial(gametes, expected, counts);
    HaplotypeFrequencies out(expected.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(gametes);
    return out;
}

// Forward WF simulation; records allele frequencies every delta_t generations.
// Row 0 is the deterministic marginal of the founding haplotype frequencies.
inline Trajectory simulate_trajectory(const SimConfig& cfg, const FitnessModel& model,
                                      const RecombinationMap& rmap, Rng& rng) {
    const int L = num_loci_for(cfg.init_haps.size());
    if (L != model.loci()) throw std::invalid_argument("init_haps inconsistent with model loci");
    if (cfg.K < 1 || cfg.delta_t < 1) throw std::invalid_argument("need K*delta_t >= 1");
    const detail::PairTable table(L, rmap);
    std::vector<double> pp, w;
    HaplotypeFrequencies h = cfg.init_haps;
    HaplotypeFrequencies expected;
    std::vector<std::uint64_t> counts(h.size());
    const std::uint64_t gametes = 2ull * static_cast<std::uint64_t>(cfg.pop_size);

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(cfg.K) + 1);
    traj.freqs.reserve(static_cast<std::size_t>(cfg.K) + 1);
    traj.times.push_back(cfg.t0);
    traj.freqs.push_back(haplotype_to_allele(h));
    for (std::int64_t k = 0; k < cfg.K; ++k) {
        for (std::int64_t g = 0; g < cfg.delta_t; ++g) {
            detail::deterministic_update_impl(h, model, table, pp, w, expected);
            rng.multinomial(gametes, expected, counts);
            for (std::size_t i = 0; i < h.size(); ++i)
                h[i] = static_cast<double>(counts[i]) / static_cast<double>(gametes);
        }
        traj.times.push_back(cfg.t0 + (k + 1) * cfg.delta_t);
        traj.freqs.push_back(haplotype_to_allele(h));
    }
    return traj;
}

}  // namespace sigsel
