#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigsel/baselines.hpp"
#include "sigsel/benchmark.hpp"
#include "sigsel/mcmc.hpp"
#include "sigsel/sigkernel.hpp"
#include "sigsel/transforms.hpp"
#include "sigsel/wf.hpp"

namespace sigsel {

struct KernelConfig {
    StaticKernelKind kind = StaticKernelKind::RBF;
    double gamma = 10.0;
    int dyadic_order = 1;
    bool add_time = true;
};

// One benchmark grid cell: a (truth, recombination) pair sharing the
// experiment's simulation and inference settings.
struct ScenarioSpec {
    std::string label;
    std::vector<double> s;
    std::vector<double> rates;
};

struct IOConfig {
    std::vector<std::string> inputs;
    std::string out_dir = "out";
};

struct ExperimentConfig {
    std::string preset;  // empty, or one of the named presets
    FitnessModel model;
    RecombinationMap rmap;
    SimConfig sim;
    MCMCConfig mcmc;
    KernelConfig kernel;
    bool joint_init = false;
    double dirichlet_alpha = 0.25;
    std::vector<double> s_low;   // per-locus prior interval, broadcast if size 1
    std::vector<double> s_high;
    std::vector<double> chain_init;  // optional explicit start, constrained scale
    PointEstimator estimator = PointEstimator::Mean;
    Ploidy ploidy = Ploidy::Diploid;
    std::size_t n_reps = 10;  // benchmark repetitions / simulate replicate count
    std::vector<ScenarioSpec> scenarios;  // benchmark grid; empty = single scenario from model/rmap
    IOConfig io;

    int loci() const { return model.loci(); }

    ParameterSpace space() const {
        ParameterSpace sp;
        const int l = loci();
        bool uniform = s_low.size() <= 1 && s_high.size() <= 1;
        if (uniform) {
            sp.blocks.push_back(Block::interval(s_low.empty() ? -1.0 : s_low[0],
                                                s_high.empty() ? 1.0 : s_high[0], l, "s"));
        } else {
            for (int i = 0; i < l; ++i) {
                const double lo = s_low.empty() ? -1.0 : s_low[s_low.size() == 1 ? 0 : static_cast<std::size_t>(i)];
                const double hi = s_high.empty() ? 1.0 : s_high[s_high.size() == 1 ? 0 : static_cast<std::size_t>(i)];
                Block b = Block::interval(lo, hi, 1, "s");
                b.name_start = i + 1;
                sp.blocks.push_back(b);
            }
        }
        if (joint_init) sp.blocks.push_back(Block::simplex(1 << l, dirichlet_alpha, "h"));
        return sp;
    }

    StaticKernelParams kernel_params() const { return {kernel.kind, kernel.gamma}; }
    PDEConfig pde() const { return {kernel.dyadic_order}; }
};

namespace detail {

using nlohmann::json;

inline std::string mode_name(SelectionMode m) { return m == SelectionMode::NFDS ? "nfds" : "standard"; }
inline SelectionMode mode_from(const std::string& s) {
    if (s == "standard") return SelectionMode::Standard;
    if (s == "nfds") return SelectionMode::NFDS;
    throw std::runtime_error("unknown selection mode '" + s + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["model"] = {{"loci", c.loci()},
                  {"selection_mode", detail::mode_name(c.model.mode)},
                  {"s", c.model.s},
                  {"dominance", c.model.dominance},
                  {"recombination_rates", c.rmap.rates}};
    j["sim"] = {{"pop_size", c.sim.pop_size}, {"t0", c.sim.t0},          {"K", c.sim.K},
                {"delta_t", c.sim.delta_t},   {"init_haps", c.sim.init_haps}, {"seed", c.sim.seed}};
    j["inference"] = {{"w", c.mcmc.w},
                      {"m", c.mcmc.m},
                      {"c", c.mcmc.c},
                      {"n_steps", c.mcmc.n_steps},
                      {"burn_in", c.mcmc.burn_in},
                      {"seed", c.mcmc.seed},
                      {"n_replicates", c.mcmc.n_replicates},
                      {"estimator", c.estimator == PointEstimator::Mean ? "mean" : "mode"},
                      {"kernel",
                       {{"kind", c.kernel.kind == StaticKernelKind::RBF ? "rbf" : "linear"},
                        {"gamma", c.kernel.gamma},
                        {"dyadic_order", c.kernel.dyadic_order},
                        {"add_time", c.kernel.add_time}}}};
    nlohmann::json ps;
    ps["joint_init"] = c.joint_init;
    ps["dirichlet_alpha"] = c.dirichlet_alpha;
    ps["s_low"] = c.s_low;
    ps["s_high"] = c.s_high;
    ps["chain_init"] = c.chain_init;
    j["parameter_space"] = ps;
    j["baseline"] = {{"ploidy", c.ploidy == Ploidy::Diploid ? "diploid" : "haploid"}};
    nlohmann::json sc = nlohmann::json::array();
    for (const auto& s : c.scenarios) sc.push_back({{"label", s.label}, {"s", s.s}, {"recombination_rates", s.rates}});
    j["benchmark"] = {{"n_reps", c.n_reps}, {"scenarios", sc}};
    j["io"] = {{"inputs", c.io.inputs}, {"out_dir", c.io.out_dir}};
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j);

// Presets freeze the documented experiment constants; any JSON field given
// alongside a preset overrides the expanded value.
inline ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;
    c.preset = name;
    c.sim.pop_size = 5000;
    c.sim.t0 = 0;
    c.sim.K = 10;
    c.sim.delta_t = 10;
    c.mcmc = MCMCConfig{};
    c.kernel = KernelConfig{};
    if (name == "fig2-two-locus") {
        c.model.s = {0.02, 0.07};
        c.rmap.rates = {1e-6};
        c.sim.init_haps = {0.1, 0.2, 0.3, 0.4};
        c.mcmc.c = 1e-4;
        c.mcmc.n_steps = 1000;
        c.mcmc.burn_in = 200;
    } else if (name == "table1") {
        c.model.s = {0.02, 0.02};
        c.rmap.rates = {0.0};
        c.sim.init_haps = {0.1, 0.2, 0.3, 0.4};
        c.mcmc.c = 1e-4;
        c.mcmc.n_steps = 1000;
        c.mcmc.burn_in = 200;
        c.n_reps = 10;
        const std::vector<std::pair<double, double>> spairs = {{0.02, 0.02}, {0.02, 0.05}, {0.02, 0.07}, {0.02, 0.09}};
        const std::vector<double> rgrid = {0.0, 1e-6, 1e-2, 0.1, 0.5};
        for (double r : rgrid)
            for (auto [s1, s2] : spairs) {
                ScenarioSpec sp;
                sp.label = "r=" + detail::json(r).dump() + " s=(" + detail::json(s1).dump() + "," +
                           detail::json(s2).dump() + ")";
                sp.s = {s1, s2};
                sp.rates = {r};
                c.scenarios.push_back(std::move(sp));
            }
    } else if (name == "three-locus") {
        c.model.s = {0.02, 0.03, 0.05};
        c.rmap.rates = {1e-3, 1e-2};
        c.sim.init_haps = {0.0278, 0.0556, 0.0833, 0.1111, 0.1389, 0.1667, 0.1944, 0.2222};
        c.mcmc.c = 1e-4;
        c.mcmc.n_steps = 1000;
        c.mcmc.burn_in = 300;
        c.n_reps = 10;
        const std::vector<std::vector<double>> strue = {{0.01, 0.05, 0.07}, {0.02, 0.03, 0.05}};
        const std::vector<std::vector<double>> rpairs = {
            {0.0, 1e-5}, {1e-4, 1e-3}, {1e-3, 1e-2}, {1e-2, 1e-1}, {1e-1, 5e-1}};
        for (std::size_t si = 0; si < strue.size(); ++si)
            for (const auto& rp : rpairs) {
                ScenarioSpec sp;
                sp.label = "scenario" + std::to_string(si + 1) + " r=(" + detail::json(rp[0]).dump() + "," +
                           detail::json(rp[1]).dump() + ")";
                sp.s = strue[si];
                sp.rates = rp;
                c.scenarios.push_back(std::move(sp));
            }
    } else if (name == "nfds-one-locus") {
        c.model.s = {0.07};
        c.model.mode = SelectionMode::NFDS;
        c.rmap.rates = {};
        c.sim.init_haps = {0.7, 0.3};
        c.mcmc.c = 1e-2;
        c.mcmc.n_steps = 2000;
        c.mcmc.burn_in = 500;
        c.kernel.gamma = 100.0;
    } else if (name == "nfds-two-locus") {
        c.model.s = {0.02, 0.07};
        c.model.mode = SelectionMode::NFDS;
        c.rmap.rates = {1e-2};
        c.sim.init_haps = {0.1, 0.2, 0.3, 0.4};
        c.mcmc.c = 1e-3;
        c.mcmc.n_steps = 2000;
        c.mcmc.burn_in = 500;
        c.kernel.gamma = 100.0;
    } else if (name == "yeast-K" || name == "yeast-S") {
        // Sexual-reproduction cycles mapped to 17.5 generations each; data has
        // three time points. N_e and the generation count are illustrative
        // values (see README), carried verbatim from the study setup.
        c.model.s = {0.0, 0.0, 0.0};
        c.rmap.rates = {1e-2, 1e-2};
        c.sim.pop_size = 2000;
        c.sim.K = 2;
        c.sim.delta_t = 105;
        c.sim.init_haps = std::vector<double>(8, 0.125);
        c.mcmc.w = 5.0;
        c.mcmc.c = 1e-4;
        c.mcmc.n_steps = 1000;
        c.mcmc.burn_in = 300;
        c.chain_init = name == "yeast-K" ? std::vector<double>{-0.05, 0.024, -0.027}
                                         : std::vector<double>{-0.0115, 0.0, -0.0011};
    } else if (name == "drosophila-joint") {
        c.model.s = {0.0, 0.0, 0.0};
        c.rmap.rates = {1.4e-3, 2.6e-4};
        c.sim.pop_size = 300;
        c.sim.K = 6;
        c.sim.delta_t = 10;
        c.sim.init_haps = std::vector<double>(8, 0.125);
        c.mcmc.c = 5e-3;
        c.mcmc.n_steps = 100000;
        c.mcmc.burn_in = 10000;
        c.mcmc.n_replicates = 10;
        c.joint_init = true;
        c.dirichlet_alpha = 0.25;
    } else {
        throw std::runtime_error("unknown preset '" + name + "'");
    }
    if (c.model.dominance.empty()) c.model.dominance = std::vector<double>(c.model.s.size(), 0.5);
    return c;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("preset") && !j.at("preset").get<std::string>().empty())
        c = preset_config(j.at("preset").get<std::string>());
    if (j.contains("model")) {
        const auto& m = j.at("model");
        if (m.contains("s")) c.model.s = m.at("s").get<std::vector<double>>();
        if (m.contains("selection_mode")) c.model.mode = detail::mode_from(m.at("selection_mode").get<std::string>());
        if (m.contains("dominance")) c.model.dominance = m.at("dominance").get<std::vector<double>>();
        if (m.contains("recombination_rates")) c.rmap.rates = m.at("recombination_rates").get<std::vector<double>>();
        if (m.contains("loci")) {
            const int l = m.at("loci").get<int>();
            if (c.model.s.empty()) c.model.s = std::vector<double>(static_cast<std::size_t>(l), 0.0);
            if (l != c.loci()) throw std::runtime_error("model.loci inconsistent with model.s length");
        }
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        if (s.contains("pop_size")) c.sim.pop_size = s.at("pop_size").get<std::int64_t>();
        if (s.contains("t0")) c.sim.t0 = s.at("t0").get<std::int64_t>();
        if (s.contains("K")) c.sim.K = s.at("K").get<std::int64_t>();
        if (s.contains("delta_t")) c.sim.delta_t = s.at("delta_t").get<std::int64_t>();
        if (s.contains("init_haps")) c.sim.init_haps = s.at("init_haps").get<std::vector<double>>();
        if (s.contains("seed")) c.sim.seed = s.at("seed").get<std::uint64_t>();
    }
    if (j.contains("inference")) {
        const auto& i = j.at("inference");
        if (i.contains("w")) c.mcmc.w = i.at("w").get<double>();
        if (i.contains("m")) c.mcmc.m = i.at("m").get<int>();
        if (i.contains("c")) c.mcmc.c = i.at("c").get<double>();
        if (i.contains("n_steps")) c.mcmc.n_steps = i.at("n_steps").get<std::int64_t>();
        if (i.contains("burn_in")) c.mcmc.burn_in = i.at("burn_in").get<std::int64_t>();
        if (i.contains("seed")) c.mcmc.seed = i.at("seed").get<std::uint64_t>();
        if (i.contains("n_replicates")) c.mcmc.n_replicates = i.at("n_replicates").get<int>();
        if (i.contains("estimator"))
            c.estimator = i.at("estimator").get<std::string>() == "mode" ? PointEstimator::Mode : PointEstimator::Mean;
        if (i.contains("kernel")) {
            const auto& k = i.at("kernel");
            if (k.contains("kind"))
                c.kernel.kind =
                    k.at("kind").get<std::string>() == "linear" ? StaticKernelKind::Linear : StaticKernelKind::RBF;
            if (k.contains("gamma")) c.kernel.gamma = k.at("gamma").get<double>();
            if (k.contains("dyadic_order")) c.kernel.dyadic_order = k.at("dyadic_order").get<int>();
            if (k.contains("add_time")) c.kernel.add_time = k.at("add_time").get<bool>();
        }
    }
    if (j.contains("parameter_space")) {
        const auto& p = j.at("parameter_space");
        if (p.contains("joint_init")) c.joint_init = p.at("joint_init").get<bool>();
        if (p.contains("dirichlet_alpha")) c.dirichlet_alpha = p.at("dirichlet_alpha").get<double>();
        if (p.contains("s_low")) c.s_low = p.at("s_low").get<std::vector<double>>();
        if (p.contains("s_high")) c.s_high = p.at("s_high").get<std::vector<double>>();
        if (p.contains("chain_init")) c.chain_init = p.at("chain_init").get<std::vector<double>>();
    }
    if (j.contains("baseline") && j.at("baseline").contains("ploidy"))
        c.ploidy = j.at("baseline").at("ploidy").get<std::string>() == "haploid" ? Ploidy::Haploid : Ploidy::Diploid;
    if (j.contains("benchmark")) {
        const auto& b = j.at("benchmark");
        if (b.contains("n_reps")) c.n_reps = b.at("n_reps").get<std::size_t>();
        if (b.contains("scenarios")) {
            c.scenarios.clear();
            for (const auto& s : b.at("scenarios")) {
                ScenarioSpec sp;
                sp.label = s.value("label", "");
                sp.s = s.at("s").get<std::vector<double>>();
                sp.rates = s.at("recombination_rates").get<std::vector<double>>();
                c.scenarios.push_back(std::move(sp));
            }
        }
    }
    if (j.contains("io")) {
        const auto& io = j.at("io");
        if (io.contains("inputs")) c.io.inputs = io.at("inputs").get<std::vector<std::string>>();
        if (io.contains("out_dir")) c.io.out_dir = io.at("out_dir").get<std::string>();
    }
    if (c.model.s.empty()) throw std::runtime_error("config does not define any loci (model.s)");
    if (c.model.dominance.empty()) c.model.dominance = std::vector<double>(c.model.s.size(), 0.5);
    if (c.sim.init_haps.empty())
        c.sim.init_haps = std::vector<double>(std::size_t{1} << c.loci(), 1.0 / static_cast<double>(std::size_t{1} << c.loci()));
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path.string());
    nlohmann::json j;
    is >> j;
    return config_from_json(j);
}

inline void save_config(const std::filesystem::path& path, const ExperimentConfig& c) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << to_json(c).dump(2) << "\n";
}

}  // namespace sigsel
