// Command-line front end: simulate trajectories, run score-posterior
// inference, LLS baseline estimates, and benchmark grids from a JSON config
// or a named preset.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigsel/sigsel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int threads = 1;
    std::vector<std::string> inputs;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_inputs) {
    cmd->add_option("--config", o.config_path, "JSON experiment config");
    cmd->add_option("--preset", o.preset, "named preset (fig2-two-locus, table1, three-locus, nfds-one-locus, "
                                          "nfds-two-locus, yeast-K, yeast-S, drosophila-joint)");
    cmd->add_option("--seed", o.seed, "master seed override")->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--threads", o.threads, "worker thread cap")->check(CLI::PositiveNumber);
    if (with_inputs) cmd->add_option("data", o.inputs, "trajectory CSV file(s)");
}

sigsel::ExperimentConfig resolve_config(const CommonOpts& o) {
    json j = json::object();
    if (!o.config_path.empty()) {
        std::ifstream is(o.config_path);
        if (!is) throw std::runtime_error("cannot open config " + o.config_path);
        is >> j;
    }
    if (!o.preset.empty()) j["preset"] = o.preset;
    if (j.empty()) throw std::runtime_error("need --config and/or --preset");
    sigsel::ExperimentConfig c = sigsel::config_from_json(j);
    if (o.seed_set) {
        c.sim.seed = o.seed;
        c.mcmc.seed = o.seed;
    }
    if (!o.out_dir.empty()) c.io.out_dir = o.out_dir;
    if (!o.inputs.empty()) c.io.inputs = o.inputs;
    return c;
}

fs::path ensure_out(const sigsel::ExperimentConfig& c) {
    fs::path dir(c.io.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
    return dir;
}

std::vector<sigsel::Trajectory> load_inputs(const sigsel::ExperimentConfig& c) {
    if (c.io.inputs.empty()) throw std::runtime_error("no input trajectory files (positional args or io.inputs)");
    std::vector<sigsel::Trajectory> all;
    for (const auto& p : c.io.inputs) {
        auto reps = sigsel::ingest_trajectory(fs::path(p));
        for (auto& t : reps) all.push_back(std::move(t));
    }
    return all;
}

int cmd_simulate(const CommonOpts& o) {
    const sigsel::ExperimentConfig c = resolve_config(o);
    const fs::path dir = ensure_out(c);
    const int n_rep = std::max(1, c.mcmc.n_replicates);
    const sigsel::Rng master(c.sim.seed);
    json files = json::array();
    for (int r = 0; r < n_rep; ++r) {
        sigsel::Rng rng = master.split(static_cast<std::uint64_t>(r));
        const sigsel::Trajectory traj = sigsel::simulate_trajectory(c.sim, c.model, c.rmap, rng);
        const fs::path out = dir / ("trajectory_" + std::to_string(r + 1) + ".csv");
        sigsel::write_trajectory_csv(out, {traj});
        files.push_back(out.string());
    }
    json manifest;
    manifest["seed"] = c.sim.seed;
    manifest["config"] = sigsel::to_json(c);
    manifest["files"] = files;
    std::ofstream ms(dir / "manifest.json");
    ms << manifest.dump(2) << "\n";
    std::cout << "wrote " << n_rep << " trajectories to " << dir.string() << "\n";
    return 0;
}

int cmd_infer(const CommonOpts& o) {
    const auto t_start = std::chrono::steady_clock::now();
    const sigsel::ExperimentConfig c = resolve_config(o);
    const fs::path dir = ensure_out(c);
    const std::vector<sigsel::Trajectory> obs = load_inputs(c);

    sigsel::ScoreTarget target;
    target.model = c.model;
    target.rmap = c.rmap;
    target.sim = c.sim;
    target.kernel = c.kernel_params();
    target.pde = c.pde();
    target.add_time = c.kernel.add_time;
    target.joint_init = c.joint_init;
    target.m = c.mcmc.m;
    target.threads = o.threads;
    target.obs = obs;

    const sigsel::ParameterSpace space = c.space();
    std::vector<double> init;
    if (!c.chain_init.empty()) {
        init = c.chain_init;
        if (init.size() == c.model.s.size() && space.constrained_dim() > static_cast<int>(init.size())) {
            // selection start given alone: simplex block starts uniform, r = 0
            const std::size_t nh = std::size_t{1} << c.loci();
            for (std::size_t i = 0; i < nh; ++i) init.push_back(1.0 / static_cast<double>(nh));
            init.push_back(0.0);
        }
    } else {
        init = sigsel::lls_chain_init(obs.front(), space, c.ploidy, c.sim.pop_size);
    }

    const sigsel::ChainResult res = sigsel::run_chain(init, space, target.as_score_fn(), c.mcmc);
    const std::vector<double> mean = sigsel::posterior_mean(res.samples);
    const std::vector<double> mode = sigsel::posterior_mode_kde(res.samples);
    const std::vector<std::string> names = space.names();

    sigsel::write_samples_csv(dir / "samples.csv", names, res.samples);

    bool have_truth = false;
    for (double s : c.model.s) have_truth = have_truth || s != 0.0;
    std::vector<double> truth = c.model.s;
    if (c.joint_init) {
        for (double h : c.sim.init_haps) truth.push_back(h);
        truth.push_back(0.0);  // r has no generative truth
    }
    sigsel::write_pair_plots(dir, names, res.samples, have_truth ? &truth : nullptr, &mean);

    const double wall =
        std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - t_start).count();
    json summary;
    summary["acceptance_rate"] = res.acceptance_rate;
    summary["posterior_mean"] = mean;
    summary["posterior_mode"] = mode;
    summary["seed"] = c.mcmc.seed;
    summary["config"] = sigsel::to_json(c);
    summary["wall_seconds"] = wall;
    std::ofstream ss(dir / "summary.json");
    ss << summary.dump(2) << "\n";

    std::cout << "acceptance rate " << res.acceptance_rate << "\nposterior mean";
    for (double v : mean) std::cout << " " << v;
    std::cout << "\nwrote " << (dir / "samples.csv").string() << "\n";
    return 0;
}

int cmd_lls(const CommonOpts& o) {
    const sigsel::ExperimentConfig c = resolve_config(o);
    const fs::path dir = ensure_out(c);
    const std::vector<sigsel::Trajectory> obs = load_inputs(c);
    const std::size_t loci = obs.front().loci();

    std::ofstream os(dir / "lls.csv");
    os << "replicate";
    for (std::size_t l = 0; l < loci; ++l) os << ",s_" << (l + 1);
    for (std::size_t l = 0; l < loci; ++l) os << ",degenerate_" << (l + 1);
    os << "\n";
    std::vector<double> mean(loci, 0.0);
    for (std::size_t r = 0; r < obs.size(); ++r) {
        const sigsel::LLSEstimate est = sigsel::lls_estimate(obs[r], c.ploidy, c.sim.pop_size);
        os << (r + 1);
        for (std::size_t l = 0; l < loci; ++l) {
            os << "," << std::setprecision(17) << est.s_hat[l];
            mean[l] += est.s_hat[l] / static_cast<double>(obs.size());
        }
        for (std::size_t l = 0; l < loci; ++l) os << "," << (est.degenerate[l] ? 1 : 0);
        os << "\n";
    }
    os << "mean";
    for (std::size_t l = 0; l < loci; ++l) os << "," << std::setprecision(17) << mean[l];
    for (std::size_t l = 0; l < loci; ++l) os << ",";
    os << "\n";
    std::cout << "lls mean";
    for (double v : mean) std::cout << " " << v;
    std::cout << "\nwrote " << (dir / "lls.csv").string() << "\n";
    return 0;
}

std::string format_cell(double mean, double sd) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(4) << mean << " (" << sd << ")";
    return c.str();
}

int cmd_benchmark(const CommonOpts& o, const std::string& method_sel) {
    const sigsel::ExperimentConfig c = resolve_config(o);
    const fs::path dir = ensure_out(c);

    std::vector<sigsel::ScenarioSpec> grid = c.scenarios;
    if (grid.empty()) grid.push_back({"default", c.model.s, c.rmap.rates});
    std::vector<sigsel::BenchmarkMethod> methods;
    if (method_sel == "lls")
        methods = {sigsel::BenchmarkMethod::LLS};
    else if (method_sel == "gblfi")
        methods = {sigsel::BenchmarkMethod::GBLFI};
    else
        methods = {sigsel::BenchmarkMethod::GBLFI, sigsel::BenchmarkMethod::LLS};

    std::vector<sigsel::BenchmarkRow> rows;
    const sigsel::Rng master(c.sim.seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sigsel::BenchmarkScenario sc;
        sc.label = grid[i].label;
        sc.model = c.model;
        sc.model.s = grid[i].s;
        sc.model.dominance = std::vector<double>(grid[i].s.size(), 0.5);
        if (!c.model.dominance.empty() && c.model.dominance.size() == grid[i].s.size())
            sc.model.dominance = c.model.dominance;
        sc.rmap.rates = grid[i].rates;
        sc.sim = c.sim;
        sc.mcmc = c.mcmc;
        sc.kernel = c.kernel_params();
        sc.pde = c.pde();
        sc.add_time = c.kernel.add_time;
        sc.space = c.space();
        sc.ploidy = c.ploidy;
        sc.n_reps = c.n_reps;
        const std::uint64_t sc_seed = master.split(i).root();
        for (auto m : methods)
            rows.push_back(sigsel::benchmark_scenario(sc, m, c.estimator, sc_seed, o.threads));
    }

    std::ofstream os(dir / "benchmark.csv");
    os << "label,method,estimator,n_reps,mean_rmse,sd_rmse,single_rep\n";
    for (const auto& r : rows)
        os << "\"" << r.label << "\"," << r.method << "," << r.estimator << "," << r.n_reps << ","
           << std::setprecision(17) << r.mean_rmse << "," << r.sd_rmse << "," << (r.single_rep ? 1 : 0) << "\n";

    std::size_t lw = 8;
    for (const auto& r : rows) lw = std::max(lw, r.label.size());
    std::ostringstream tab;
    tab << std::left << std::setw(static_cast<int>(lw) + 2) << "scenario" << std::setw(14) << "method"
        << "rmse mean (sd)\n";
    for (const auto& r : rows)
        tab << std::left << std::setw(static_cast<int>(lw) + 2) << r.label << std::setw(14) << r.method
            << format_cell(r.mean_rmse, r.sd_rmse) << (r.single_rep ? "  [single repetition]" : "") << "\n";
    std::ofstream ts(dir / "benchmark.txt");
    ts << tab.str();
    std::cout << tab.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"selection-coefficient inference with signature-kernel scoring rules"};
    app.require_subcommand(1);

    CommonOpts so, io, lo, bo;
    std::string method_sel = "both";

    CLI::App* sim = app.add_subcommand("simulate", "simulate Wright-Fisher trajectories");
    add_common(sim, so, false);
    CLI::App* inf = app.add_subcommand("infer", "sample the scoring-rule posterior");
    add_common(inf, io, true);
    CLI::App* lls = app.add_subcommand("lls", "linear least-squares baseline estimates");
    add_common(lls, lo, true);
    CLI::App* bench = app.add_subcommand("benchmark", "RMSE benchmark over a scenario grid");
    add_common(bench, bo, false);
    bench->add_option("--method", method_sel, "gblfi, lls, or both")
        ->check(CLI::IsMember({"gblfi", "lls", "both"}));

    CLI11_PARSE(app, argc, argv);
    try {
        if (sim->parsed()) return cmd_simulate(so);
        if (inf->parsed()) return cmd_infer(io);
        if (lls->parsed()) return cmd_lls(lo);
        if (bench->parsed()) return cmd_benchmark(bo, method_sel);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
