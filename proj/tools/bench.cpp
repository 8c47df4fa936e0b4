// Benchmark: serial reference path sampler vs the OpenMP kernel, plus
// parallel model-set fitting, with checksum agreement checks.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "causalcast/causal.hpp"
#include "causalcast/model_set.hpp"
#include "causalcast/pipeline.hpp"
#include "causalcast/simulate.hpp"

using namespace causalcast;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double checksum(const CounterfactualDraws& draws) {
    double acc = 0.0;
    for (double v : draws.values) acc += v;
    return acc;
}

}  // namespace

int main(int argc, char** argv) {
    int num_draws = 20000;
    if (argc > 1) num_draws = std::atoi(argv[1]);

    SimConfig sim_config;
    sim_config.rho = 0.3;
    sim_config.effect_pct = 5.0;
    sim_config.seed = 7;
    const SimOutput sim = simulate_panel(sim_config);

    PcBasis basis = compute_pc_basis(sim.controls, 3);
    ModelSetConfig ms;
    ms.pc_counts = {1, 2, 3};
    ms.init_window = 20;
    const Matrix treated_train = sim.treated.rows_slice(0, sim_config.T);

    std::printf("model set: %zu candidates, q=%zu, T=%zu\n", ms.pc_counts.size(),
                sim_config.q, sim_config.T);
    auto t0 = std::chrono::steady_clock::now();
    auto runs_serial = run_model_set(treated_train, basis, ms, 1);
    const double fit_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto runs_parallel = run_model_set(treated_train, basis, ms, 0);
    const double fit_parallel = seconds_since(t0);
    std::printf("  fit serial   %.3fs\n  fit parallel %.3fs  (speedup %.2fx)\n", fit_serial,
                fit_parallel, fit_serial / fit_parallel);

    const ModelRun& run = runs_serial[1];  // two-component model
    const std::size_t T = sim_config.T;
    const Matrix f_post = build_regressors(basis, run.candidate.pc_count)
                              .rows_slice(T, T + sim_config.k);
    const FilterState& posterior = run.trajectory.states.back();

    std::printf("path sampler: S=%d draws, horizon=%zu, q=%zu\n", num_draws, sim_config.k,
                sim_config.q);
    t0 = std::chrono::steady_clock::now();
    const CounterfactualDraws ref =
        sample_paths_reference(posterior, f_post, run.spec, num_draws, 99);
    const double serial_s = seconds_since(t0);
    std::printf("  reference (serial) %.3fs  (%.0f paths/s)  checksum %.6e\n", serial_s,
                num_draws / serial_s, checksum(ref));

    for (int threads : {1, 2, 4}) {
        t0 = std::chrono::steady_clock::now();
        const CounterfactualDraws par =
            sample_paths(posterior, f_post, run.spec, num_draws, 99, threads);
        const double par_s = seconds_since(t0);
        const bool match = par.values == ref.values;
        std::printf("  openmp threads=%d    %.3fs  (%.0f paths/s, speedup %.2fx)  %s\n",
                    threads, par_s, num_draws / par_s, serial_s / par_s,
                    match ? "matches reference" : "MISMATCH");
        if (!match) return 1;
    }
    return 0;
}
