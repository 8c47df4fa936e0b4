// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
// Usage: acceptance [--cli PATH]
// The CLI path enables the subprocess determinism check; without it the
// same check runs through the library pipeline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "causalcast/causal.hpp"
#include "causalcast/dlm.hpp"
#include "causalcast/io.hpp"
#include "causalcast/model_set.hpp"
#include "causalcast/oracle.hpp"
#include "causalcast/pipeline.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/simulate.hpp"

using namespace causalcast;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string g_cli_path;

struct Failure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw Failure{message};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

NIWParams make_niw(Matrix m, Matrix c, double n, Matrix d) {
    NIWParams p;
    p.M = std::move(m);
    p.C = SpdMatrix(std::move(c), "C0");
    p.n = n;
    p.D = SpdMatrix(std::move(d), "D0");
    return p;
}

struct RandomPanel {
    Matrix y;
    Matrix x;
    ModelSpec spec;
};

RandomPanel random_panel(std::uint64_t seed, std::size_t q, std::size_t p, std::size_t T,
                         double delta, double beta) {
    Rng rng(seed);
    RandomPanel out;
    out.y = Matrix(T, q);
    out.x = Matrix(T, p);
    for (std::size_t t = 0; t < T; ++t) {
        out.x(t, 0) = 1.0;
        for (std::size_t i = 1; i < p; ++i) out.x(t, i) = rng.normal();
        for (std::size_t j = 0; j < q; ++j) out.y(t, j) = 1.0 + 2.0 * rng.normal();
    }
    Matrix m0(p, q);
    for (auto& v : m0.data()) v = 0.5 * rng.normal();
    Matrix d0 = Matrix::identity(q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j) d0(i, j) = d0(j, i) = 0.2;
    out.spec.p = p;
    out.spec.q = q;
    out.spec.delta = delta;
    out.spec.beta = beta;
    out.spec.prior = make_niw(m0, Matrix::identity(p).scaled(4.0),
                              static_cast<double>(q) + 3.0,
                              d0.scaled(static_cast<double>(q) + 1.0));
    return out;
}

// ---------------------------------------------------------------- criteria

void criterion1_conjugacy_oracle() {
    const double start = now_seconds();
    Rng dim_rng(1001);
    for (int c = 0; c < 50; ++c) {
        const std::size_t q = 1 + static_cast<std::size_t>(dim_rng.uniform() * 5);
        const std::size_t p = 1 + static_cast<std::size_t>(dim_rng.uniform() * 4);
        const std::size_t T = 10 + static_cast<std::size_t>(dim_rng.uniform() * 51);
        RandomPanel panel = random_panel(2000 + c, q, p, T, 1.0, 1.0);
        const FilterTrajectory traj = filter_run(panel.y, panel.x, panel.spec);
        const NIWParams batch =
            batch_regression_oracle(panel.y, panel.x, panel.spec.prior);
        const NIWParams& fin = traj.states.back().params;
        const double dm = max_abs_diff(fin.M, batch.M);
        const double dc = max_abs_diff(fin.C.mat(), batch.C.mat());
        require(dm < 1e-8, "panel " + std::to_string(c) + ": |M - oracle| = " + fmt(dm));
        require(dc < 1e-8, "panel " + std::to_string(c) + ": |C - oracle| = " + fmt(dc));
    }
    const double elapsed = now_seconds() - start;
    require(elapsed < 5.0, "runtime " + fmt(elapsed) + "s exceeds 5s");
}

void criterion2_marginal_equivalence() {
    const std::vector<std::pair<double, double>> grids = {
        {1.0, 1.0}, {1.0, 0.95}, {0.95, 1.0}, {0.95, 0.95}};
    Rng dim_rng(1002);
    for (int c = 0; c < 20; ++c) {
        const auto [delta, beta] = grids[c % grids.size()];
        const std::size_t q = 1 + static_cast<std::size_t>(dim_rng.uniform() * 4);
        const std::size_t p = 1 + static_cast<std::size_t>(dim_rng.uniform() * 3);
        RandomPanel panel = random_panel(3000 + c, q, p, 30, delta, beta);
        const FilterTrajectory traj = filter_run(panel.y, panel.x, panel.spec);
        for (std::size_t j = 0; j < q; ++j) {
            UnivariateDlmPrior uprior;
            uprior.m0 = panel.spec.prior.M.col(j);
            uprior.c0.assign(p, std::vector<double>(p));
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b) uprior.c0[a][b] = panel.spec.prior.C(a, b);
            uprior.n0 = panel.spec.prior.n;
            uprior.d0 = panel.spec.prior.D(j, j);
            const auto uni = univariate_dlm_oracle(panel.y.col(j), panel.x, uprior, delta, beta);
            for (std::size_t t = 0; t < uni.size(); ++t) {
                const NIWParams& mv = traj.states[t].params;
                for (std::size_t i = 0; i < p; ++i) {
                    require(std::abs(mv.M(i, j) - uni[t].m[i]) < 1e-8, "M mismatch");
                    for (std::size_t i2 = 0; i2 < p; ++i2)
                        require(std::abs(mv.C(i, i2) - uni[t].c[i][i2]) < 1e-8, "C mismatch");
                }
                require(std::abs(traj.forecasts[t].location[j] - uni[t].f) < 1e-8,
                        "forecast location mismatch");
                require(std::abs(traj.forecasts[t].scale(j, j) - uni[t].forecast_scale) < 1e-8,
                        "forecast scale mismatch");
            }
        }
    }
}

void criterion3_recursion_spot_checks() {
    ModelSpec spec;
    spec.p = 1;
    spec.q = 1;
    spec.delta = 0.9;
    spec.beta = 0.9;
    spec.prior = make_niw(Matrix(1, 1, 2.0), Matrix(1, 1, 1.0), 5.0, Matrix(1, 1, 3.0));
    const FilterState prior = evolve({0, spec.prior, Phase::posterior}, spec);
    require(std::abs(prior.params.M(0, 0) - 2.0) < 1e-10, "a != 2");
    require(std::abs(prior.params.C(0, 0) - 10.0 / 9.0) < 1e-10, "R != 10/9");
    require(std::abs(prior.params.n - 4.5) < 1e-10, "evolved df != 4.5");
    require(std::abs(prior.params.D(0, 0) - 2.7) < 1e-10, "D~ != 2.7");

    const MultivariateT fc = forecast_one_step(prior, {1.0}, spec);
    require(std::abs(fc.df - 4.5) < 1e-10, "forecast df != 4.5");
    require(std::abs(fc.location[0] - 2.0) < 1e-10, "f != 2");
    require(std::abs(fc.scale(0, 0) - 19.0 / 9.0 * 0.6) < 1e-10, "scale != 1.2667");

    const FilterState post = update(prior, {1.0}, {3.0}, spec);
    require(std::abs(post.params.M(0, 0) - 48.0 / 19.0) < 1e-10, "M != 2.5263");
    require(std::abs(post.params.C(0, 0) - 10.0 / 19.0) < 1e-10, "C != 0.5263");
    require(std::abs(post.params.n - 5.5) < 1e-10, "n != 5.5");
    require(std::abs(post.params.D(0, 0) - (2.7 + 9.0 / 19.0)) < 1e-10, "D != 3.1737");
}

void criterion4_path_composition_mean() {
    ModelSpec spec;
    spec.p = 2;
    spec.q = 2;
    spec.delta = 1.0;
    spec.beta = 1.0;
    Matrix m0(2, 2);
    m0(0, 0) = 40.0;
    m0(0, 1) = 60.0;
    m0(1, 0) = 2.0;
    m0(1, 1) = -3.0;
    Matrix d0 = Matrix::identity(2);
    d0(0, 1) = d0(1, 0) = 0.4;
    spec.prior = make_niw(m0, Matrix::identity(2).scaled(0.3), 16.0, d0.scaled(14.0));
    const FilterState posterior{52, spec.prior, Phase::posterior};

    const std::size_t k = 8;
    const int S = 10000;
    Matrix f_post(k, 2);
    for (std::size_t t = 0; t < k; ++t) {
        f_post(t, 0) = 1.0;
        f_post(t, 1) = 0.7;
    }
    const CounterfactualDraws draws = sample_paths(posterior, f_post, spec, S, 4004);
    for (std::size_t j = 0; j < 2; ++j) {
        const double target = m0(0, j) + 0.7 * m0(1, j);
        for (std::size_t t = 0; t < k; ++t) {
            double mean = 0.0, sq = 0.0;
            for (int s = 0; s < S; ++s) {
                const double v = draws.at(s, t, j);
                mean += v;
                sq += v * v;
            }
            mean /= S;
            const double sd = std::sqrt(sq / S - mean * mean);
            const double dev = std::abs(mean - target);
            const double limit = 3.0 * sd / std::sqrt(static_cast<double>(S));
            require(dev <= limit, "step " + std::to_string(t) + " series " +
                                      std::to_string(j) + ": |mean - F'M| = " + fmt(dev) +
                                      " > " + fmt(limit));
        }
    }
}

void criterion5_lift_coverage() {
    const double start = now_seconds();
    const int n_seeds = 200;
    int unit_covered = 0, unit_total = 0, agg_covered = 0;
    for (int rep = 0; rep < n_seeds; ++rep) {
        SimConfig sim_config;  // paper shape: q=16, c=43, T=52, m=8, k=24
        sim_config.effect_pct = 5.0;
        sim_config.rho = 0.3;
        sim_config.seed = 50000 + rep;
        const SimOutput sim = simulate_panel(sim_config);

        RunConfig config;
        config.pc_counts = {2};
        config.draws = 2000;
        config.seed = 60000 + rep;

        PanelData panel;
        panel.dates = weekly_dates("2020-02-02", 76);
        panel.treated = sim.treated;
        panel.controls = sim.controls.values;
        for (std::size_t j = 0; j < 16; ++j)
            panel.treated_ids.push_back("T" + std::to_string(j + 1));
        for (std::size_t j = 0; j < 43; ++j)
            panel.control_ids.push_back("C" + std::to_string(j + 1));
        config.train_end = panel.dates[51];
        config.transition_end = panel.dates[59];
        config.eval_end = panel.dates[75];

        const FitResult fit = run_fit(resolve_study(std::move(panel), config), config);
        const EvalResult eval = run_evaluate(fit, config);
        for (const auto& s : eval.mixed_lift.per_unit) {
            if (s.q025 <= 5.0 && 5.0 <= s.q975) ++unit_covered;
            ++unit_total;
        }
        const auto& agg = eval.mixed_lift.aggregate_multivariate;
        if (agg.q025 <= 5.0 && 5.0 <= agg.q975) ++agg_covered;
    }
    const double unit_rate = static_cast<double>(unit_covered) / unit_total;
    const double agg_rate = static_cast<double>(agg_covered) / n_seeds;
    const double elapsed = now_seconds() - start;
    require(unit_rate >= 0.90 && unit_rate <= 0.99,
            "per-unit coverage " + fmt(unit_rate) + " outside [0.90, 0.99]");
    require(agg_rate >= 0.90 && agg_rate <= 0.99,
            "aggregate coverage " + fmt(agg_rate) + " outside [0.90, 0.99]");
    require(elapsed < 600.0, "runtime " + fmt(elapsed) + "s exceeds 10 minutes");
    std::printf("        (per-unit %.3f, aggregate %.3f, %.0fs)\n", unit_rate, agg_rate,
                elapsed);
}

void criterion6_dependence_inflation() {
    const double predicted = std::sqrt(1.0 + 15.0 * 0.5);
    double ratio_sum = 0.0;
    const int n_seeds = 3;
    for (int rep = 0; rep < n_seeds; ++rep) {
        SimConfig sim_config;
        sim_config.rho = 0.5;
        sim_config.effect_pct = 5.0;
        sim_config.n_factors = 1;
        sim_config.seed = 70000 + rep;
        const SimOutput sim = simulate_panel(sim_config);

        RunConfig config;
        config.pc_counts = {1};
        config.discount_grid = {{1.0, 1.0}};  // static generator, static filter
        config.draws = 20000;
        config.seed = 80000 + rep;
        PanelData panel;
        panel.dates = weekly_dates("2020-02-02", 76);
        panel.treated = sim.treated;
        panel.controls = sim.controls.values;
        for (std::size_t j = 0; j < 16; ++j)
            panel.treated_ids.push_back("T" + std::to_string(j + 1));
        for (std::size_t j = 0; j < 43; ++j)
            panel.control_ids.push_back("C" + std::to_string(j + 1));
        config.train_end = panel.dates[51];
        config.transition_end = panel.dates[59];
        config.eval_end = panel.dates[75];

        const FitResult fit = run_fit(resolve_study(std::move(panel), config), config);
        const EvalResult eval = run_evaluate(fit, config);
        const auto& mv = eval.mixed_lift.aggregate_multivariate;
        const auto& ind = eval.mixed_lift.aggregate_independent;
        const double ratio = (mv.q975 - mv.q025) / (ind.q975 - ind.q025);
        require(ratio >= 1.5,
                "seed " + std::to_string(rep) + ": width ratio " + fmt(ratio) + " < 1.5");
        ratio_sum += ratio;
    }
    const double mean_ratio = ratio_sum / n_seeds;
    require(std::abs(mean_ratio - predicted) / predicted <= 0.15,
            "mean width ratio " + fmt(mean_ratio) + " not within 15% of " + fmt(predicted));
    std::printf("        (mean ratio %.3f vs predicted %.3f)\n", mean_ratio, predicted);
}

void criterion7_bma_sanity() {
    // Exactly equal weights for duplicated models.
    {
        SimConfig sim_config;
        sim_config.q = 3;
        sim_config.c = 8;
        sim_config.T = 40;
        sim_config.m = 2;
        sim_config.k = 6;
        sim_config.seed = 424;
        const SimOutput sim = simulate_panel(sim_config);
        const PcBasis basis = compute_pc_basis(sim.controls, 2);
        ModelSetConfig ms;
        ms.pc_counts = {2, 2};
        ms.init_window = 12;
        const auto runs = run_model_set(sim.treated.rows_slice(0, 40), basis, ms);
        const BmaWeights w =
            cumulative_weights({runs[0].trajectory, runs[1].trajectory}, {0.5, 0.5});
        for (std::size_t t = 0; t < w.weights.rows(); ++t)
            require(w.weights(t, 0) == w.weights(t, 1),
                    "duplicate models diverged at t = " + std::to_string(t));
    }
    // Two-factor data concentrates on one or two components.
    int concentrated = 0;
    const int n_seeds = 100;
    for (int rep = 0; rep < n_seeds; ++rep) {
        SimConfig sim_config;  // paper shape, two factors
        sim_config.seed = 90000 + rep;
        const SimOutput sim = simulate_panel(sim_config);
        const PcBasis basis = compute_pc_basis(sim.controls, 10);
        ModelSetConfig ms;
        ms.pc_counts = {1, 2, 3, 4, 10};
        ms.init_window = 20;
        const auto runs = run_model_set(sim.treated.rows_slice(0, 52), basis, ms);
        std::vector<FilterTrajectory> trajectories;
        for (const auto& r : runs) trajectories.push_back(r.trajectory);
        const BmaWeights w =
            cumulative_weights(trajectories, Vector(5, 0.2));
        const Vector fin = w.final_weights();
        if (fin[0] + fin[1] > 0.9) ++concentrated;
    }
    require(concentrated >= 80, "weight concentrated on {1,2} PCs in only " +
                                    std::to_string(concentrated) + "/100 seeds");
    std::printf("        (concentration in %d/100 seeds)\n", concentrated);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion8_determinism() {
    namespace fs = std::filesystem;
    const std::string dir =
        (fs::temp_directory_path() / "causalcast_acceptance_c8").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::vector<std::string> tables = {"loglik.csv", "bma_weights.csv",
                                             "lift_summary.csv", "correlation.csv"};

    if (!g_cli_path.empty()) {
        const auto run = [&](const std::string& args) {
            const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
            require(std::system(cmd.c_str()) == 0, "command failed: " + cmd);
        };
        run("simulate --out " + dir + " --seed 4242 --effect 5 --rho 0.3");
        const std::string cfg = dir + "/config.json";
        const std::string out = dir + "/out";

        run("fit --config " + cfg + " --out " + out + " --threads 1 --draws 800");
        const std::string fit1_ll = slurp(out + "/loglik.csv");
        const std::string fit1_w = slurp(out + "/bma_weights.csv");
        run("fit --config " + cfg + " --out " + out + " --threads 8 --draws 800");
        require(slurp(out + "/loglik.csv") == fit1_ll, "fit loglik differs across threads");
        require(slurp(out + "/bma_weights.csv") == fit1_w, "fit weights differ across threads");

        run("evaluate --config " + cfg + " --out " + out + " --threads 1 --draws 800");
        std::vector<std::string> first;
        for (const auto& t : tables) first.push_back(slurp(out + "/" + t));
        const std::string manifest1 = slurp(out + "/manifest.json");
        run("evaluate --config " + cfg + " --out " + out + " --threads 8 --draws 800");
        for (std::size_t i = 0; i < tables.size(); ++i)
            require(slurp(out + "/" + tables[i]) == first[i],
                    tables[i] + " differs across thread counts");
        require(slurp(out + "/manifest.json") == manifest1, "manifest differs across reruns");
        run("evaluate --config " + cfg + " --out " + out + " --threads 8 --draws 800");
        for (std::size_t i = 0; i < tables.size(); ++i)
            require(slurp(out + "/" + tables[i]) == first[i], tables[i] + " differs on rerun");
        return;
    }

    // Library-level fallback.
    SimConfig sim_config;
    sim_config.q = 4;
    sim_config.c = 10;
    sim_config.T = 40;
    sim_config.m = 3;
    sim_config.k = 9;
    sim_config.effect_pct = 5.0;
    sim_config.seed = 4242;
    const SimOutput sim = simulate_panel(sim_config);
    PanelData panel;
    panel.dates = weekly_dates("2020-02-02", 49);
    panel.treated = sim.treated;
    panel.controls = sim.controls.values;
    for (std::size_t j = 0; j < 4; ++j) panel.treated_ids.push_back("T" + std::to_string(j));
    for (std::size_t j = 0; j < 10; ++j) panel.control_ids.push_back("C" + std::to_string(j));
    RunConfig config;
    config.pc_counts = {1, 2};
    config.draws = 800;
    config.seed = 4242;
    config.train_end = panel.dates[39];
    config.transition_end = panel.dates[42];

    std::vector<std::string> snapshots;
    for (int threads : {1, 8, 8}) {
        RunConfig c = config;
        c.threads = threads;
        PanelData copy = panel;
        const FitResult fit = run_fit(resolve_study(std::move(copy), c), c);
        const EvalResult eval = run_evaluate(fit, c);
        const std::string run_dir = dir + "/t" + std::to_string(threads) +
                                    "_" + std::to_string(snapshots.size());
        emit_report(make_report_bundle(fit, &eval, c), run_dir);
        std::string all;
        for (const auto& t : tables) all += slurp(run_dir + "/" + t);
        snapshots.push_back(std::move(all));
    }
    require(snapshots[0] == snapshots[1], "tables differ between 1 and 8 threads");
    require(snapshots[1] == snapshots[2], "tables differ between reruns");
}

void criterion9_invariant_suite() {
    // Cholesky round trip (1000 randomized SPD matrices).
    for (std::uint64_t c = 0; c < 1000; ++c) {
        Rng rng(9100, c);
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 6);
        Matrix b(n, n);
        for (auto& v : b.data()) v = rng.normal();
        Matrix a = b * b.transpose();
        for (std::size_t i = 0; i < n; ++i) a(i, i) += 1e-3;
        const SpdMatrix spd(symmetrized(a), "case");
        const Matrix back = spd.chol_lower() * spd.chol_lower().transpose();
        require(max_abs_diff(back, spd.mat()) <= 1e-10 * std::max(1.0, max_abs(a)),
                "cholesky round trip drifted");
    }

    // mvt permutation invariance and mode at location (1000 cases).
    for (std::uint64_t c = 0; c < 1000; ++c) {
        Rng rng(9200, c);
        const std::size_t q = 2 + static_cast<std::size_t>(rng.uniform() * 3);
        Matrix b(q, q);
        for (auto& v : b.data()) v = rng.normal();
        Matrix s = symmetrized(b * b.transpose());
        for (std::size_t i = 0; i < q; ++i) s(i, i) += 0.5;
        Vector loc(q), y(q);
        for (auto& v : loc) v = rng.normal();
        for (auto& v : y) v = 2.0 * rng.normal();
        MultivariateT t;
        t.df = 1.0 + 8.0 * rng.uniform();
        t.location = loc;
        t.scale = SpdMatrix(s, "s");
        std::vector<std::size_t> perm(q);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = q; i-- > 1;)
            std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * (i + 1))]);
        Matrix sp(q, q);
        Vector locp(q), yp(q);
        for (std::size_t i = 0; i < q; ++i) {
            locp[i] = loc[perm[i]];
            yp[i] = y[perm[i]];
            for (std::size_t j = 0; j < q; ++j) sp(i, j) = s(perm[i], perm[j]);
        }
        MultivariateT tp;
        tp.df = t.df;
        tp.location = locp;
        tp.scale = SpdMatrix(sp, "sp");
        require(std::abs(mvt_log_density(t, y) - mvt_log_density(tp, yp)) < 1e-9,
                "mvt density not permutation invariant");
        require(mvt_log_density(t, loc) >= mvt_log_density(t, y),
                "mvt density not maximized at location");
    }

    // df ledger and C-independence (1000 cases).
    for (std::uint64_t c = 0; c < 1000; ++c) {
        Rng rng(9300, c);
        const std::size_t q = 1 + static_cast<std::size_t>(rng.uniform() * 3);
        const double beta = 0.6 + 0.4 * rng.uniform();
        const double n0 = static_cast<double>(q) + 1.0 + 8.0 * rng.uniform();
        ModelSpec spec;
        spec.p = 1;
        spec.q = q;
        spec.delta = 0.6 + 0.4 * rng.uniform();
        spec.beta = beta;
        spec.prior = make_niw(Matrix(1, q), Matrix::identity(1), n0,
                              Matrix::identity(q).scaled(2.0));
        const FilterState prior = evolve({0, spec.prior, Phase::posterior}, spec);
        require(prior.params.n == beta * n0, "df ledger: evolved df != beta * n");
        Vector y1(q, 0.3), y2(q, -11.0);
        const FilterState p1 = update(prior, {1.0}, y1, spec);
        const FilterState p2 = update(prior, {1.0}, y2, spec);
        require(p1.params.n == beta * n0 + 1.0, "df ledger: posterior df != evolved + 1");
        require(max_abs_diff(p1.params.C.mat(), p2.params.C.mat()) == 0.0,
                "C depends on observed values");
    }

    // BMA shift invariance and normalization (1000 cases).
    for (std::uint64_t c = 0; c < 1000; ++c) {
        Rng rng(9400, c);
        const std::size_t T = 3 + static_cast<std::size_t>(rng.uniform() * 8);
        FilterTrajectory a, b;
        a.loglik.resize(T);
        b.loglik.resize(T);
        Vector shift(T);
        for (std::size_t t = 0; t < T; ++t) {
            a.loglik[t] = -2.0 + rng.normal();
            b.loglik[t] = -2.0 + rng.normal();
            shift[t] = 100.0 * rng.normal();
        }
        const BmaWeights w1 = cumulative_weights({a, b}, {0.4, 0.6});
        FilterTrajectory a2 = a, b2 = b;
        for (std::size_t t = 0; t < T; ++t) {
            a2.loglik[t] += shift[t];
            b2.loglik[t] += shift[t];
        }
        const BmaWeights w2 = cumulative_weights({a2, b2}, {0.4, 0.6});
        for (std::size_t t = 0; t < T; ++t) {
            require(std::abs(w1.weights(t, 0) - w2.weights(t, 0)) < 1e-9,
                    "weights not shift invariant");
            const double sum = w1.weights(t, 0) + w1.weights(t, 1);
            require(std::abs(sum - 1.0) < 1e-12, "weights row does not sum to 1");
            require(w1.weights(t, 0) >= 0.0 && w1.weights(t, 0) <= 1.0,
                    "weight outside [0, 1]");
        }
    }

    // Lift currency invariance and independence marginals (200 cases).
    for (std::uint64_t c = 0; c < 200; ++c) {
        Rng rng(9500, c);
        const std::size_t S = 40, k = 3, q = 2;
        CounterfactualDraws draws;
        draws.num_draws = S;
        draws.horizon = k;
        draws.num_series = q;
        draws.values.resize(S * k * q);
        for (auto& v : draws.values) v = 50.0 + 5.0 * rng.normal();
        Matrix obs(k, q);
        for (auto& v : obs.data()) v = 52.0 + 2.0 * rng.normal();
        const LiftDraws base = percent_lift_per_unit(draws, obs, {0, 1, 2});
        CounterfactualDraws scaled = draws;
        for (auto& v : scaled.values) v *= 4.0;
        const LiftDraws big = percent_lift_per_unit(scaled, obs.scaled(4.0), {0, 1, 2});
        require(base.lifts.data() == big.lifts.data(), "lift not scale invariant");

        const Vector ind = aggregate_lift_draws(base, AggregationMode::independent, c);
        Vector col0(S);
        for (std::size_t s = 0; s < S; ++s) col0[s] = base.lifts(s, 0);
        // Permutation preserves sums of each unit's draws.
        double direct = 0.0, via_ind = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t j = 0; j < q; ++j) direct += base.lifts(s, j);
            via_ind += ind[s] * static_cast<double>(q);
        }
        require(std::abs(direct - via_ind) < 1e-8 * std::max(1.0, std::abs(direct)),
                "independence permutation lost draws");
    }

    // Correlation symmetry and unit diagonal (100 cases).
    for (std::uint64_t c = 0; c < 100; ++c) {
        Rng rng(9600, c);
        const std::size_t S = 30, k = 2, q = 3;
        CounterfactualDraws draws;
        draws.num_draws = S;
        draws.horizon = k;
        draws.num_series = q;
        draws.values.resize(S * k * q);
        for (auto& v : draws.values) v = rng.normal();
        const CorrelationResult corr = counterfactual_correlation(draws, {0, 1});
        for (std::size_t i = 0; i < q; ++i) {
            require(corr.correlation(i, i) == 1.0, "correlation diagonal not 1");
            for (std::size_t j = 0; j < q; ++j)
                require(corr.correlation(i, j) == corr.correlation(j, i),
                        "correlation not symmetric");
        }
    }

    // PCA orthonormality, score identity, deterministic signs (100 cases).
    for (std::uint64_t c = 0; c < 100; ++c) {
        Rng rng(9700, c);
        const std::size_t train = 10 + static_cast<std::size_t>(rng.uniform() * 10);
        const std::size_t rows = train + static_cast<std::size_t>(rng.uniform() * 6);
        const std::size_t nc = 2 + static_cast<std::size_t>(rng.uniform() * 4);
        ControlPanel panel;
        panel.values = Matrix(rows, nc);
        for (auto& v : panel.values.data()) v = 100.0 + 10.0 * rng.normal();
        panel.train_len = train;
        const std::size_t p_max = std::min(nc, train - 1);
        const PcBasis basis = compute_pc_basis(panel, p_max);
        require(max_abs_diff(basis.loadings.transpose() * basis.loadings,
                             Matrix::identity(p_max)) < 1e-8,
                "PCA loadings not orthonormal");
        for (std::size_t j = 1; j < p_max; ++j)
            require(basis.explained_variance[j - 1] >=
                        basis.explained_variance[j] - 1e-12,
                    "explained variance not sorted");
        Matrix centered(rows, nc);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                centered(i, j) = panel.values(i, j) - basis.column_centers[j];
        require(max_abs_diff(centered * basis.loadings, basis.scores) < 1e-10,
                "scores differ from centered values times loadings");
    }

    // NIW draws keep Sigma SPD (1000 draws).
    {
        NIWParams params;
        params.M = Matrix(2, 3);
        params.C = SpdMatrix(Matrix::identity(2), "C");
        params.n = 6.0;
        params.D = SpdMatrix(Matrix::identity(3).scaled(2.0), "D");
        for (const auto& draw : niw_sample(params, 1000, 9800))
            require(cholesky(draw.sigma.mat()).ok, "NIW Sigma draw not SPD");
    }
}

struct Criterion {
    int id;
    std::string name;
    std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];

    const std::vector<Criterion> criteria = {
        {1, "conjugacy oracle: static filter matches batch regression", criterion1_conjugacy_oracle},
        {2, "marginal equivalence with univariate DLMs", criterion2_marginal_equivalence},
        {3, "recursion spot-checks on the hand-evaluated example", criterion3_recursion_spot_checks},
        {4, "path-composition forecast mean", criterion4_path_composition_mean},
        {5, "lift coverage of an injected 5% effect", criterion5_lift_coverage},
        {6, "dependence inflation of aggregate intervals", criterion6_dependence_inflation},
        {7, "BMA sanity: duplicates and concentration", criterion7_bma_sanity},
        {8, "determinism across reruns and thread counts", criterion8_determinism},
        {9, "invariant property suite", criterion9_invariant_suite},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        try {
            criterion.run();
            std::printf("[PASS] criterion %d: %s\n", criterion.id, criterion.name.c_str());
        } catch (const Failure& f) {
            std::printf("[FAIL] criterion %d: %s -- %s\n", criterion.id,
                        criterion.name.c_str(), f.message.c_str());
            ++failures;
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion %d: %s -- unexpected error: %s\n", criterion.id,
                        criterion.name.c_str(), e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
