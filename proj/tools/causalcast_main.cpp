#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "causalcast/io.hpp"
#include "causalcast/pipeline.hpp"
#include "causalcast/simulate.hpp"

namespace {

using namespace causalcast;

constexpr const char* kSimStartDate = "2020-02-02";

PanelData panel_from_sim(const SimOutput& sim, std::size_t total_rows) {
    PanelData panel;
    panel.dates = weekly_dates(kSimStartDate, total_rows);
    panel.treated = sim.treated;
    panel.controls = sim.controls.values;
    for (std::size_t j = 0; j < sim.treated.cols(); ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "T%02zu", j + 1);
        panel.treated_ids.push_back(buf);
    }
    for (std::size_t j = 0; j < sim.controls.values.cols(); ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "C%02zu", j + 1);
        panel.control_ids.push_back(buf);
    }
    return panel;
}

int run_simulate(const SimConfig& sim_config, const std::string& out_dir, int draws) {
    std::filesystem::create_directories(out_dir);
    const SimOutput sim = simulate_panel(sim_config);
    const std::size_t rows = sim_config.T + sim_config.k;
    const PanelData panel = panel_from_sim(sim, rows);
    write_panel_csv(out_dir + "/panel.csv", panel);

    // Ground truth per unit, for scoring any later evaluation.
    {
        std::ofstream truth(out_dir + "/truth.csv");
        if (!truth) throw io_error("cannot write truth.csv");
        truth << "unit_id,true_lift_pct\n";
        for (std::size_t j = 0; j < sim_config.q; ++j)
            truth << panel.treated_ids[j] << ',' << format_number(sim.truth.true_lift_pct[j])
                  << '\n';
    }

    // Ready-to-run config pointing at the panel with matching window dates.
    RunConfig cfg;
    cfg.data_path = out_dir + "/panel.csv";
    cfg.train_end = panel.dates[sim_config.T - 1];
    cfg.transition_end = panel.dates[sim_config.T + sim_config.m - 1];
    cfg.eval_end = panel.dates[rows - 1];
    cfg.seed = sim_config.seed;
    cfg.draws = draws;
    cfg.out_dir = out_dir;
    std::ofstream cfg_out(out_dir + "/config.json");
    if (!cfg_out) throw io_error("cannot write config.json");
    cfg_out << run_config_to_json(cfg) << '\n';

    std::cout << "wrote " << out_dir << "/panel.csv (" << sim_config.q << " treated, "
              << sim_config.c << " control, " << rows << " weeks), truth.csv, config.json\n";
    return 0;
}

struct CliOverrides {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int draws = 0;
    std::string out_dir;
    int threads = -1;
};

RunConfig load_config(const CliOverrides& cli) {
    RunConfig cfg = read_run_config(cli.config_path);
    if (cli.seed_set) cfg.seed = cli.seed;
    if (cli.draws > 0) cfg.draws = cli.draws;
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    if (cli.threads >= 0) cfg.threads = cli.threads;
    return cfg;
}

int run_fit_command(const CliOverrides& cli, bool evaluate) {
    const RunConfig cfg = load_config(cli);
    Study study = resolve_study(read_panel_csv(cfg.data_path), cfg);
    std::cout << "panel: " << study.design.treated_ids.size() << " treated, "
              << study.design.control_ids.size() << " control units, "
              << study.panel.dates.front() << " .. " << study.panel.dates.back() << "\n";
    const FitResult fit = run_fit(std::move(study), cfg);
    std::cout << "fitted " << fit.runs.size() << " models over "
              << fit.scored_dates.size() << " scored weeks\n";
    for (std::size_t m = 0; m < fit.runs.size(); ++m)
        std::cout << "  " << fit.runs[m].candidate.label()
                  << "  loglik=" << format_number(fit.runs[m].trajectory.total_loglik())
                  << "  weight=" << format_number(fit.final_weights[m]) << "\n";

    ReportBundle bundle;
    if (evaluate) {
        const EvalResult eval = run_evaluate(fit, cfg);
        bundle = make_report_bundle(fit, &eval, cfg);
        const auto& agg = eval.mixed_lift.aggregate_multivariate;
        std::cout << "bma aggregate lift: " << format_number(agg.median) << "% (95% CI "
                  << format_number(agg.q025) << "% .. " << format_number(agg.q975) << "%)\n";
    } else {
        bundle = make_report_bundle(fit, nullptr, cfg);
    }
    for (const auto& f : emit_report(bundle, cfg.out_dir))
        std::cout << "wrote " << cfg.out_dir << "/" << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential multivariate Bayesian causal forecasting"};
    app.require_subcommand(1);

    SimConfig sim_config;
    std::string sim_out = "sim";
    int sim_draws = 10000;
    auto* sim = app.add_subcommand("simulate", "Write a synthetic panel with known truth");
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--seed", sim_config.seed, "RNG seed");
    sim->add_option("--treated", sim_config.q, "Treated units");
    sim->add_option("--controls", sim_config.c, "Control units");
    sim->add_option("--train", sim_config.T, "Training weeks");
    sim->add_option("--transition", sim_config.m, "Transition weeks");
    sim->add_option("--post", sim_config.k, "Post weeks (transition + evaluation)");
    sim->add_option("--effect", sim_config.effect_pct, "True multiplicative lift, percent");
    sim->add_option("--rho", sim_config.rho, "Treated residual equicorrelation");
    sim->add_option("--factors", sim_config.n_factors, "Latent factors");
    sim->add_option("--draws", sim_draws, "Draw count written into config.json");

    CliOverrides fit_cli, eval_cli, report_cli;
    const auto add_run_options = [](CLI::App* cmd, CliOverrides& cli) {
        cmd->add_option("--config", cli.config_path, "Run configuration file")->required();
        cmd->add_option("--seed", cli.seed, "Override config seed")
            ->each([&cli](const std::string&) { cli.seed_set = true; });
        cmd->add_option("--draws", cli.draws, "Override Monte Carlo draw count");
        cmd->add_option("--out", cli.out_dir, "Override output directory");
        cmd->add_option("--threads", cli.threads, "Worker threads (0 = all)");
    };
    add_run_options(app.add_subcommand("fit", "Fit the model set, emit training diagnostics"),
                    fit_cli);
    add_run_options(
        app.add_subcommand("evaluate", "Freeze, sample counterfactuals, emit lift tables"),
        eval_cli);
    add_run_options(app.add_subcommand("report", "Fit + evaluate, emit the full bundle"),
                    report_cli);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("simulate")) return run_simulate(sim_config, sim_out, sim_draws);
        if (app.got_subcommand("fit")) return run_fit_command(fit_cli, false);
        if (app.got_subcommand("evaluate")) return run_fit_command(eval_cli, true);
        if (app.got_subcommand("report")) return run_fit_command(report_cli, true);
    } catch (const config_error& e) {
        std::cerr << "error:config: " << e.what() << "\n";
        return 2;
    } catch (const argument_error& e) {
        std::cerr << "error:argument: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "error:data: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error:numeric: " << e.what() << "\n";
        return 4;
    } catch (const io_error& e) {
        std::cerr << "error:io: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << "\n";
        return 10;
    }
    return 0;
}
