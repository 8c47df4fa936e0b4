#include "causalcast/pipeline.hpp"

#include <algorithm>

#include "causalcast/rng.hpp"

namespace causalcast {

namespace {

// Seed tags for the pipeline stages.
constexpr std::uint64_t kPathTag = 0x70617468;   // per-model path sampling, + model index
constexpr std::uint64_t kMixTag = 0x6d6978;      // BMA mixture
constexpr std::uint64_t kPermTag = 0x7065726d;   // independence permutations, + block index

}  // namespace

FitResult run_fit(Study study, const RunConfig& config) {
    study.design.validate();
    const std::size_t T = study.design.train_len;
    const std::size_t rows = T + study.design.post_len;
    if (study.panel.treated.rows() != rows)
        throw argument_error("run_fit: panel rows differ from study windows");

    FitResult fit;
    ControlPanel controls;
    controls.values = study.panel.controls;
    controls.unit_ids = study.panel.control_ids;
    controls.train_len = T;

    std::size_t p_max = 0;
    for (std::size_t pc : config.pc_counts) p_max = std::max(p_max, pc);
    if (p_max == 0) throw config_error("run_fit: pc_counts must be positive");

    PcaOptions pca_opts;
    pca_opts.centering = config.pca_centering;
    pca_opts.standardize = config.pca_standardize;
    fit.basis = compute_pc_basis(controls, p_max, pca_opts);

    ModelSetConfig ms;
    ms.pc_counts = config.pc_counts;
    ms.discount_grid = config.discount_grid;
    ms.recipe = config.recipe;
    ms.init_window = config.init_weeks;
    fit.runs = run_model_set(study.panel.treated.rows_slice(0, T), fit.basis, ms,
                             config.threads);

    std::vector<FilterTrajectory> trajectories;
    trajectories.reserve(fit.runs.size());
    for (const auto& run : fit.runs) trajectories.push_back(run.trajectory);
    const Vector uniform(fit.runs.size(), 1.0 / static_cast<double>(fit.runs.size()));
    fit.weights = cumulative_weights(trajectories, uniform);
    fit.final_weights = fit.weights.final_weights();

    fit.scored_dates.assign(study.panel.dates.begin() + config.init_weeks,
                            study.panel.dates.begin() + T);
    fit.study = std::move(study);
    return fit;
}

EvalResult run_evaluate(const FitResult& fit, const RunConfig& config) {
    const StudyDesign& design = fit.study.design;
    const std::size_t T = design.train_len;
    const std::size_t k = design.post_len;

    EvalResult eval;
    eval.lift_window =
        config.lift_window_full_post ? design.full_post_window() : design.evaluation_window();
    const Matrix observed_post = fit.study.panel.treated.rows_slice(T, T + k);

    eval.per_model.reserve(fit.runs.size());
    for (std::size_t m = 0; m < fit.runs.size(); ++m) {
        const ModelRun& run = fit.runs[m];
        const Matrix f_post =
            build_regressors(fit.basis, run.candidate.pc_count).rows_slice(T, T + k);
        CounterfactualDraws draws =
            sample_paths(run.trajectory.states.back(), f_post, run.spec, config.draws,
                         derive_seed(config.seed, kPathTag + m), config.threads);
        draws.model_id = run.candidate.label();
        eval.per_model.push_back(std::move(draws));
    }
    eval.mixed = model_averaged_draws(eval.per_model, fit.final_weights, config.draws,
                                      derive_seed(config.seed, kMixTag));

    eval.per_model_lift.reserve(eval.per_model.size());
    for (std::size_t m = 0; m < eval.per_model.size(); ++m)
        eval.per_model_lift.push_back(summarize_lift(eval.per_model[m], observed_post,
                                                     eval.lift_window,
                                                     derive_seed(config.seed, kPermTag + m),
                                                     config.lift_form));
    eval.mixed_lift = summarize_lift(eval.mixed, observed_post, eval.lift_window,
                                     derive_seed(config.seed, kPermTag + eval.per_model.size()),
                                     config.lift_form);
    eval.correlation = counterfactual_correlation(eval.mixed, eval.lift_window);
    return eval;
}

ReportBundle make_report_bundle(const FitResult& fit, const EvalResult* eval,
                                const RunConfig& config) {
    ReportBundle bundle;
    bundle.config = config;
    for (const auto& run : fit.runs) bundle.model_labels.push_back(run.candidate.label());
    bundle.scored_dates = fit.scored_dates;

    const std::size_t steps = fit.weights.weights.rows();
    bundle.loglik = Matrix(steps, fit.runs.size());
    for (std::size_t m = 0; m < fit.runs.size(); ++m)
        for (std::size_t t = 0; t < steps; ++t)
            bundle.loglik(t, m) = fit.runs[m].trajectory.loglik[t];
    bundle.bma_weights = fit.weights.weights;

    if (eval) {
        bundle.has_evaluation = true;
        bundle.lift_row_labels = fit.study.design.treated_ids;
        bundle.lift_row_labels.push_back("aggregate_multivariate");
        bundle.lift_row_labels.push_back("aggregate_independent");
        const auto block_of = [](const LiftSummary& s) {
            std::vector<QuantileSummary> block = s.per_unit;
            block.push_back(s.aggregate_multivariate);
            block.push_back(s.aggregate_independent);
            return block;
        };
        for (std::size_t m = 0; m < eval->per_model.size(); ++m) {
            bundle.lift_model_ids.push_back(eval->per_model[m].model_id);
            bundle.lift_blocks.push_back(block_of(eval->per_model_lift[m]));
            bundle.lift_excluded.push_back(eval->per_model_lift[m].excluded_draws);
        }
        bundle.lift_model_ids.push_back("bma");
        bundle.lift_blocks.push_back(block_of(eval->mixed_lift));
        bundle.lift_excluded.push_back(eval->mixed_lift.excluded_draws);
        bundle.correlation_unit_ids = fit.study.design.treated_ids;
        bundle.correlation = eval->correlation.correlation;
    }
    return bundle;
}

}  // namespace causalcast
