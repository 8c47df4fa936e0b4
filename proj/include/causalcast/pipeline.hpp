#ifndef CAUSALCAST_PIPELINE_HPP
#define CAUSALCAST_PIPELINE_HPP

#include <vector>

#include "causalcast/io.hpp"
#include "causalcast/model_set.hpp"

namespace causalcast {

// End-to-end orchestration shared by the CLI and the test suites:
// fit = PC basis + candidate filters + BMA weights over the scored
// training window; evaluate = freeze at T, sample counterfactual paths
// per model, mix by the final (training-period) BMA weights, summarize
// lift and correlation. Everything downstream of (inputs, seed) is
// deterministic and independent of the thread count.
struct FitResult {
    Study study;
    PcBasis basis;
    std::vector<ModelRun> runs;
    BmaWeights weights;
    Vector final_weights;
    std::vector<std::string> scored_dates;
};

FitResult run_fit(Study study, const RunConfig& config);

struct EvalResult {
    std::vector<CounterfactualDraws> per_model;
    CounterfactualDraws mixed;
    std::vector<LiftSummary> per_model_lift;
    LiftSummary mixed_lift;
    CorrelationResult correlation;
    std::vector<std::size_t> lift_window;  // post-period indices
};

EvalResult run_evaluate(const FitResult& fit, const RunConfig& config);

ReportBundle make_report_bundle(const FitResult& fit, const EvalResult* eval,
                                const RunConfig& config);

}  // namespace causalcast

#endif
