#ifndef CAUSALCAST_CAUSAL_HPP
#define CAUSALCAST_CAUSAL_HPP

#include <cstdint>
#include <vector>

#include "causalcast/causal_types.hpp"
#include "causalcast/dlm.hpp"

namespace causalcast {

// Freeze the filter at the end of training and simulate counterfactual
// paths over the post period by composition of one-step forecasts: per
// step, evolve, forecast, sample one outcome, update as if it had been
// observed. Draw s uses RNG stream s of `seed`, so the tensor is
// identical for any thread count. `threads` <= 0 means the OpenMP
// default team.
CounterfactualDraws sample_paths(const FilterState& posterior_at_end,
                                 const Matrix& regressors_post, const ModelSpec& spec,
                                 int num_draws, std::uint64_t seed, int threads = 0);

// Serial reference implementation, kept as the ground truth the parallel
// kernel is benchmarked and tested against.
CounterfactualDraws sample_paths_reference(const FilterState& posterior_at_end,
                                           const Matrix& regressors_post,
                                           const ModelSpec& spec, int num_draws,
                                           std::uint64_t seed);

enum class LiftForm {
    total,           // 100 * (sum obs - sum draw) / sum draw over the window
    weekly_average,  // mean over the window of the per-week percent lift
};

enum class AggregationMode { multivariate, independent };

// Per-draw, per-unit percent lift over a window of post-period indices.
// Joint draws where any unit's counterfactual total is <= 0 are dropped
// whole (they no longer define a percent), and counted.
struct LiftDraws {
    Matrix lifts;  // kept draws x q
    std::size_t excluded = 0;
};

LiftDraws percent_lift_per_unit(const CounterfactualDraws& draws, const Matrix& observed,
                                const std::vector<std::size_t>& window,
                                LiftForm form = LiftForm::total);

// Aggregate lift draws across units. Multivariate mode averages the q
// unit lifts inside each joint draw, keeping the learned dependence.
// Independent mode first shuffles each unit's draws with its own seeded
// permutation, which keeps every marginal and severs the coupling --
// exactly the aggregate a set of q independently fitted univariate DLMs
// would produce.
Vector aggregate_lift_draws(const LiftDraws& lift, AggregationMode mode,
                            std::uint64_t seed);

Vector percent_lift_aggregate(const CounterfactualDraws& draws, const Matrix& observed,
                              const std::vector<std::size_t>& window, AggregationMode mode,
                              std::uint64_t seed, LiftForm form = LiftForm::total);

// Pearson correlation of per-unit window totals across draws. Entries
// involving a zero-variance unit are NaN and listed in `undefined`.
struct CorrelationResult {
    Matrix correlation;  // q x q, unit diagonal
    std::vector<std::pair<std::size_t, std::size_t>> undefined;
};

CorrelationResult counterfactual_correlation(const CounterfactualDraws& draws,
                                             const std::vector<std::size_t>& window);

struct QuantileSummary {
    double q025 = 0.0;
    double median = 0.0;
    double q975 = 0.0;
    double mean = 0.0;
    double mc_se = 0.0;  // Monte Carlo standard error of the mean
};

QuantileSummary summarize(const Vector& draws);

struct LiftSummary {
    std::vector<QuantileSummary> per_unit;
    QuantileSummary aggregate_multivariate;
    QuantileSummary aggregate_independent;
    std::vector<std::size_t> window;
    std::size_t excluded_draws = 0;
};

LiftSummary summarize_lift(const CounterfactualDraws& draws, const Matrix& observed,
                           const std::vector<std::size_t>& window, std::uint64_t seed,
                           LiftForm form = LiftForm::total);

}  // namespace causalcast

#endif
