#ifndef CAUSALCAST_MODEL_SET_HPP
#define CAUSALCAST_MODEL_SET_HPP

#include <string>
#include <utility>
#include <vector>

#include "causalcast/causal_types.hpp"
#include "causalcast/dlm.hpp"
#include "causalcast/pca.hpp"
#include "causalcast/prior.hpp"

namespace causalcast {

// One candidate MVDLM, indexed by its predictor count and discounts.
struct CandidateSpec {
    std::size_t pc_count = 1;
    double delta = 0.99;
    double beta = 0.95;

    std::string label() const;
};

struct ModelSetConfig {
    std::vector<std::size_t> pc_counts;
    // (delta, beta) pairs; a single pair unless a discount grid is wanted.
    std::vector<std::pair<double, double>> discount_grid = {{0.99, 0.95}};
    PriorRecipe recipe;
    std::size_t init_window = 20;  // weeks feeding the prior, excluded from scoring

    std::vector<CandidateSpec> expand() const;
};

struct ModelRun {
    CandidateSpec candidate;
    ModelSpec spec;
    FilterTrajectory trajectory;  // over the scored window [init_window, T)
};

// Fit every candidate on the training panel. Candidates are independent,
// so they run in parallel; results are bit-identical for any thread count.
// treated_train is the full T x q training window; the first
// config.init_window rows feed the prior recipe and are not scored.
std::vector<ModelRun> run_model_set(const Matrix& treated_train, const PcBasis& basis,
                                    const ModelSetConfig& config, int threads = 0);

// Sequential model probabilities: weight(t, i) proportional to
// prior_i * exp(sum_{s<=t} loglik_i[s]), computed with log-sum-exp.
// Every row sums to 1 within 1e-12.
struct BmaWeights {
    Matrix weights;  // scored steps x models

    Vector final_weights() const;
};

BmaWeights cumulative_weights(const std::vector<FilterTrajectory>& trajectories,
                              const Vector& prior_weights);

// Mixture combination of per-model counterfactual draws: each output draw
// picks a model by final_weights, then a uniformly chosen draw from that
// model's set. Deterministic given the seed; preserves multimodality.
CounterfactualDraws model_averaged_draws(const std::vector<CounterfactualDraws>& per_model,
                                         const Vector& final_weights, int total,
                                         std::uint64_t seed);

}  // namespace causalcast

#endif
