#include "causalcast/model_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "causalcast/rng.hpp"

namespace causalcast {

std::string CandidateSpec::label() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "pc%zu_d%.4g_b%.4g", pc_count, delta, beta);
    return buf;
}

std::vector<CandidateSpec> ModelSetConfig::expand() const {
    if (pc_counts.empty()) throw argument_error("ModelSetConfig: empty candidate list");
    if (discount_grid.empty()) throw argument_error("ModelSetConfig: empty discount grid");
    std::vector<CandidateSpec> out;
    out.reserve(pc_counts.size() * discount_grid.size());
    for (const auto& [delta, beta] : discount_grid)
        for (std::size_t pc : pc_counts) out.push_back(CandidateSpec{pc, delta, beta});
    return out;
}

namespace {

ModelRun fit_candidate(const Matrix& treated_train, const PcBasis& basis,
                       const ModelSetConfig& config, const CandidateSpec& cand) {
    const std::size_t T = treated_train.rows();
    const std::size_t L = config.init_window;
    if (L < 2 || L >= T)
        throw argument_error("run_model_set: init_window must be in [2, T)");
    if (cand.pc_count < 1 || cand.pc_count > basis.max_components())
        throw argument_error("run_model_set: candidate pc count out of range for basis");

    const Matrix f_full = build_regressors(basis, cand.pc_count);
    const Matrix f_train = f_full.rows_slice(0, T);

    ModelRun run;
    run.candidate = cand;
    run.spec.p = cand.pc_count + 1;
    run.spec.q = treated_train.cols();
    run.spec.delta = cand.delta;
    run.spec.beta = cand.beta;
    run.spec.prior = prior_from_initial_window(treated_train.rows_slice(0, L),
                                               f_train.rows_slice(0, L), config.recipe);
    run.trajectory =
        filter_run(treated_train.rows_slice(L, T), f_train.rows_slice(L, T), run.spec);
    return run;
}

}  // namespace

std::vector<ModelRun> run_model_set(const Matrix& treated_train, const PcBasis& basis,
                                    const ModelSetConfig& config, int threads) {
    const std::vector<CandidateSpec> candidates = config.expand();
    const int n = static_cast<int>(candidates.size());
    std::vector<ModelRun> runs(candidates.size());
    std::vector<std::string> failures(candidates.size());

#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(team) schedule(dynamic)
#else
    (void)threads;
#endif
    for (int i = 0; i < n; ++i) {
        try {
            runs[i] = fit_candidate(treated_train, basis, config, candidates[i]);
        } catch (const error& e) {
            failures[i] = e.what();
        }
    }
    for (int i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw numeric_error("model " + candidates[i].label() + ": " + failures[i]);
    return runs;
}

Vector BmaWeights::final_weights() const {
    if (weights.rows() == 0) throw argument_error("BmaWeights: empty");
    return weights.row(weights.rows() - 1);
}

BmaWeights cumulative_weights(const std::vector<FilterTrajectory>& trajectories,
                              const Vector& prior_weights) {
    const std::size_t n_models = trajectories.size();
    if (n_models == 0) throw argument_error("cumulative_weights: no trajectories");
    if (prior_weights.size() != n_models)
        throw argument_error("cumulative_weights: prior length differs from model count");
    double prior_sum = 0.0;
    for (double w : prior_weights) {
        if (w < 0.0) throw argument_error("cumulative_weights: negative prior weight");
        prior_sum += w;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw argument_error("cumulative_weights: prior weights must sum to 1");
    const std::size_t T = trajectories.front().loglik.size();
    for (const auto& traj : trajectories)
        if (traj.loglik.size() != T)
            throw argument_error("cumulative_weights: trajectory lengths differ");

    BmaWeights out;
    out.weights = Matrix(T, n_models);
    Vector cum(n_models, 0.0);
    Vector logw(n_models);
    for (std::size_t t = 0; t < T; ++t) {
        double lse_max = -HUGE_VAL;
        for (std::size_t i = 0; i < n_models; ++i) {
            cum[i] += trajectories[i].loglik[t];
            logw[i] = prior_weights[i] > 0.0 ? std::log(prior_weights[i]) + cum[i] : -HUGE_VAL;
            lse_max = std::max(lse_max, logw[i]);
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n_models; ++i) total += std::exp(logw[i] - lse_max);
        for (std::size_t i = 0; i < n_models; ++i)
            out.weights(t, i) = std::exp(logw[i] - lse_max) / total;
    }
    return out;
}

CounterfactualDraws model_averaged_draws(const std::vector<CounterfactualDraws>& per_model,
                                         const Vector& final_weights, int total,
                                         std::uint64_t seed) {
    if (per_model.empty()) throw argument_error("model_averaged_draws: no models");
    if (final_weights.size() != per_model.size())
        throw argument_error("model_averaged_draws: weight length differs from model count");
    if (total < 1) throw argument_error("model_averaged_draws: total must be >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < final_weights.size(); ++i) {
        const double w = final_weights[i];
        if (w < 0.0) throw argument_error("model_averaged_draws: negative weight");
        if (w > 0.0 && per_model[i].num_draws == 0)
            throw argument_error("model_averaged_draws: empty draw set for weighted model " +
                                 per_model[i].model_id);
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw argument_error("model_averaged_draws: weights must sum to 1");
    const std::size_t k = per_model.front().horizon;
    const std::size_t q = per_model.front().num_series;
    for (const auto& d : per_model)
        if (d.horizon != k || d.num_series != q)
            throw argument_error("model_averaged_draws: draw shapes differ across models");

    CounterfactualDraws out;
    out.num_draws = static_cast<std::size_t>(total);
    out.horizon = k;
    out.num_series = q;
    out.seed = seed;
    out.model_id = "bma";
    out.values.resize(out.num_draws * k * q);
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < final_weights.size(); ++i)
        if (final_weights[i] > 0.0) last_positive = i;
    for (std::size_t s = 0; s < out.num_draws; ++s) {
        Rng rng(seed, s);
        const double u = rng.uniform();
        std::size_t pick = last_positive;
        double acc = 0.0;
        for (std::size_t i = 0; i < per_model.size(); ++i) {
            acc += final_weights[i] / sum;
            if (u <= acc && final_weights[i] > 0.0) {
                pick = i;
                break;
            }
        }
        const CounterfactualDraws& src = per_model[pick];
        std::size_t idx =
            std::min(static_cast<std::size_t>(rng.uniform() * src.num_draws),
                     src.num_draws - 1);
        const double* from = &src.values[(idx * k) * q];
        double* to = &out.values[(s * k) * q];
        std::copy(from, from + k * q, to);
    }
    return out;
}

}  // namespace causalcast
