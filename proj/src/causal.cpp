#include "causalcast/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "causalcast/rng.hpp"

namespace causalcast {

std::vector<std::size_t> StudyDesign::evaluation_window() const {
    std::vector<std::size_t> w;
    for (std::size_t t = transition_len; t < post_len; ++t) w.push_back(t);
    return w;
}

std::vector<std::size_t> StudyDesign::full_post_window() const {
    std::vector<std::size_t> w;
    for (std::size_t t = 0; t < post_len; ++t) w.push_back(t);
    return w;
}

void StudyDesign::validate() const {
    if (train_len == 0) throw argument_error("StudyDesign: empty training window");
    if (post_len <= transition_len)
        throw argument_error("StudyDesign: evaluation window is empty (k must exceed m)");
}

void CounterfactualDraws::validate() const {
    if (num_draws < 1) throw argument_error("CounterfactualDraws: need at least one draw");
    if (values.size() != num_draws * horizon * num_series)
        throw argument_error("CounterfactualDraws: tensor size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw numeric_error("CounterfactualDraws: non-finite entry");
}

namespace {

void sample_one_path(const FilterState& posterior, const Matrix& regressors_post,
                     const ModelSpec& spec, std::uint64_t seed, std::size_t s,
                     CounterfactualDraws& out) {
    Rng rng(seed, s);
    FilterState state = posterior;
    const std::size_t horizon = regressors_post.rows();
    for (std::size_t t = 0; t < horizon; ++t) {
        state.t = t;
        FilterState prior;
        try {
            prior = evolve(state, spec);
        } catch (const numeric_error& e) {
            throw numeric_error("sample_paths: df exhausted at post step " +
                                std::to_string(t) + ": " + e.what());
        }
        const Vector f = regressors_post.row(t);
        const MultivariateT forecast = forecast_one_step(prior, f, spec);
        const Vector y = mvt_sample_one(forecast, rng);
        for (std::size_t j = 0; j < spec.q; ++j) out.at(s, t, j) = y[j];
        state = update(prior, f, y, spec);
    }
}

}  // namespace

CounterfactualDraws sample_paths_reference(const FilterState& posterior_at_end,
                                           const Matrix& regressors_post,
                                           const ModelSpec& spec, int num_draws,
                                           std::uint64_t seed) {
    if (posterior_at_end.phase != Phase::posterior)
        throw argument_error("sample_paths: state must be posterior-phase");
    if (num_draws < 1) throw argument_error("sample_paths: num_draws must be >= 1");
    if (regressors_post.rows() == 0) throw argument_error("sample_paths: empty horizon");
    if (regressors_post.cols() != spec.p)
        throw argument_error("sample_paths: regressor columns differ from p");

    CounterfactualDraws out;
    out.num_draws = static_cast<std::size_t>(num_draws);
    out.horizon = regressors_post.rows();
    out.num_series = spec.q;
    out.seed = seed;
    out.values.resize(out.num_draws * out.horizon * out.num_series);
    for (std::size_t s = 0; s < out.num_draws; ++s)
        sample_one_path(posterior_at_end, regressors_post, spec, seed, s, out);
    return out;
}

CounterfactualDraws sample_paths(const FilterState& posterior_at_end,
                                 const Matrix& regressors_post, const ModelSpec& spec,
                                 int num_draws, std::uint64_t seed, int threads) {
    if (posterior_at_end.phase != Phase::posterior)
        throw argument_error("sample_paths: state must be posterior-phase");
    if (num_draws < 1) throw argument_error("sample_paths: num_draws must be >= 1");
    if (regressors_post.rows() == 0) throw argument_error("sample_paths: empty horizon");
    if (regressors_post.cols() != spec.p)
        throw argument_error("sample_paths: regressor columns differ from p");

    CounterfactualDraws out;
    out.num_draws = static_cast<std::size_t>(num_draws);
    out.horizon = regressors_post.rows();
    out.num_series = spec.q;
    out.seed = seed;
    out.values.resize(out.num_draws * out.horizon * out.num_series);

    const int n = num_draws;
    std::string failure;
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(team) schedule(static)
#else
    (void)threads;
#endif
    for (int s = 0; s < n; ++s) {
        try {
            sample_one_path(posterior_at_end, regressors_post, spec, seed,
                            static_cast<std::size_t>(s), out);
        } catch (const error& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (failure.empty()) failure = e.what();
        }
    }
    if (!failure.empty()) throw numeric_error(failure);
    return out;
}

LiftDraws percent_lift_per_unit(const CounterfactualDraws& draws, const Matrix& observed,
                                const std::vector<std::size_t>& window, LiftForm form) {
    draws.validate();
    const std::size_t q = draws.num_series;
    if (observed.rows() != draws.horizon || observed.cols() != q)
        throw argument_error("percent_lift: observed shape differs from draws");
    if (window.empty()) throw argument_error("percent_lift: empty window");
    for (std::size_t t : window)
        if (t >= draws.horizon)
            throw argument_error("percent_lift: window index " + std::to_string(t) +
                                 " outside the post period");

    Vector obs_total(q, 0.0);
    for (std::size_t t : window)
        for (std::size_t j = 0; j < q; ++j) obs_total[j] += observed(t, j);

    std::vector<Vector> kept;
    kept.reserve(draws.num_draws);
    std::size_t excluded = 0;
    Vector lift(q);
    for (std::size_t s = 0; s < draws.num_draws; ++s) {
        bool ok = true;
        if (form == LiftForm::total) {
            for (std::size_t j = 0; j < q; ++j) {
                double den = 0.0;
                for (std::size_t t : window) den += draws.at(s, t, j);
                if (!(den > 0.0)) {
                    ok = false;
                    break;
                }
                lift[j] = 100.0 * (obs_total[j] - den) / den;
            }
        } else {
            for (std::size_t j = 0; j < q; ++j) {
                double acc = 0.0;
                for (std::size_t t : window) {
                    const double den = draws.at(s, t, j);
                    if (!(den > 0.0)) {
                        ok = false;
                        break;
                    }
                    acc += 100.0 * (observed(t, j) - den) / den;
                }
                if (!ok) break;
                lift[j] = acc / static_cast<double>(window.size());
            }
        }
        if (ok)
            kept.push_back(lift);
        else
            ++excluded;
    }
    if (kept.empty())
        throw numeric_error("percent_lift: every draw had a nonpositive counterfactual total");

    LiftDraws out;
    out.excluded = excluded;
    out.lifts = Matrix(kept.size(), q);
    for (std::size_t s = 0; s < kept.size(); ++s)
        for (std::size_t j = 0; j < q; ++j) out.lifts(s, j) = kept[s][j];
    return out;
}

Vector aggregate_lift_draws(const LiftDraws& lift, AggregationMode mode,
                            std::uint64_t seed) {
    const std::size_t s_kept = lift.lifts.rows();
    const std::size_t q = lift.lifts.cols();
    Matrix work = lift.lifts;
    if (mode == AggregationMode::independent) {
        // Fisher-Yates per unit with a unit-specific stream.
        for (std::size_t j = 0; j < q; ++j) {
            Rng rng(seed, j);
            for (std::size_t i = s_kept; i-- > 1;) {
                const std::size_t pick =
                    std::min(static_cast<std::size_t>(rng.uniform() * (i + 1)),
                             i);
                std::swap(work(i, j), work(pick, j));
            }
        }
    }
    Vector agg(s_kept, 0.0);
    for (std::size_t s = 0; s < s_kept; ++s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < q; ++j) acc += work(s, j);
        agg[s] = acc / static_cast<double>(q);
    }
    return agg;
}

Vector percent_lift_aggregate(const CounterfactualDraws& draws, const Matrix& observed,
                              const std::vector<std::size_t>& window, AggregationMode mode,
                              std::uint64_t seed, LiftForm form) {
    return aggregate_lift_draws(percent_lift_per_unit(draws, observed, window, form), mode,
                                seed);
}

CorrelationResult counterfactual_correlation(const CounterfactualDraws& draws,
                                             const std::vector<std::size_t>& window) {
    draws.validate();
    if (draws.num_draws < 2)
        throw argument_error("counterfactual_correlation: need at least two draws");
    if (window.empty()) throw argument_error("counterfactual_correlation: empty window");
    for (std::size_t t : window)
        if (t >= draws.horizon)
            throw argument_error("counterfactual_correlation: window index out of range");

    const std::size_t q = draws.num_series;
    const std::size_t s_total = draws.num_draws;
    Matrix totals(s_total, q);
    for (std::size_t s = 0; s < s_total; ++s)
        for (std::size_t j = 0; j < q; ++j) {
            double acc = 0.0;
            for (std::size_t t : window) acc += draws.at(s, t, j);
            totals(s, j) = acc;
        }

    Vector mean(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t s = 0; s < s_total; ++s) mean[j] += totals(s, j);
        mean[j] /= static_cast<double>(s_total);
    }
    Vector sd(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        double acc = 0.0;
        for (std::size_t s = 0; s < s_total; ++s) {
            const double d = totals(s, j) - mean[j];
            acc += d * d;
        }
        sd[j] = std::sqrt(acc);
    }

    CorrelationResult out;
    out.correlation = Matrix(q, q);
    for (std::size_t i = 0; i < q; ++i) out.correlation(i, i) = 1.0;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j) {
            if (sd[i] == 0.0 || sd[j] == 0.0) {
                out.correlation(i, j) = out.correlation(j, i) =
                    std::numeric_limits<double>::quiet_NaN();
                out.undefined.emplace_back(i, j);
                continue;
            }
            double acc = 0.0;
            for (std::size_t s = 0; s < s_total; ++s)
                acc += (totals(s, i) - mean[i]) * (totals(s, j) - mean[j]);
            const double r = acc / (sd[i] * sd[j]);
            out.correlation(i, j) = out.correlation(j, i) = r;
        }
    return out;
}

QuantileSummary summarize(const Vector& draws) {
    if (draws.empty()) throw argument_error("summarize: no draws");
    Vector sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&](double p) {
        const double idx = p * static_cast<double>(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(idx);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double w = idx - static_cast<double>(lo);
        return (1.0 - w) * sorted[lo] + w * sorted[hi];
    };
    QuantileSummary s;
    s.q025 = quantile(0.025);
    s.median = quantile(0.5);
    s.q975 = quantile(0.975);
    double acc = 0.0;
    for (double v : sorted) acc += v;
    s.mean = acc / static_cast<double>(sorted.size());
    double var = 0.0;
    for (double v : sorted) var += (v - s.mean) * (v - s.mean);
    var /= std::max<std::size_t>(1, sorted.size() - 1);
    s.mc_se = std::sqrt(var / static_cast<double>(sorted.size()));
    return s;
}

LiftSummary summarize_lift(const CounterfactualDraws& draws, const Matrix& observed,
                           const std::vector<std::size_t>& window, std::uint64_t seed,
                           LiftForm form) {
    const LiftDraws lift = percent_lift_per_unit(draws, observed, window, form);
    LiftSummary out;
    out.window = window;
    out.excluded_draws = lift.excluded;
    const std::size_t q = lift.lifts.cols();
    out.per_unit.reserve(q);
    for (std::size_t j = 0; j < q; ++j) out.per_unit.push_back(summarize(lift.lifts.col(j)));
    out.aggregate_multivariate =
        summarize(aggregate_lift_draws(lift, AggregationMode::multivariate, seed));
    out.aggregate_independent =
        summarize(aggregate_lift_draws(lift, AggregationMode::independent, seed));
    return out;
}

}  // namespace causalcast
