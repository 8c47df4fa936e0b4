#ifndef CAUSALCAST_DLM_HPP
#define CAUSALCAST_DLM_HPP

#include <optional>
#include <vector>

#include "causalcast/distributions.hpp"
#include "causalcast/linalg.hpp"

namespace causalcast {

// Multivariate dynamic linear model for q series sharing p predictors:
//
//   y_t' = F_t' Theta_t + nu_t',        nu_t ~ N(0, v Sigma_t)
//   Theta_t = G Theta_{t-1} + Omega_t,  Omega_t ~ N(0, W_t, Sigma_t)
//
// with conjugate NIW posteriors evolved by discounting. One filter step:
//
//   evolve:    a = G M,  R = G C G' / delta,  n~ = beta n,  D~ = beta D
//   forecast:  f = a'F,  qs = F'RF + v,  S = D~ / n~,  y ~ T_{n~}(f, qs S)
//   update:    A = RF/qs, e = y - f, M = a + Ae', C = R - AA'qs,
//              n = n~ + 1, D = D~ + ee'/qs
//
// The forecast df is the evolved prior df n~ (the main text's T_{n_t}
// refers to the time-t prior parameters, so the conventions agree). The
// df bookkeeping is dimension-free -- n~ = beta n for every q -- which is
// what makes the per-series marginals of this filter coincide exactly
// with q standalone univariate DLMs sharing the same prior columns.
struct ModelSpec {
    std::size_t p = 0;  // predictors, including the intercept
    std::size_t q = 0;  // treated series
    double delta = 0.99;
    double beta = 0.95;
    std::optional<Matrix> G;  // state evolution; identity when absent
    NIWParams prior;          // at t = 0

    void validate() const;
};

// Observational scale factor v_t, fixed at 1.
inline constexpr double kObsScale = 1.0;

enum class Phase { posterior, prior };

struct FilterState {
    // Number of observations absorbed so far. A prior-phase state with
    // index t is the one-step prior for observation t.
    std::size_t t = 0;
    NIWParams params;
    Phase phase = Phase::posterior;
};

struct FilterTrajectory {
    std::vector<FilterState> states;       // posterior after each observation
    std::vector<double> loglik;            // one-step log predictive densities
    std::vector<MultivariateT> forecasts;  // one-step forecasts

    double total_loglik() const;
};

FilterState evolve(const FilterState& state, const ModelSpec& spec);

MultivariateT forecast_one_step(const FilterState& prior, const Vector& F,
                                const ModelSpec& spec);

FilterState update(const FilterState& prior, const Vector& F, const Vector& y,
                   const ModelSpec& spec);

// Run evolve -> forecast -> score -> update over the rows of a T x q panel
// with T x p regressors. Missing (non-finite) values are rejected, not
// imputed; any step failure is rethrown with its time index attached.
FilterTrajectory filter_run(const Matrix& panel, const Matrix& regressors,
                            const ModelSpec& spec);

}  // namespace causalcast

#endif
