#ifndef CAUSALCAST_ORACLE_HPP
#define CAUSALCAST_ORACLE_HPP

#include <vector>

#include "causalcast/distributions.hpp"
#include "causalcast/linalg.hpp"

namespace causalcast {

// Cross-check implementations that deliberately share no code path with
// the sequential filter. The batch oracle solves the static (delta =
// beta = 1) conjugate regression by normal equations; the univariate
// oracle reimplements the q = 1 discount recursions with plain scalar
// loops. Tests compare the filter against these, so keep them dumb.

// Exact posterior of Y = X Theta + E, rows iid N(0, Sigma), under the
// NIW prior, computed without any sequential recursion:
//   C_T = (C0^{-1} + X'X)^{-1}
//   M_T = C_T (C0^{-1} M0 + X'Y)
//   n_T = n0 + T
//   D_T = D0 + Y'Y + M0'C0^{-1}M0 - M_T'C_T^{-1}M_T
NIWParams batch_regression_oracle(const Matrix& treated, const Matrix& regressors,
                                  const NIWParams& prior);

struct UnivariateDlmPrior {
    Vector m0;                             // length p
    std::vector<std::vector<double>> c0;   // p x p
    double n0 = 0.0;
    double d0 = 0.0;
};

struct UnivariateDlmStep {
    Vector m;                             // posterior mean, length p
    std::vector<std::vector<double>> c;   // posterior p x p
    double f = 0.0;                       // forecast location
    double qs = 0.0;                      // F'RF + v
    double forecast_scale = 0.0;          // qs * S
    double forecast_df = 0.0;             // evolved df
    double n = 0.0;                       // posterior df
    double d = 0.0;                       // posterior IW scale
    double loglik = 0.0;                  // scalar t log density of y
};

std::vector<UnivariateDlmStep> univariate_dlm_oracle(const Vector& series,
                                                     const Matrix& regressors,
                                                     const UnivariateDlmPrior& prior,
                                                     double delta, double beta);

}  // namespace causalcast

#endif
