#ifndef CAUSALCAST_PRIOR_HPP
#define CAUSALCAST_PRIOR_HPP

#include "causalcast/distributions.hpp"
#include "causalcast/linalg.hpp"

namespace causalcast {

// Empirical-Bayes prior built from an initial window of L weeks that is
// then excluded from the scored training likelihoods:
//   M0 = least squares of the initial window
//   C0 = c0 * (X'X)^{-1}
//   D0 = (n0 - 2) * Sigma_hat, so E[Sigma_0] = Sigma_hat, with n0 = q + df
//
// Sigma_hat is the residual covariance with a relative ridge: when the
// window is too short to identify a full-rank q x q covariance (rank
// L - p < q, e.g. L=20 weeks for q=16 units), the raw estimate is
// singular and the NIW improper. The ridge size is ridge_frac times the
// mean residual variance, floored at epsilon for perfectly linear windows.
struct PriorRecipe {
    double c0 = 1.0;          // state scale on (X'X)^{-1}
    double df = 3.0;          // n0 = q + df
    double ridge_frac = 0.1;  // relative ridge on the residual covariance
    double epsilon = 1e-8;    // absolute floor for degenerate residuals
};

NIWParams prior_from_initial_window(const Matrix& treated_init,
                                    const Matrix& regressors_init,
                                    const PriorRecipe& recipe = {});

}  // namespace causalcast

#endif
