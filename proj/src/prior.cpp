#include "causalcast/prior.hpp"

#include <cmath>
#include <string>

namespace causalcast {

NIWParams prior_from_initial_window(const Matrix& treated_init,
                                    const Matrix& regressors_init,
                                    const PriorRecipe& recipe) {
    const std::size_t L = treated_init.rows();
    const std::size_t q = treated_init.cols();
    const std::size_t p = regressors_init.cols();
    if (regressors_init.rows() != L)
        throw argument_error("prior_from_initial_window: row counts differ");
    if (L < p + 1)
        throw data_error("prior_from_initial_window: initial window of " + std::to_string(L) +
                         " rows cannot fit " + std::to_string(p) + " predictors (need >= p+1)");
    if (!(recipe.c0 > 0.0) || !(recipe.df > 0.0) || !(recipe.epsilon > 0.0) ||
        recipe.ridge_frac < 0.0)
        throw argument_error("prior_from_initial_window: bad recipe constants");

    const Matrix xt = regressors_init.transpose();
    const Matrix xtx = symmetrized(xt * regressors_init);
    SpdMatrix gram(xtx, "initial-window X'X");
    const Matrix xty = xt * treated_init;
    const Matrix m0 = chol_solve(gram.chol_lower(), xty);

    // Residual covariance, dof-adjusted where possible.
    const Matrix resid = treated_init - regressors_init * m0;
    const double denom = static_cast<double>(L > p ? L - p : 1);
    Matrix sigma_hat = symmetrized(resid.transpose() * resid).scaled(1.0 / denom);

    double mean_var = 0.0;
    for (std::size_t j = 0; j < q; ++j) mean_var += sigma_hat(j, j);
    mean_var /= static_cast<double>(q);
    const double ridge = std::max(recipe.epsilon, recipe.ridge_frac * mean_var);
    for (std::size_t j = 0; j < q; ++j) sigma_hat(j, j) += ridge;

    const double n0 = static_cast<double>(q) + recipe.df;
    NIWParams prior;
    prior.M = m0;
    prior.C = SpdMatrix(symmetrized(gram.inverse()).scaled(recipe.c0), "C0");
    prior.n = n0;
    prior.D = SpdMatrix(sigma_hat.scaled(n0 - 2.0), "D0");
    prior.validate();
    return prior;
}

}  // namespace causalcast
