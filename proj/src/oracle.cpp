#include "causalcast/oracle.hpp"

#include <cmath>
#include <string>

namespace causalcast {

NIWParams batch_regression_oracle(const Matrix& treated, const Matrix& regressors,
                                  const NIWParams& prior) {
    prior.validate();
    const std::size_t T = treated.rows();
    const std::size_t q = treated.cols();
    const std::size_t p = regressors.cols();
    if (regressors.rows() != T) throw argument_error("batch oracle: row counts differ");
    if (prior.num_predictors() != p || prior.num_series() != q)
        throw argument_error("batch oracle: prior dimensions differ");

    const Matrix c0_inv = prior.C.inverse();
    const Matrix xt = regressors.transpose();
    Matrix precision = symmetrized(c0_inv + xt * regressors);
    CholeskyResult ch = cholesky(precision);
    if (!ch.ok) throw numeric_error("batch oracle: singular system with improper prior");

    const Matrix rhs = c0_inv * prior.M + xt * treated;
    const Matrix m_post = chol_solve(ch.lower, rhs);
    const Matrix c_post = symmetrized(chol_inverse(ch.lower));

    // D_T = D0 + Y'Y + M0'C0^{-1}M0 - M_T' (C0^{-1} + X'X) M_T
    Matrix d_post = prior.D.mat() + treated.transpose() * treated +
                    prior.M.transpose() * c0_inv * prior.M -
                    m_post.transpose() * precision * m_post;

    NIWParams out;
    out.M = m_post;
    out.C = SpdMatrix(c_post, "batch oracle C");
    out.n = prior.n + static_cast<double>(T);
    out.D = SpdMatrix(symmetrized(d_post), "batch oracle D");
    return out;
}

std::vector<UnivariateDlmStep> univariate_dlm_oracle(const Vector& series,
                                                     const Matrix& regressors,
                                                     const UnivariateDlmPrior& prior,
                                                     double delta, double beta) {
    const std::size_t T = series.size();
    const std::size_t p = prior.m0.size();
    if (regressors.rows() != T || regressors.cols() != p)
        throw argument_error("univariate oracle: regressor shape mismatch");
    if (prior.c0.size() != p) throw argument_error("univariate oracle: C0 shape mismatch");
    if (!(prior.n0 > 0.0) || !(prior.d0 > 0.0))
        throw argument_error("univariate oracle: prior df and scale must be positive");
    if (!(delta > 0.0 && delta <= 1.0) || !(beta > 0.0 && beta <= 1.0))
        throw argument_error("univariate oracle: discounts must be in (0, 1]");

    Vector m = prior.m0;
    std::vector<std::vector<double>> c = prior.c0;
    double n = prior.n0;
    double d = prior.d0;
    constexpr double kHalfLogPi = 0.57236494292470008707171367567653;

    std::vector<UnivariateDlmStep> out;
    out.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        // evolve
        std::vector<std::vector<double>> r(p, std::vector<double>(p, 0.0));
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) r[i][j] = c[i][j] / delta;
        const double n_ev = beta * n;
        const double d_ev = beta * d;
        if (!(n_ev > 0.0))
            throw numeric_error("univariate oracle: improper prior at step " +
                                std::to_string(t));

        // forecast
        Vector fvec(p);
        for (std::size_t i = 0; i < p; ++i) fvec[i] = regressors(t, i);
        double f = 0.0;
        for (std::size_t i = 0; i < p; ++i) f += m[i] * fvec[i];
        Vector rf(p, 0.0);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) rf[i] += r[i][j] * fvec[j];
        double qs = 1.0;  // v = 1
        for (std::size_t i = 0; i < p; ++i) qs += fvec[i] * rf[i];
        const double scale = qs * d_ev / n_ev;

        // scalar t log density
        const double y = series[t];
        const double err = y - f;
        const double ll = std::lgamma(0.5 * (n_ev + 1.0)) - std::lgamma(0.5 * n_ev) -
                          0.5 * std::log(n_ev) - kHalfLogPi - 0.5 * std::log(scale) -
                          0.5 * (n_ev + 1.0) * std::log1p(err * err / (n_ev * scale));

        // update
        Vector adapt(p);
        for (std::size_t i = 0; i < p; ++i) adapt[i] = rf[i] / qs;
        for (std::size_t i = 0; i < p; ++i) m[i] += adapt[i] * err;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) c[i][j] = r[i][j] - adapt[i] * adapt[j] * qs;
        n = n_ev + 1.0;
        d = d_ev + err * err / qs;

        UnivariateDlmStep step;
        step.m = m;
        step.c = c;
        step.f = f;
        step.qs = qs;
        step.forecast_scale = scale;
        step.forecast_df = n_ev;
        step.n = n;
        step.d = d;
        step.loglik = ll;
        out.push_back(std::move(step));
    }
    return out;
}

}  // namespace causalcast
