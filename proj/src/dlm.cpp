#include "causalcast/dlm.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace causalcast {

void ModelSpec::validate() const {
    if (p == 0 || q == 0) throw argument_error("ModelSpec: p and q must be positive");
    if (!(delta > 0.0 && delta <= 1.0))
        throw argument_error("ModelSpec: delta must be in (0, 1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw argument_error("ModelSpec: beta must be in (0, 1]");
    prior.validate();
    if (prior.num_predictors() != p || prior.num_series() != q)
        throw argument_error("ModelSpec: prior dimensions differ from (p, q)");
    if (G && (G->rows() != p || G->cols() != p))
        throw argument_error("ModelSpec: G must be p x p");
}

double FilterTrajectory::total_loglik() const {
    return std::accumulate(loglik.begin(), loglik.end(), 0.0);
}

FilterState evolve(const FilterState& state, const ModelSpec& spec) {
    if (state.phase != Phase::posterior)
        throw argument_error("evolve: state must be posterior-phase");
    const NIWParams& post = state.params;
    const std::size_t q = post.num_series();

    const double n_evolved = spec.beta * post.n;
    if (!(n_evolved > static_cast<double>(q) - 1.0))
        throw numeric_error(
            "evolve: improper prior at step " + std::to_string(state.t) + ": evolved df " +
            std::to_string(n_evolved) + " <= q - 1 = " + std::to_string(q - 1) +
            "; increase beta, delta, or the prior df n0");

    Matrix a;
    Matrix r_mat;
    if (spec.G) {
        a = *spec.G * post.M;
        r_mat = symmetrized((*spec.G * post.C.mat() * spec.G->transpose()).scaled(1.0 / spec.delta));
    } else {
        a = post.M;
        r_mat = post.C.mat().scaled(1.0 / spec.delta);
    }

    NIWParams prior;
    prior.M = std::move(a);
    prior.C = spec.G ? SpdMatrix(std::move(r_mat), "R")
                     : SpdMatrix::scaled(post.C, 1.0 / spec.delta);
    prior.n = n_evolved;
    prior.D = SpdMatrix::scaled(post.D, spec.beta);
    return FilterState{state.t, std::move(prior), Phase::prior};
}

MultivariateT forecast_one_step(const FilterState& prior, const Vector& F,
                                const ModelSpec& spec) {
    if (prior.phase != Phase::prior)
        throw argument_error("forecast_one_step: state must be prior-phase");
    const NIWParams& pr = prior.params;
    if (F.size() != pr.num_predictors())
        throw argument_error("forecast_one_step: F length differs from p");
    (void)spec;

    const std::size_t q = pr.num_series();
    Vector f(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < F.size(); ++i) acc += pr.M(i, j) * F[i];
        f[j] = acc;
    }
    const double qs = quad_form(pr.C.mat(), F) + kObsScale;
    MultivariateT out;
    out.df = pr.n;
    out.location = std::move(f);
    out.scale = SpdMatrix::scaled(pr.D, qs / pr.n);
    return out;
}

FilterState update(const FilterState& prior, const Vector& F, const Vector& y,
                   const ModelSpec& spec) {
    if (prior.phase != Phase::prior)
        throw argument_error("update: state must be prior-phase");
    const NIWParams& pr = prior.params;
    const std::size_t p = pr.num_predictors();
    const std::size_t q = pr.num_series();
    if (F.size() != p) throw argument_error("update: F length differs from p");
    if (y.size() != q) throw argument_error("update: y length differs from q");
    for (double v : y)
        if (!std::isfinite(v))
            throw data_error("update: non-finite observation at step " +
                             std::to_string(prior.t));
    (void)spec;

    const Matrix& r = pr.C.mat();
    const double qs = quad_form(r, F) + kObsScale;
    Vector adaptive = r * F;
    for (double& v : adaptive) v /= qs;

    Vector f(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p; ++i) acc += pr.M(i, j) * F[i];
        f[j] = acc;
    }
    Vector e(q);
    for (std::size_t j = 0; j < q; ++j) e[j] = y[j] - f[j];

    NIWParams post;
    post.M = pr.M + outer(adaptive, e);
    Matrix c_mat = r - outer(adaptive, adaptive).scaled(qs);
    post.C = SpdMatrix(symmetrized(c_mat), "C");
    post.n = pr.n + 1.0;
    Matrix d_mat = pr.D.mat() + outer(e, e).scaled(1.0 / qs);
    post.D = SpdMatrix(symmetrized(d_mat), "D");
    return FilterState{prior.t + 1, std::move(post), Phase::posterior};
}

FilterTrajectory filter_run(const Matrix& panel, const Matrix& regressors,
                            const ModelSpec& spec) {
    spec.validate();
    const std::size_t T = panel.rows();
    if (T == 0) throw argument_error("filter_run: empty panel");
    if (panel.cols() != spec.q) throw argument_error("filter_run: panel columns differ from q");
    if (regressors.rows() != T)
        throw argument_error("filter_run: regressor rows differ from panel rows");
    if (regressors.cols() != spec.p)
        throw argument_error("filter_run: regressor columns differ from p");
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < spec.q; ++j)
            if (!std::isfinite(panel(t, j)))
                throw data_error("filter_run: missing or non-finite value at time " +
                                 std::to_string(t) + ", series " + std::to_string(j));

    FilterTrajectory traj;
    traj.states.reserve(T);
    traj.loglik.reserve(T);
    traj.forecasts.reserve(T);

    FilterState state{0, spec.prior, Phase::posterior};
    for (std::size_t t = 0; t < T; ++t) {
        try {
            state.t = t;
            FilterState prior = evolve(state, spec);
            MultivariateT forecast = forecast_one_step(prior, regressors.row(t), spec);
            traj.loglik.push_back(mvt_log_density(forecast, panel.row(t)));
            traj.forecasts.push_back(std::move(forecast));
            state = update(prior, regressors.row(t), panel.row(t), spec);
            traj.states.push_back(state);
        } catch (const numeric_error& e) {
            throw numeric_error("filter_run at time " + std::to_string(t) + ": " + e.what());
        } catch (const argument_error& e) {
            throw argument_error("filter_run at time " + std::to_string(t) + ": " + e.what());
        }
    }
    return traj;
}

}  // namespace causalcast
