#include "causalcast/simulate.hpp"

#include <cmath>
#include <string>

#include "causalcast/rng.hpp"

namespace causalcast {

void SimConfig::validate() const {
    if (q == 0 || c == 0 || T < 2 || k == 0)
        throw argument_error("SimConfig: dimensions must be positive (T >= 2)");
    if (m >= k) throw argument_error("SimConfig: need k > m (nonempty evaluation window)");
    if (n_factors == 0) throw argument_error("SimConfig: need at least one factor");
    if (!(std::abs(rho) < 1.0)) throw argument_error("SimConfig: |rho| must be < 1");
    if (!(effect_pct > -100.0)) throw argument_error("SimConfig: effect must exceed -100%");
    if (!effect_per_unit.empty() && effect_per_unit.size() != q)
        throw argument_error("SimConfig: effect_per_unit length differs from q");
    for (double e : effect_per_unit)
        if (!(e > -100.0)) throw argument_error("SimConfig: effect must exceed -100%");
    if (!(factor_ar > -1.0 && factor_ar < 1.0))
        throw argument_error("SimConfig: factor_ar must be in (-1, 1)");
}

SimOutput simulate_panel(const SimConfig& config) {
    config.validate();
    const std::size_t rows = config.T + config.k;
    const std::size_t nf = config.n_factors;

    // Stream layout: 0 factors, 1 control loadings/levels, 2 control noise,
    // 3 treated loadings/levels, 4 treated noise.
    Rng factor_rng(config.seed, 0);
    Matrix factors(rows, nf);
    for (std::size_t r = 0; r < nf; ++r) {
        const double sd = config.factor_sd / static_cast<double>(r + 1);
        const double innov = sd * std::sqrt(1.0 - config.factor_ar * config.factor_ar);
        double x = sd * factor_rng.normal();
        factors(0, r) = x;
        for (std::size_t t = 1; t < rows; ++t) {
            x = config.factor_ar * x + innov * factor_rng.normal();
            factors(t, r) = x;
        }
    }

    Rng control_param_rng(config.seed, 1);
    Vector control_level(config.c);
    Matrix control_loadings(config.c, nf);
    for (std::size_t i = 0; i < config.c; ++i) {
        control_level[i] = 400.0 + 800.0 * control_param_rng.uniform();
        control_loadings(i, 0) = 0.5 + control_param_rng.uniform();
        for (std::size_t r = 1; r < nf; ++r)
            control_loadings(i, r) = 2.0 * control_param_rng.uniform() - 1.0;
    }
    Rng control_noise_rng(config.seed, 2);
    Matrix controls(rows, config.c);
    for (std::size_t t = 0; t < rows; ++t)
        for (std::size_t i = 0; i < config.c; ++i) {
            double v = control_level[i];
            for (std::size_t r = 0; r < nf; ++r) v += control_loadings(i, r) * factors(t, r);
            controls(t, i) = v + config.control_noise_sd * control_noise_rng.normal();
        }

    Rng treated_param_rng(config.seed, 3);
    Vector treated_level(config.q);
    Matrix treated_loadings(config.q, nf);
    for (std::size_t j = 0; j < config.q; ++j) {
        treated_level[j] = 400.0 + 800.0 * treated_param_rng.uniform();
        treated_loadings(j, 0) = 0.5 + treated_param_rng.uniform();
        for (std::size_t r = 1; r < nf; ++r)
            treated_loadings(j, r) = 2.0 * treated_param_rng.uniform() - 1.0;
    }

    // Equicorrelated residuals via the Cholesky factor of
    // sigma^2 [(1 - rho) I + rho 11'], valid for rho > -1/(q-1).
    if (config.q > 1 && !(config.rho > -1.0 / static_cast<double>(config.q - 1)))
        throw argument_error("SimConfig: rho must exceed -1/(q-1) for a valid covariance");
    Matrix equicorr(config.q, config.q, config.rho);
    for (std::size_t j = 0; j < config.q; ++j) equicorr(j, j) = 1.0;
    const SpdMatrix resid_cov(
        equicorr.scaled(config.treated_noise_sd * config.treated_noise_sd),
        "treated residual covariance");
    const Matrix& resid_chol = resid_cov.chol_lower();

    Rng treated_noise_rng(config.seed, 4);
    Matrix counterfactual(rows, config.q);
    Vector z(config.q);
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t j = 0; j < config.q; ++j) z[j] = treated_noise_rng.normal();
        for (std::size_t j = 0; j < config.q; ++j) {
            double v = treated_level[j];
            for (std::size_t r = 0; r < nf; ++r) v += treated_loadings(j, r) * factors(t, r);
            for (std::size_t i = 0; i <= j; ++i) v += resid_chol(j, i) * z[i];
            counterfactual(t, j) = v;
        }
    }

    Vector effects(config.q, config.effect_pct);
    if (!config.effect_per_unit.empty()) effects = config.effect_per_unit;

    Matrix treated = counterfactual;
    const std::size_t eval_start = config.T + config.m;
    for (std::size_t t = eval_start; t < rows; ++t)
        for (std::size_t j = 0; j < config.q; ++j)
            treated(t, j) = counterfactual(t, j) * (1.0 + effects[j] / 100.0);

    SimOutput out;
    out.treated = std::move(treated);
    out.controls.values = std::move(controls);
    out.controls.train_len = config.T;
    out.controls.unit_ids.reserve(config.c);
    for (std::size_t i = 0; i < config.c; ++i)
        out.controls.unit_ids.push_back("C" + std::to_string(i + 1));
    out.truth.counterfactual = std::move(counterfactual);
    out.truth.true_lift_pct = std::move(effects);
    out.truth.factor_paths = std::move(factors);
    out.truth.treated_loadings = std::move(treated_loadings);
    out.truth.residual_sd = config.treated_noise_sd;
    out.truth.residual_rho = config.rho;
    return out;
}

}  // namespace causalcast
