#include "causalcast/distributions.hpp"

#include <cmath>
#include <string>

namespace causalcast {

namespace {
constexpr double kLogPi = 1.1447298858494001741434273513531;
}

double mvt_log_density(const MultivariateT& dist, const Vector& y) {
    const std::size_t q = dist.dim();
    if (q == 0) throw argument_error("mvt_log_density: empty location");
    if (dist.scale.dim() != q)
        throw argument_error("mvt_log_density: scale dimension differs from location");
    if (y.size() != q) throw argument_error("mvt_log_density: y dimension differs");
    if (!(dist.df > 0.0)) throw argument_error("mvt_log_density: df must be positive");

    Vector delta(q);
    for (std::size_t i = 0; i < q; ++i) delta[i] = y[i] - dist.location[i];
    const Vector z = forward_substitute(dist.scale.chol_lower(), delta);
    const double maha = dot(z, z);
    const double nu = dist.df;
    const double qd = static_cast<double>(q);
    return std::lgamma(0.5 * (nu + qd)) - std::lgamma(0.5 * nu) -
           0.5 * qd * (std::log(nu) + kLogPi) - 0.5 * dist.scale.log_det() -
           0.5 * (nu + qd) * std::log1p(maha / nu);
}

Vector mvt_sample_one(const MultivariateT& dist, Rng& rng) {
    const std::size_t q = dist.dim();
    Vector z(q);
    for (std::size_t i = 0; i < q; ++i) z[i] = rng.normal();
    const double w = rng.chi_squared(dist.df);
    const double shrink = std::sqrt(dist.df / w);
    const Matrix& l = dist.scale.chol_lower();
    Vector y(q);
    for (std::size_t i = 0; i < q; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += l(i, k) * z[k];
        y[i] = dist.location[i] + shrink * acc;
    }
    return y;
}

Matrix mvt_sample(const MultivariateT& dist, int count, std::uint64_t seed) {
    if (count < 1) throw argument_error("mvt_sample: count must be >= 1");
    if (!(dist.df > 0.0)) throw argument_error("mvt_sample: df must be positive");
    if (dist.scale.dim() != dist.dim())
        throw argument_error("mvt_sample: scale dimension differs from location");
    Matrix out(static_cast<std::size_t>(count), dist.dim());
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        Vector y = mvt_sample_one(dist, rng);
        for (std::size_t j = 0; j < dist.dim(); ++j) out(i, j) = y[j];
    }
    return out;
}

void NIWParams::validate() const {
    const std::size_t p = num_predictors();
    const std::size_t q = num_series();
    if (p == 0 || q == 0) throw argument_error("NIWParams: empty M");
    if (C.dim() != p) throw argument_error("NIWParams: C dimension differs from rows of M");
    if (D.dim() != q) throw argument_error("NIWParams: D dimension differs from cols of M");
    if (!(n > static_cast<double>(q) - 1.0))
        throw numeric_error("NIWParams: improper distribution, n = " + std::to_string(n) +
                            " <= q - 1 = " + std::to_string(q - 1));
}

NiwDraw niw_sample_one(const NIWParams& params, Rng& rng) {
    const std::size_t p = params.num_predictors();
    const std::size_t q = params.num_series();
    const double wishart_dof = params.n + static_cast<double>(q) - 1.0;

    // Bartlett: Sigma^{-1} = A T T' A' with A = L_D^{-T}. Equivalently
    // Sigma = (L_D K')(L_D K')' with K = T^{-1}, so only triangular work.
    Matrix t(q, q);
    for (std::size_t i = 0; i < q; ++i) {
        t(i, i) = std::sqrt(rng.chi_squared(wishart_dof - static_cast<double>(i)));
        for (std::size_t j = 0; j < i; ++j) t(i, j) = rng.normal();
    }
    // Invert the lower triangle T in place into K.
    Matrix k(q, q);
    for (std::size_t i = 0; i < q; ++i) {
        k(i, i) = 1.0 / t(i, i);
        for (std::size_t j = 0; j < i; ++j) {
            double acc = 0.0;
            for (std::size_t m = j; m < i; ++m) acc += t(i, m) * k(m, j);
            k(i, j) = -acc / t(i, i);
        }
    }
    const Matrix& ld = params.D.chol_lower();
    Matrix b(q, q);  // B = L_D K', Sigma = B B'
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m <= i; ++m) acc += ld(i, m) * k(j, m);
            b(i, j) = acc;
        }
    Matrix sigma_mat(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < q; ++m) acc += b(i, m) * b(j, m);
            sigma_mat(i, j) = acc;
            sigma_mat(j, i) = acc;
        }
    SpdMatrix sigma(std::move(sigma_mat), "niw_sample Sigma");

    // Theta = M + (L_C Z) L_Sigma'.
    Matrix z(p, q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) z(i, j) = rng.normal();
    const Matrix& lc = params.C.chol_lower();
    const Matrix& ls = sigma.chol_lower();
    Matrix w(p, q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m <= i; ++m) acc += lc(i, m) * z(m, j);
            w(i, j) = acc;
        }
    Matrix theta = params.M;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m <= j; ++m) acc += w(i, m) * ls(j, m);
            theta(i, j) += acc;
        }
    return NiwDraw{std::move(theta), std::move(sigma)};
}

std::vector<NiwDraw> niw_sample(const NIWParams& params, int count, std::uint64_t seed) {
    if (count < 1) throw argument_error("niw_sample: count must be >= 1");
    params.validate();
    std::vector<NiwDraw> draws;
    draws.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        draws.push_back(niw_sample_one(params, rng));
    }
    return draws;
}

}  // namespace causalcast
