#ifndef CAUSALCAST_DISTRIBUTIONS_HPP
#define CAUSALCAST_DISTRIBUTIONS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "causalcast/linalg.hpp"
#include "causalcast/rng.hpp"

namespace causalcast {

// Multivariate t with df > 0, location mu (length q) and SPD scale matrix.
// Covariance, when it exists (df > 2), is scale * df / (df - 2).
struct MultivariateT {
    double df = 0.0;
    Vector location;
    SpdMatrix scale;

    std::size_t dim() const { return location.size(); }
};

double mvt_log_density(const MultivariateT& dist, const Vector& y);

// count x q matrix of draws; row i comes from stream i of `seed`, so the
// output is identical for any parallel split of the rows.
Matrix mvt_sample(const MultivariateT& dist, int count, std::uint64_t seed);

// Single draw from an already-validated distribution, consuming `rng`.
// Variate order per draw: q normals, then one chi-squared.
Vector mvt_sample_one(const MultivariateT& dist, Rng& rng);

// Matrix normal-inverse Wishart over (Theta, Sigma):
//   Theta | Sigma ~ N(M, C, Sigma)   (p x q, row scale C, column scale Sigma)
//   Sigma ~ IW(n, D)
//
// IW convention, recorded here once and used for every df computation in
// the engine: IW(n, D) means Sigma^{-1} ~ Wishart(n + q - 1, D^{-1}).
// Consequences: E[Sigma] = D / (n - 2) for n > 2 (any q); the predictive
// y | (f, qs) with y | Sigma ~ N(f, qs * Sigma) marginalizes to a
// multivariate t with df = n and scale qs * D / n.
struct NIWParams {
    Matrix M;     // p x q state location
    SpdMatrix C;  // p x p state left-scale
    double n = 0.0;
    SpdMatrix D;  // q x q inverse-Wishart scale

    std::size_t num_predictors() const { return M.rows(); }
    std::size_t num_series() const { return M.cols(); }

    // Throws if shapes disagree or n <= q - 1 (properness gate).
    void validate() const;
};

struct NiwDraw {
    Matrix theta;     // p x q
    SpdMatrix sigma;  // q x q
};

std::vector<NiwDraw> niw_sample(const NIWParams& params, int count, std::uint64_t seed);

// Single draw consuming `rng`. Variate order: Bartlett factor for Sigma
// (per row i: one chi-squared, then i normals), then p*q normals for Theta.
NiwDraw niw_sample_one(const NIWParams& params, Rng& rng);

}  // namespace causalcast

#endif
