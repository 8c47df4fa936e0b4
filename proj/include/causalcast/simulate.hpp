#ifndef CAUSALCAST_SIMULATE_HPP
#define CAUSALCAST_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "causalcast/linalg.hpp"
#include "causalcast/pca.hpp"

namespace causalcast {

// Synthetic panel with known ground truth, shaped like the study data:
// controls driven by a few latent AR(1) factors plus noise, treated units
// driven by the same factors plus equicorrelated residuals, and a
// multiplicative treatment effect switched on for the evaluation window
// (everything after the transition).
struct SimConfig {
    std::size_t q = 16;  // treated units
    std::size_t c = 43;  // control units
    std::size_t T = 52;  // training weeks
    std::size_t m = 8;   // transition weeks
    std::size_t k = 24;  // post weeks, transition included (evaluation = k - m)

    std::size_t n_factors = 2;
    double factor_sd = 25.0;         // stationary sd of factor r is factor_sd / (r + 1)
    double factor_ar = 0.98;         // AR(1) coefficient of each factor
    double control_noise_sd = 6.0;
    double treated_noise_sd = 8.0;
    double rho = 0.0;                // equicorrelation of treated residuals
    double effect_pct = 0.0;         // multiplicative lift, percent
    Vector effect_per_unit;          // optional per-unit override, length q
    std::uint64_t seed = 1;

    void validate() const;
};

struct GroundTruth {
    Matrix counterfactual;  // (T + k) x q, outcomes with no intervention
    Vector true_lift_pct;   // per unit over the evaluation window (exact)
    Matrix factor_paths;    // (T + k) x n_factors
    Matrix treated_loadings;  // q x n_factors
    double residual_sd = 0.0;
    double residual_rho = 0.0;
};

struct SimOutput {
    Matrix treated;  // (T + k) x q, effect applied in the evaluation window
    ControlPanel controls;
    GroundTruth truth;
};

SimOutput simulate_panel(const SimConfig& config);

}  // namespace causalcast

#endif
