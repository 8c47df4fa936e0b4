#ifndef CAUSALCAST_PCA_HPP
#define CAUSALCAST_PCA_HPP

#include <string>
#include <vector>

#include "causalcast/linalg.hpp"

namespace causalcast {

// Control-unit outcomes over the full observation window (training + post).
struct ControlPanel {
    Matrix values;  // (T + k) x c
    std::vector<std::string> unit_ids;
    std::size_t train_len = 0;  // T; post length k = rows - T

    std::size_t num_units() const { return values.cols(); }
    std::size_t post_len() const { return values.rows() - train_len; }
    void validate() const;
};

enum class Centering { train_window, full_window };

struct PcaOptions {
    Centering centering = Centering::train_window;
    bool standardize = false;  // divide columns by their centering-window sd
};

// Principal-component basis of the control matrix. Loadings have
// orthonormal columns; scores = (values - centers) * loadings over the
// full window; explained_variance is non-increasing. The sign of each
// component is fixed so its largest-magnitude loading entry is positive,
// which makes the whole construction bit-deterministic.
struct PcBasis {
    Matrix loadings;            // c x p_max
    Matrix scores;              // (T + k) x p_max
    Vector explained_variance;  // length p_max
    Vector column_centers;      // length c
    Vector column_scales;       // length c; all 1 unless standardized

    std::size_t max_components() const { return loadings.cols(); }
};

PcBasis compute_pc_basis(const ControlPanel& panel, std::size_t p_max,
                         const PcaOptions& options = {});

// Regressor matrix for the filter: column 0 is the intercept, columns
// 1..p are the first p score columns in variance order.
Matrix build_regressors(const PcBasis& basis, std::size_t p);

}  // namespace causalcast

#endif
