#include "causalcast/pca.hpp"

#include <algorithm>
#include <cmath>

namespace causalcast {

void ControlPanel::validate() const {
    if (values.cols() < 1) throw argument_error("ControlPanel: needs at least one unit");
    if (train_len < 2) throw argument_error("ControlPanel: training length must be >= 2");
    if (values.rows() < train_len)
        throw argument_error("ControlPanel: fewer rows than training length");
    if (!unit_ids.empty() && unit_ids.size() != values.cols())
        throw argument_error("ControlPanel: unit_ids length differs from columns");
    for (double v : values.data())
        if (!std::isfinite(v)) throw data_error("ControlPanel: non-finite entry");
}

PcBasis compute_pc_basis(const ControlPanel& panel, std::size_t p_max,
                         const PcaOptions& options) {
    panel.validate();
    const std::size_t rows = panel.values.rows();
    const std::size_t c = panel.num_units();
    const std::size_t t_train = panel.train_len;
    if (p_max < 1 || p_max > std::min(c, t_train - 1))
        throw argument_error("compute_pc_basis: p_max must be in [1, min(c, T-1)]");

    const std::size_t center_rows =
        options.centering == Centering::train_window ? t_train : rows;
    Vector centers(c, 0.0);
    for (std::size_t j = 0; j < c; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < center_rows; ++i) acc += panel.values(i, j);
        centers[j] = acc / static_cast<double>(center_rows);
    }
    Vector scales(c, 1.0);
    if (options.standardize) {
        for (std::size_t j = 0; j < c; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < center_rows; ++i) {
                const double d = panel.values(i, j) - centers[j];
                acc += d * d;
            }
            const double sd = std::sqrt(acc / static_cast<double>(center_rows - 1));
            if (sd > 0.0) scales[j] = sd;
        }
    }

    Matrix centered(rows, c);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < c; ++j)
            centered(i, j) = (panel.values(i, j) - centers[j]) / scales[j];

    Svd svd = jacobi_svd(centered);
    const double top = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
    if (!(top > 1e-10 * (1.0 + max_abs(panel.values))))
        throw data_error("compute_pc_basis: degenerate control panel, all columns constant");

    PcBasis basis;
    basis.loadings = Matrix(c, p_max);
    basis.explained_variance.resize(p_max);
    basis.column_centers = std::move(centers);
    basis.column_scales = std::move(scales);
    const double denom = static_cast<double>(rows - 1);
    for (std::size_t k = 0; k < p_max; ++k) {
        const double sv = svd.singular_values[k];
        basis.explained_variance[k] = sv * sv / denom;
        // Sign convention: largest-magnitude loading entry positive,
        // first index winning ties.
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < c; ++i) {
            const double mag = std::abs(svd.v(i, k));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const double flip = svd.v(arg, k) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < c; ++i) basis.loadings(i, k) = flip * svd.v(i, k);
    }
    basis.scores = centered * basis.loadings;
    return basis;
}

Matrix build_regressors(const PcBasis& basis, std::size_t p) {
    if (p < 1 || p > basis.max_components())
        throw argument_error("build_regressors: p must be in [1, p_max]");
    const std::size_t rows = basis.scores.rows();
    Matrix f(rows, p + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        f(i, 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j) f(i, j + 1) = basis.scores(i, j);
    }
    return f;
}

}  // namespace causalcast
