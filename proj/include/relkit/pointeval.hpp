#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "relkit/decompose.hpp"
#include "relkit/dominate.hpp"
#include "relkit/relation.hpp"

namespace relkit {

/// One grid level of the point-evaluation study: the evaluation relation on
/// grid functions over [0, 1] with the trapezoidal weighted inner product,
/// mapped to orthonormal coordinates.
struct point_eval_level {
    int grid_size = 0;
    double dx = 0.0;
    std::vector<double> requested_points;
    std::vector<double> snapped_points;
    std::vector<int> snapped_indices;
    bool snapped_warning = false;
    double operator_norm = 0.0;
    double regular_part_constant = 0.0;  ///< min_constant of the regular part against T
    int range_dim = 0;
    int adjoint_dom_dim = 0;
};

struct point_eval_study {
    std::vector<point_eval_level> levels;
    std::vector<double> norm_ratios;  ///< operator norm between successive grids
};

/// Trapezoidal quadrature weights on a uniform grid over [0, 1].
inline std::vector<double> trapezoid_weights(int m) {
    std::vector<double> w(m);
    if (m == 1) {
        w[0] = 1.0;
        return w;
    }
    const double dx = 1.0 / (m - 1);
    for (int i = 0; i < m; ++i) w[i] = dx;
    w[0] = 0.5 * dx;
    w[m - 1] = 0.5 * dx;
    return w;
}

/// The evaluation matrix in orthonormal coordinates of the weighted space:
/// row n picks the grid value at the n-th point, scaled by 1/sqrt(weight).
inline Mat point_eval_matrix(int m, const std::vector<int>& indices,
                             const std::vector<double>& weights) {
    Mat t = Mat::Zero(static_cast<int>(indices.size()), m);
    for (std::size_t n = 0; n < indices.size(); ++n)
        t(static_cast<int>(n), indices[n]) = 1.0 / std::sqrt(weights[indices[n]]);
    return t;
}

/// Discretization study of the point-evaluation functional: on each grid the
/// relation is a bona fide everywhere-defined operator with computable
/// adjoint, but its norm grows like 1/sqrt(dx) as the grid refines — the
/// finite-dimensional shadow of the continuum operator being singular with
/// trivial adjoint domain.
inline point_eval_study run_point_eval_study(const std::vector<int>& grid_sizes,
                                             const std::vector<double>& points,
                                             const tolerance_config& tol = {}) {
    if (grid_sizes.empty()) throw error("point_eval_study: no grid sizes given");
    for (std::size_t i = 0; i < grid_sizes.size(); ++i) {
        if (grid_sizes[i] < 2 || (i > 0 && grid_sizes[i] <= grid_sizes[i - 1]))
            throw error("point_eval_study: grid sizes must be >= 2 and strictly increasing");
    }

    point_eval_study study;
    for (int m : grid_sizes) {
        point_eval_level level;
        level.grid_size = m;
        level.dx = 1.0 / (m - 1);
        level.requested_points = points;
        std::vector<double> weights = trapezoid_weights(m);
        for (double x : points) {
            double clamped = std::clamp(x, 0.0, 1.0);
            int idx = static_cast<int>(std::lround(clamped / level.dx));
            idx = std::clamp(idx, 0, m - 1);
            const double snapped = idx * level.dx;
            if (std::abs(snapped - x) > 1e-12) level.snapped_warning = true;
            level.snapped_indices.push_back(idx);
            level.snapped_points.push_back(snapped);
        }

        if (points.empty()) {
            // No evaluation points: the zero relation at every grid.
            level.operator_norm = 0.0;
            level.regular_part_constant = 0.0;
            level.range_dim = 0;
            level.adjoint_dom_dim = 1;  // adjoint of the zero map on R^1 is everywhere defined
            study.levels.push_back(level);
            continue;
        }

        Mat tm = point_eval_matrix(m, level.snapped_indices, weights);
        linear_relation rel = linear_relation::from_operator(tm, tol);
        level.operator_norm = spectral_norm(tm);
        lebesgue_split split = lebesgue(rel, tol);
        level.range_dim = rel.ran(tol).dim();
        level.adjoint_dom_dim = rel.adjoint(tol).dom(tol).dim();
        std::optional<double> c = min_constant(split.t1, rel, tol);
        level.regular_part_constant = c.value_or(-1.0);
        study.levels.push_back(level);
    }

    for (std::size_t i = 1; i < study.levels.size(); ++i) {
        const double prev = study.levels[i - 1].operator_norm;
        study.norm_ratios.push_back(prev > 0.0 ? study.levels[i].operator_norm / prev : 0.0);
    }
    return study;
}

}  // namespace relkit
