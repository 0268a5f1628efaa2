#pragma once

#include <random>

#include "relkit/relation.hpp"

namespace relkit {

using rng_t = std::mt19937_64;

inline Mat random_gaussian(rng_t& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = gauss(rng);
    return m;
}

inline Mat random_orthogonal(rng_t& rng, int n) {
    if (n == 0) return Mat(0, 0);
    Eigen::HouseholderQR<Mat> qr(random_gaussian(rng, n, n));
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

inline subspace random_subspace(rng_t& rng, int ambient, int dim,
                                const tolerance_config& tol = {}) {
    if (dim == 0) return subspace::zero(ambient);
    return subspace::span(random_gaussian(rng, ambient, dim), tol);
}

/// Relation with prescribed domain and multivalued dimensions: the span of
/// operator-like pairs over a random domain plus a purely multivalued block.
inline linear_relation random_relation(rng_t& rng, int dim_h, int dim_k, int dom_dim,
                                       int mul_dim, const tolerance_config& tol = {}) {
    subspace d = random_subspace(rng, dim_h, dom_dim, tol);
    subspace m = random_subspace(rng, dim_k, mul_dim, tol);
    Mat cols(dim_h + dim_k, dom_dim + mul_dim);
    if (dom_dim > 0) {
        Mat values = random_gaussian(rng, dim_k, dim_h) * d.frame();
        cols.block(0, 0, dim_h, dom_dim) = d.frame();
        cols.block(dim_h, 0, dim_k, dom_dim) = values;
    }
    cols.block(0, dom_dim, dim_h, mul_dim).setZero();
    cols.block(dim_h, dom_dim, dim_k, mul_dim) = m.frame();
    return linear_relation::from_graph_span(dim_h, dim_k, cols, tol);
}

/// A varied corpus: operators, multivalued relations, products of subspaces,
/// and occasional degenerate (zero) relations.
inline linear_relation random_relation_mixed(rng_t& rng, int max_dim,
                                             const tolerance_config& tol = {}) {
    std::uniform_int_distribution<int> dimdist(1, max_dim);
    const int dh = dimdist(rng);
    const int dk = dimdist(rng);
    std::uniform_int_distribution<int> kind(0, 9);
    const int k = kind(rng);
    std::uniform_int_distribution<int> domdist(0, dh);
    std::uniform_int_distribution<int> muldist(0, dk);
    if (k < 2) {
        // product of subspaces
        return linear_relation::product_space(random_subspace(rng, dh, domdist(rng), tol),
                                              random_subspace(rng, dk, muldist(rng), tol));
    }
    if (k < 4) {
        // everywhere-defined operator
        return linear_relation::from_operator(random_gaussian(rng, dk, dh), tol);
    }
    return random_relation(rng, dh, dk, domdist(rng), muldist(rng), tol);
}

/// PSD matrix with controlled spectrum: eigenvalues are either exactly zero
/// (rank deficiency) or kept away from zero, so limit oracles converge at
/// double precision.
inline Mat random_psd(rng_t& rng, int n, int rank, const tolerance_config& tol = {}) {
    (void)tol;
    Mat q = random_orthogonal(rng, n);
    std::uniform_real_distribution<double> lam(0.3, 3.0);
    Vec d = Vec::Zero(n);
    for (int i = 0; i < rank && i < n; ++i) d(i) = lam(rng);
    return symmetrized(q * d.asDiagonal() * q.transpose());
}

}  // namespace relkit
