#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "relkit/errors.hpp"
#include "relkit/numeric.hpp"
#include "relkit/tolerance.hpp"

namespace relkit {

/// A closed linear subspace of R^n, stored as an orthonormal frame
/// (n x k matrix, k possibly zero). Immutable after construction.
///
/// Equality of subspaces is always projector-gap based; frames are never
/// compared column by column.
class subspace {
public:
    /// Wraps an existing frame. The columns must be orthonormal within
    /// tol.orth; use span() to orthonormalize arbitrary vectors.
    subspace(int ambient_dim, Mat frame, const tolerance_config& tol = {})
        : ambient_(ambient_dim), frame_(std::move(frame)) {
        if (ambient_ < 0) throw dimension_mismatch("subspace: negative ambient dimension");
        if (frame_.size() == 0) frame_.resize(ambient_, 0);
        if (frame_.rows() != ambient_)
            throw dimension_mismatch("subspace: frame has " + std::to_string(frame_.rows()) +
                                     " rows, ambient dimension is " + std::to_string(ambient_));
        if (frame_.cols() > ambient_)
            throw dimension_mismatch("subspace: more frame columns than ambient dimension");
        if (frame_.cols() > 0) {
            Mat g = frame_.transpose() * frame_;
            g.diagonal().array() -= 1.0;
            if (max_abs(g) > tol.orth)
                throw error("subspace: frame columns are not orthonormal within tolerance");
        }
    }

    static subspace zero(int ambient_dim) { return subspace(ambient_dim, Mat(ambient_dim, 0)); }

    static subspace full(int ambient_dim) {
        return subspace(ambient_dim, Mat::Identity(ambient_dim, ambient_dim));
    }

    /// Orthonormal frame for the column span of `vectors`. Numerical rank is
    /// decided by singular values >= rank_rtol * sigma_max; the span of an
    /// empty matrix is the zero subspace.
    static subspace span(const Mat& vectors, const tolerance_config& tol = {}) {
        const int ambient = static_cast<int>(vectors.rows());
        if (vectors.cols() == 0) return zero(ambient);
        // Already-orthonormal inputs pass through untouched; keeps repeated
        // projections from accumulating factorization noise.
        if (vectors.cols() <= ambient) {
            Mat g = vectors.transpose() * vectors;
            g.diagonal().array() -= 1.0;
            if (max_abs(g) <= tol.orth) return subspace(ambient, vectors, tol);
        }
        thin_svd f = svd_thin(vectors);
        const int r = numerical_rank(f.s, tol.rank_rtol);
        return subspace(ambient, f.u.leftCols(r), tol);
    }

    /// Span of a list of ambient vectors; `ambient_dim` fixes the space when
    /// the list is empty.
    static subspace span(const std::vector<Vec>& vectors, int ambient_dim,
                         const tolerance_config& tol = {}) {
        Mat cols(ambient_dim, static_cast<int>(vectors.size()));
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (vectors[i].size() != ambient_dim)
                throw dimension_mismatch("span: vector " + std::to_string(i) +
                                         " has dimension " + std::to_string(vectors[i].size()) +
                                         ", expected " + std::to_string(ambient_dim));
            cols.col(static_cast<int>(i)) = vectors[i];
        }
        return span(cols, tol);
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(frame_.cols()); }
    bool is_zero() const { return dim() == 0; }
    const Mat& frame() const { return frame_; }

    /// Orthogonal projector frame * frame^T (idempotent, symmetric).
    Mat projector() const { return frame_ * frame_.transpose(); }

    Vec project(const Vec& v) const {
        if (v.size() != ambient_)
            throw dimension_mismatch("project: vector dimension does not match ambient");
        if (dim() == 0) return Vec::Zero(ambient_);
        return frame_ * (frame_.transpose() * v);
    }

private:
    int ambient_;
    Mat frame_;
};

inline void require_same_ambient(const subspace& a, const subspace& b, const char* who) {
    if (a.ambient_dim() != b.ambient_dim())
        throw dimension_mismatch(std::string(who) + ": ambient dimensions differ");
}

/// Orthogonal complement. The projectors of S and its complement sum to the
/// identity; dimensions are complementary.
inline subspace complement(const subspace& s) {
    const int n = s.ambient_dim();
    const int k = s.dim();
    if (k == 0) return subspace::full(n);
    if (k == n) return subspace::zero(n);
    Eigen::HouseholderQR<Mat> qr(s.frame());
    Mat q = qr.householderQ();
    return subspace(n, q.rightCols(n - k));
}

/// Subspace sum S1 + S2 (span of concatenated frames).
inline subspace sum(const subspace& a, const subspace& b, const tolerance_config& tol = {}) {
    require_same_ambient(a, b, "sum");
    Mat cols(a.ambient_dim(), a.dim() + b.dim());
    cols.leftCols(a.dim()) = a.frame();
    cols.rightCols(b.dim()) = b.frame();
    return subspace::span(cols, tol);
}

/// Intersection via duality: (S1 ^perp + S2 ^perp)^perp.
inline subspace intersect(const subspace& a, const subspace& b,
                          const tolerance_config& tol = {}) {
    require_same_ambient(a, b, "intersect");
    return complement(sum(complement(a), complement(b), tol));
}

/// Largest distance from a unit vector of one subspace to the other; equals
/// the spectral norm of the projector difference. Computed from the
/// principal angles (smallest singular value of the cross-Gram matrix),
/// which avoids forming ambient-size projectors.
inline double gap(const subspace& a, const subspace& b) {
    require_same_ambient(a, b, "gap");
    const int ka = a.dim();
    const int kb = b.dim();
    if (ka == 0 && kb == 0) return 0.0;
    if (ka != kb) return 1.0;
    Mat cross = a.frame().transpose() * b.frame();
    Vec sv = singular_values(cross);
    const double smin = sv(sv.size() - 1);
    return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, smin) * std::min(1.0, smin)));
}

inline bool subspace_equal(const subspace& a, const subspace& b,
                           const tolerance_config& tol = {}) {
    return gap(a, b) <= tol.eq;
}

/// Whether the vector lies in S within tol.contain (relative to max(1, |v|)).
inline bool contains(const subspace& s, const Vec& v, const tolerance_config& tol = {}) {
    if (v.size() != s.ambient_dim())
        throw dimension_mismatch("contains: vector dimension does not match ambient");
    const double res = (v - s.project(v)).norm();
    return res <= tol.contain * std::max(1.0, v.norm());
}

/// Whether every frame column of `inner` lies in `outer`.
inline bool contains(const subspace& outer, const subspace& inner,
                     const tolerance_config& tol = {}) {
    require_same_ambient(outer, inner, "contains");
    for (int j = 0; j < inner.dim(); ++j)
        if (!contains(outer, Vec(inner.frame().col(j)), tol)) return false;
    return true;
}

/// Worst containment residual of `inner`'s frame columns against `outer`.
inline double containment_residual(const subspace& outer, const subspace& inner) {
    require_same_ambient(outer, inner, "containment_residual");
    double worst = 0.0;
    for (int j = 0; j < inner.dim(); ++j) {
        Vec v = inner.frame().col(j);
        worst = std::max(worst, (v - outer.project(v)).norm());
    }
    return worst;
}

}  // namespace relkit
