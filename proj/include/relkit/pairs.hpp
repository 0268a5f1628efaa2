#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "relkit/decompose.hpp"
#include "relkit/relation.hpp"

namespace relkit {

namespace detail {

inline void require_psd(const Mat& a, const tolerance_config& tol, const char* who) {
    if (a.rows() != a.cols()) throw not_psd(std::string(who) + ": matrix is not square");
    const double scale = std::max(1.0, max_abs(a));
    if (max_abs(a - a.transpose()) > tol.contain * scale)
        throw not_psd(std::string(who) + ": matrix is not symmetric within tolerance");
    if (min_eigenvalue(symmetrized(a)) < -tol.contain * scale)
        throw not_psd(std::string(who) + ": matrix has a negative eigenvalue");
}

}  // namespace detail

/// PSD square root via eigendecomposition; tiny negative eigenvalues are
/// clamped to zero.
inline Mat matrix_sqrt(const Mat& a, const tolerance_config& tol = {}) {
    detail::require_psd(a, tol, "matrix_sqrt");
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(a));
    Vec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

/// The range-space relation T = {(a h, b h) : h in E} built from a pair of
/// component matrices with a common initial space.
struct operator_pair {
    Mat a;
    Mat b;
    linear_relation relation;
};

inline operator_pair pair_relation(const Mat& a, const Mat& b, const tolerance_config& tol = {}) {
    if (a.cols() != b.cols())
        throw dimension_mismatch("pair_relation: component matrices disagree on column count");
    const int dh = static_cast<int>(a.rows());
    const int dk = static_cast<int>(b.rows());
    if (dh == 0 || dk == 0) throw dimension_mismatch("pair_relation: empty component matrix");
    Mat stacked(dh + dk, a.cols());
    stacked.topRows(dh) = a;
    stacked.bottomRows(dk) = b;
    return {a, b, linear_relation::from_graph_span(dh, dk, stacked, tol)};
}

/// The operator sum decomposition b = b1 + b2 induced by the relation of the
/// pair: b2 carries the part of b supported on clos(b ker a) (the
/// multivalued direction), b1 the rest, so (a, b1) generates an operator.
struct pair_split {
    Mat b1;
    Mat b2;
    subspace p;  ///< clos(b ker a)
};

inline pair_split pair_lebesgue(const operator_pair& pair, const tolerance_config& tol = {}) {
    subspace ker_a = complement(subspace::span(Mat(pair.a.transpose()), tol));
    subspace p = subspace::span(Mat(pair.b * ker_a.frame()), tol);
    Mat b2 = p.dim() == 0 ? Mat::Zero(pair.b.rows(), pair.b.cols())
                          : Mat(p.frame() * (p.frame().transpose() * pair.b));
    Mat b1 = pair.b - b2;

    // The split must agree with the Lebesgue decomposition of the relation.
    lebesgue_split rel_split = lebesgue(pair.relation, tol);
    operator_pair regular = pair_relation(pair.a, b1, tol);
    if (!relations_equal(rel_split.t1, regular.relation, tol))
        throw internal_consistency("pair_lebesgue: regular component disagrees with the relation split");
    if (!subspace_equal(rel_split.t2.closure().ran(tol), p, tol))
        throw internal_consistency("pair_lebesgue: singular range disagrees with the relation split");
    return {std::move(b1), std::move(b2), std::move(p)};
}

/// Parallel sum a : b = a (a + b)^+ b of PSD matrices, symmetrized.
inline Mat parallel_sum(const Mat& a, const Mat& b, const tolerance_config& tol = {}) {
    detail::require_psd(a, tol, "parallel_sum");
    detail::require_psd(b, tol, "parallel_sum");
    if (a.rows() != b.rows()) throw dimension_mismatch("parallel_sum: sizes differ");
    // The sum a+b can be made arbitrarily ill-conditioned by scaling one
    // argument (the limit oracle does exactly that), so the regularizing
    // cutoff here is machine-level rather than the rank policy's.
    Mat s = symmetrized(a + b);
    return symmetrized(a * pinv(s, 1e-13) * b);
}

/// Limit of (n a) : b along a doubling schedule, the classical construction
/// of the part of b absolutely continuous with respect to a. Monotone
/// nondecreasing and bounded by b; both are asserted along the way.
inline Mat ando_ac_oracle(const Mat& a, const Mat& b, double tol_conv = 1e-9, int n_max = 60,
                          const tolerance_config& tol = {}) {
    detail::require_psd(a, tol, "ando_ac_oracle");
    detail::require_psd(b, tol, "ando_ac_oracle");
    if (a.rows() != b.rows()) throw dimension_mismatch("ando_ac_oracle: sizes differ");
    const double scale = std::max(1.0, max_abs(b));
    Mat prev = parallel_sum(a, b, tol);
    double n = 1.0;
    for (int step = 0; step < n_max; ++step) {
        n *= 2.0;
        Mat cur = parallel_sum(n * a, b, tol);
        if (min_eigenvalue(symmetrized(cur - prev)) < -1e2 * tol.oracle * scale)
            throw internal_consistency("ando_ac_oracle: iterates are not monotone");
        if (min_eigenvalue(symmetrized(b - cur)) < -1e2 * tol.oracle * scale)
            throw internal_consistency("ando_ac_oracle: iterate exceeds b");
        const double step_gap = spectral_norm(cur - prev);
        prev = cur;
        if (step_gap < tol_conv) return prev;
    }
    throw no_convergence("ando_ac_oracle: doubling schedule did not converge",
                         spectral_norm(parallel_sum(2.0 * n * a, b, tol) - prev));
}

/// Decomposes a PSD matrix b against a PSD matrix a into b = b_ac + b_s:
/// b_s = sqrt(b) P sqrt(b) with P the projector onto sqrt(b) ker(a), built
/// through the range-space relation of the square roots.
struct psd_split {
    Mat b_ac;
    Mat b_s;
};

inline psd_split psd_pair_decomposition(const Mat& a, const Mat& b,
                                        const tolerance_config& tol = {}) {
    detail::require_psd(a, tol, "psd_pair_decomposition");
    detail::require_psd(b, tol, "psd_pair_decomposition");
    if (a.rows() != b.rows())
        throw dimension_mismatch("psd_pair_decomposition: sizes differ");
    Mat ra = matrix_sqrt(a, tol);
    Mat rb = matrix_sqrt(b, tol);
    subspace ker_a = complement(subspace::span(ra, tol));
    subspace p = subspace::span(Mat(rb * ker_a.frame()), tol);
    Mat b_s = p.dim() == 0 ? Mat::Zero(b.rows(), b.cols())
                           : symmetrized(rb * p.projector() * rb);
    return {symmetrized(b - b_s), std::move(b_s)};
}

/// Spectral-norm distance between the formula route (psd_pair_decomposition)
/// and the limit route (ando_ac_oracle). Disagreement beyond tolerance is a
/// reportable finding.
inline double psd_oracle_gap(const Mat& a, const Mat& b, const tolerance_config& tol = {}) {
    psd_split split = psd_pair_decomposition(a, b, tol);
    Mat oracle = ando_ac_oracle(a, b, 0.1 * tol.oracle, 60, tol);
    return spectral_norm(split.b_ac - oracle);
}

}  // namespace relkit
