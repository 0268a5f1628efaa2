#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "relkit/decompose.hpp"
#include "relkit/relation.hpp"

namespace relkit {

/// A certificate for S1 < S2 (domination): a bounded operator c with
/// c S2 contained in S1, together with its norms, the worst distance of a
/// mapped graph generator from graph(S1), and the minimal constant for
/// operator pairs (spectral norm of the canonical construction).
struct domination_witness {
    Mat c;
    double frobenius_norm = 0.0;
    double spectral_norm = 0.0;
    double c_min = 0.0;
    double residual = 0.0;
    bool contractive = false;
    std::optional<Mat> canonical_c;
};

/// Applies every column of `cols` through the relation at once (one
/// pseudo-inverse instead of one per column). Columns must lie in dom T.
inline Mat apply_columns(const linear_relation& t, const Mat& cols,
                         const tolerance_config& tol = {}) {
    if (cols.rows() != t.dim_h())
        throw dimension_mismatch("apply_columns: column dimension mismatch");
    Mat a = t.graph_h_block();
    Mat x = pinv(a, tol.rank_rtol) * cols;
    Mat res = a * x - cols;
    for (int j = 0; j < cols.cols(); ++j)
        if (res.col(j).norm() > tol.contain * std::max(1.0, cols.col(j).norm()))
            throw outside_domain("apply_columns: a column lies outside dom T");
    return t.graph_k_block() * x;
}

/// Worst distance of (f, c g) from graph(S1) over the graph generators
/// (f, g) of S2.
inline double witness_residual(const linear_relation& s1, const linear_relation& s2,
                               const Mat& c) {
    const int dh = s1.dim_h();
    const int dk1 = s1.dim_k();
    Mat f2 = s2.graph_h_block();
    Mat g2 = s2.graph_k_block();
    Mat mapped(dh + dk1, f2.cols());
    mapped.topRows(dh) = f2;
    mapped.bottomRows(dk1) = c * g2;
    Mat defect = mapped - s1.graph().frame() * (s1.graph().frame().transpose() * mapped);
    double worst = 0.0;
    for (int j = 0; j < defect.cols(); ++j) worst = std::max(worst, defect.col(j).norm());
    return worst;
}

namespace detail {

inline domination_witness finish_witness(const linear_relation& s1, const linear_relation& s2,
                                         Mat c, const tolerance_config& tol) {
    domination_witness w;
    w.c = std::move(c);
    w.frobenius_norm = w.c.norm();
    w.spectral_norm = spectral_norm(w.c);
    w.residual = witness_residual(s1, s2, w.c);
    w.c_min = w.spectral_norm;  // upper bound; refined for operator pairs below
    if (is_operator(s1, tol) && is_operator(s2, tol) &&
        contains(s1.dom(tol), s2.dom(tol), tol) &&
        contains(s1.ker(tol), intersect(s2.ker(tol), s2.dom(tol), tol), tol)) {
        // Canonical witness: map S2 f to S1 f on ran S2, vanish on the
        // orthogonal complement. The pseudo-inverse realizes exactly that
        // extension once the kernel precondition has been verified.
        Mat d = s2.dom(tol).frame();
        Mat b2 = apply_columns(s2, d, tol);
        Mat b1 = apply_columns(s1, d, tol);
        Mat c0 = b1 * pinv(b2, tol.rank_rtol);
        w.canonical_c = c0;
        w.c_min = spectral_norm(c0);
    }
    const double bound = w.canonical_c ? w.c_min : w.spectral_norm;
    w.contractive = bound <= 1.0 + tol.contain;
    return w;
}

}  // namespace detail

/// Decides S1 < S2 by solving the linear feasibility problem over c: every
/// graph generator (f, g) of S2 must satisfy (f, c g) in graph(S1). Returns
/// the minimum-Frobenius-norm solution, or nothing when the feasibility
/// residual exceeds tolerance. For operator pairs the kernel precondition
/// ker S2 ^ dom S2 inside ker S1 is checked before any pseudo-inverse is
/// formed, and the canonical witness with its minimal constant is attached.
inline std::optional<domination_witness> dominates(const linear_relation& s1,
                                                   const linear_relation& s2,
                                                   const tolerance_config& tol = {}) {
    if (s1.dim_h() != s2.dim_h())
        throw dimension_mismatch("dominates: relations have different initial spaces");
    const int dh = s1.dim_h();
    const int dk1 = s1.dim_k();
    const int dk2 = s2.dim_k();

    if (is_operator(s1, tol) && is_operator(s2, tol)) {
        if (!contains(s1.dom(tol), s2.dom(tol), tol)) return std::nullopt;
        if (!contains(s1.ker(tol), intersect(s2.ker(tol), s2.dom(tol), tol), tol))
            return std::nullopt;
    }

    Mat f2 = s2.graph_h_block();
    Mat g2 = s2.graph_k_block();
    const int gcount = static_cast<int>(f2.cols());

    Mat n = Mat::Identity(dh + dk1, dh + dk1) -
            s1.graph().frame() * s1.graph().frame().transpose();
    Mat nh = n.leftCols(dh);
    Mat nk = n.rightCols(dk1);

    // Stack the constraints n_h f_i + n_k C g_i = 0 into a least-squares
    // system over vec(C) (column-major).
    Mat a = Mat::Zero(gcount * (dh + dk1), dk1 * dk2);
    Vec b(gcount * (dh + dk1));
    for (int i = 0; i < gcount; ++i) {
        for (int j = 0; j < dk2; ++j)
            a.block(i * (dh + dk1), j * dk1, dh + dk1, dk1) = g2(j, i) * nk;
        b.segment(i * (dh + dk1), dh + dk1) = -nh * f2.col(i);
    }
    Vec vc = pinv(a, tol.rank_rtol) * b;
    Mat c = Mat::Zero(dk1, dk2);
    for (int j = 0; j < dk2; ++j) c.col(j) = vc.segment(j * dk1, dk1);

    double scale = 1.0;
    for (int i = 0; i < gcount; ++i)
        scale = std::max(scale, f2.col(i).norm() + (c * g2.col(i)).norm());
    if (witness_residual(s1, s2, c) > tol.contain * scale) return std::nullopt;
    return detail::finish_witness(s1, s2, std::move(c), tol);
}

/// The smallest constant c with ||S1 f|| <= c ||g|| over all (f, g) in S2
/// (the usual ||S1 f|| <= c ||S2 f|| when S2 is an operator). S1 must be an
/// operator with dom S2 inside dom S1; the kernel precondition is checked
/// explicitly, since the pseudo-inverse would silently zero-fill kernels and
/// mask genuine non-domination. Returns nothing when the pair is not
/// dominated.
inline std::optional<double> min_constant(const linear_relation& s1, const linear_relation& s2,
                                          const tolerance_config& tol = {}) {
    if (s1.dim_h() != s2.dim_h())
        throw dimension_mismatch("min_constant: relations have different initial spaces");
    if (!is_operator(s1, tol)) return std::nullopt;
    if (!contains(s1.dom(tol), s2.dom(tol), tol)) return std::nullopt;
    // Pairs (f, 0) in S2 with S1 f != 0 make the constant infinite; rule
    // them out before any pseudo-inverse gets a chance to zero-fill them.
    if (!contains(s1.ker(tol), intersect(s2.ker(tol), s2.dom(tol), tol), tol))
        return std::nullopt;
    Mat f2 = s2.graph_h_block();
    Mat g2 = s2.graph_k_block();
    if (f2.cols() == 0) return 0.0;
    Mat n1 = apply_columns(s1, f2, tol);
    Mat b2p = pinv(g2, tol.rank_rtol);
    const double kernel_defect = max_abs(n1 * (Mat::Identity(f2.cols(), f2.cols()) - b2p * g2));
    if (kernel_defect > tol.contain * std::max(1.0, max_abs(n1))) return std::nullopt;
    return spectral_norm(n1 * b2p);
}

namespace detail {

inline domination_witness transport_witness(const linear_relation& s, const linear_relation& t,
                                            const domination_witness& w, bool regular_parts,
                                            const tolerance_config& tol) {
    double scale = std::max(1.0, max_abs(w.c));
    if (witness_residual(s, t, w.c) > tol.contain * scale)
        throw stale_witness("transport: witness no longer certifies the original pair");
    // (I - R) c maps the projected parts into each other, where R projects
    // onto the multivalued part governing the split of S.
    subspace r = regular_parts ? s.closure().mul(tol) : s.mul(tol);
    Mat ir = Mat::Identity(s.dim_k(), s.dim_k()) - r.projector();
    Mat cprime = ir * w.c;
    lebesgue_split ssplit = regular_parts ? lebesgue(s, tol) : weak_lebesgue(s, tol);
    lebesgue_split tsplit = regular_parts ? lebesgue(t, tol) : weak_lebesgue(t, tol);
    domination_witness out = finish_witness(ssplit.t1, tsplit.t1, cprime, tol);
    double out_scale = std::max(1.0, max_abs(cprime));
    if (out.residual > tol.contain * out_scale)
        throw internal_consistency("transport: transported witness fails its residual check");
    if (out.spectral_norm > w.spectral_norm + tol.contain)
        throw internal_consistency("transport: spectral norm grew under projection");
    return out;
}

}  // namespace detail

/// Transports a witness for S < T to one for S_reg < T_reg via (I - R) c,
/// R the projector onto mul of the closure of S. Contractivity is preserved.
inline domination_witness transport_to_regular_parts(const linear_relation& s,
                                                     const linear_relation& t,
                                                     const domination_witness& w,
                                                     const tolerance_config& tol = {}) {
    return detail::transport_witness(s, t, w, true, tol);
}

/// Transports a witness for S < T to one for S_op < T_op via (I - R_m) c,
/// R_m the projector onto the closure of mul S.
inline domination_witness transport_to_operator_parts(const linear_relation& s,
                                                      const linear_relation& t,
                                                      const domination_witness& w,
                                                      const tolerance_config& tol = {}) {
    return detail::transport_witness(s, t, w, false, tol);
}

}  // namespace relkit
