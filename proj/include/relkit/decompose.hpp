#pragma once

#include <string>
#include <utility>

#include "relkit/relation.hpp"

namespace relkit {

/// A validated orthogonal range decomposition T = t1 + t2 generated by a
/// projector range q, together with the canonical subspace clos ran t2 and
/// the classification of both parts.
struct lebesgue_split {
    linear_relation t1;
    linear_relation t2;
    subspace q;
    subspace canonical_m;
    bool t1_is_operator = false;
    bool t1_is_regular = false;
    bool t2_is_singular = false;
};

/// Worst inner product between range frame columns of the two parts.
inline double range_orthogonality_residual(const lebesgue_split& s,
                                           const tolerance_config& tol = {}) {
    subspace r1 = s.t1.ran(tol);
    subspace r2 = s.t2.ran(tol);
    if (r1.dim() == 0 || r2.dim() == 0) return 0.0;
    return max_abs(r1.frame().transpose() * r2.frame());
}

namespace detail {

inline lebesgue_split make_split(const linear_relation& t, const subspace& q,
                                 const tolerance_config& tol) {
    lebesgue_split s{apply_left_projection(t, complement(q), tol),
                     apply_left_projection(t, q, tol),
                     q,
                     subspace::zero(t.dim_k())};
    s.canonical_m = s.t2.ran(tol);
    s.t1_is_operator = is_operator(s.t1, tol);
    s.t1_is_regular = is_regular(s.t1, tol);
    s.t2_is_singular = is_singular(s.t2, tol);

    // Structural invariants of every orthogonal range decomposition.
    subspace d = t.dom(tol);
    if (!subspace_equal(s.t1.dom(tol), d, tol) || !subspace_equal(s.t2.dom(tol), d, tol))
        throw internal_consistency("orthogonal range split: domains drifted from dom T");
    if (range_orthogonality_residual(s, tol) > tol.contain)
        throw internal_consistency("orthogonal range split: ranges are not orthogonal");
    if (!relations_equal(rel_sum(s.t1, s.t2, tol), t, tol))
        throw internal_consistency("orthogonal range split: parts do not reconstruct T");
    return s;
}

}  // namespace detail

/// Splits T against an orthogonal projector onto q. Valid only when q leaves
/// mul T invariant; otherwise the sum of the parts would strictly contain T.
inline lebesgue_split orthogonal_range_split(const linear_relation& t, const subspace& q,
                                             const tolerance_config& tol = {}) {
    if (q.ambient_dim() != t.dim_k())
        throw dimension_mismatch("orthogonal_range_split: projector lives in the wrong space");
    subspace m = t.mul(tol);
    for (int j = 0; j < m.dim(); ++j) {
        Vec projected = q.project(m.frame().col(j));
        if (projected.norm() > tol.contain && !contains(m, projected, tol))
            throw invalid_projector(
                "orthogonal_range_split: Q mul T is not contained in mul T");
    }
    return detail::make_split(t, q, tol);
}

/// The Lebesgue decomposition T = T_reg + T_sing, generated by the projector
/// onto mul T (= mul of the closure in finite dimension). The regular part
/// is maximal among all regular parts in the sense of domination.
inline lebesgue_split lebesgue(const linear_relation& t, const tolerance_config& tol = {}) {
    subspace p = t.closure().mul(tol);
    lebesgue_split s = detail::make_split(t, p, tol);
    if (!s.t1_is_regular)
        throw internal_consistency("lebesgue: regular part failed its classification");
    if (!s.t2_is_singular)
        throw internal_consistency("lebesgue: singular part failed its classification");
    // The closure of the singular part is the full product of dom-closure
    // and the multivalued part of the closure.
    linear_relation expected =
        linear_relation::product_space(t.closure().dom(tol), p);
    if (!relations_equal(s.t2.closure(), expected, tol))
        throw internal_consistency("lebesgue: singular part is not the expected product");
    // The regular part stays inside the closure of T.
    if (!graph_contains(t.closure(), s.t1, tol))
        throw internal_consistency("lebesgue: regular part escapes the closure of T");
    return s;
}

/// The weak Lebesgue decomposition T = T_op + T_mul, generated by the
/// projector onto the closure of mul T. In finite dimension mul T is closed,
/// so this coincides with the Lebesgue decomposition; both facts are checked.
inline lebesgue_split weak_lebesgue(const linear_relation& t,
                                    const tolerance_config& tol = {}) {
    subspace pm = t.mul(tol);
    lebesgue_split s = detail::make_split(t, pm, tol);
    if (!s.t1_is_operator)
        throw internal_consistency("weak_lebesgue: operator part failed its classification");
    if (!s.t2_is_singular)
        throw internal_consistency("weak_lebesgue: multivalued part is not singular");
    linear_relation expected =
        linear_relation::product_space(t.closure().dom(tol), pm);
    if (!relations_equal(s.t2.closure(), expected, tol))
        throw internal_consistency("weak_lebesgue: multivalued part is not the expected product");

    lebesgue_split strong = lebesgue(t, tol);
    // T_reg = (I - P) T_op, recomputed from scratch.
    linear_relation reg_from_op =
        apply_left_projection(s.t1, complement(t.closure().mul(tol)), tol);
    if (!relations_equal(strong.t1, reg_from_op, tol))
        throw internal_consistency("weak_lebesgue: regular part mismatch against (I-P) T_op");
    if (!relations_equal(strong.t1, s.t1, tol) || !relations_equal(strong.t2, s.t2, tol))
        throw internal_consistency(
            "weak_lebesgue: weak and strong decompositions differ in finite dimension");
    return s;
}

namespace detail {

inline void check_lebesgue_type_conditions(const linear_relation& t, const subspace& m,
                                           const linear_relation& adj,
                                           const tolerance_config& tol) {
    // First admissibility condition, finite-dimensional form: the orthogonal
    // complement of M must lie inside dom T*.
    if (!contains(adj.dom(tol), complement(m), tol))
        throw condition_violation(
            "complement_condition",
            "lebesgue_type: complement of M is not contained in dom of the adjoint");
    // Second admissibility condition: M ^ dom T* must lie inside ker T*.
    subspace cap = intersect(m, adj.dom(tol), tol);
    if (!contains(adj.ker(tol), cap, tol))
        throw condition_violation(
            "kernel_condition",
            "lebesgue_type: M ^ dom of the adjoint is not contained in its kernel");
}

}  // namespace detail

/// Lebesgue type decomposition generated by an admissible closed subspace M:
/// t1 = (I - P_M) T regular, t2 = P_M T singular. Invalid subspaces are
/// rejected with the violated condition named; nothing is constructed
/// best-effort.
inline lebesgue_split lebesgue_type(const linear_relation& t, const subspace& m,
                                    const tolerance_config& tol = {}) {
    if (m.ambient_dim() != t.dim_k())
        throw dimension_mismatch("lebesgue_type: subspace lives in the wrong space");
    linear_relation adj = t.adjoint(tol);
    detail::check_lebesgue_type_conditions(t, m, adj, tol);

    lebesgue_split s = detail::make_split(t, m, tol);
    if (!s.t1_is_regular)
        throw internal_consistency("lebesgue_type: projected part t1 is not regular");
    if (!s.t2_is_singular)
        throw internal_consistency("lebesgue_type: projected part t2 is not singular");
    // Closure formula for the singular part:
    // (P_M T)** = clos dom T** x (M ^ (M ^ dom T*)^perp).
    subspace cap = intersect(m, adj.dom(tol), tol);
    subspace y = intersect(m, complement(cap), tol);
    linear_relation expected = linear_relation::product_space(t.closure().dom(tol), y);
    if (!relations_equal(s.t2.closure(), expected, tol))
        throw internal_consistency("lebesgue_type: singular part closure formula failed");
    return s;
}

/// The component L in the factorization M = mul T** (+) L of an admissible
/// Lebesgue-type subspace.
inline subspace lebesgue_type_component(const linear_relation& t, const subspace& m,
                                        const tolerance_config& tol = {}) {
    subspace mul_cl = t.closure().mul(tol);
    if (!contains(m, mul_cl, tol))
        throw condition_violation("complement_condition",
                                  "lebesgue_type_component: M does not contain mul of the closure");
    return intersect(m, complement(mul_cl), tol);
}

/// Weak Lebesgue type decomposition generated by M with clos mul T inside M
/// and M ^ dom T* inside ker T*: t1 is an operator (automatically regular in
/// finite dimension), t2 is singular.
inline lebesgue_split weak_lebesgue_type(const linear_relation& t, const subspace& m,
                                         const tolerance_config& tol = {}) {
    if (m.ambient_dim() != t.dim_k())
        throw dimension_mismatch("weak_lebesgue_type: subspace lives in the wrong space");
    linear_relation adj = t.adjoint(tol);
    if (!contains(m, t.mul(tol), tol))
        throw condition_violation(
            "mul_containment",
            "weak_lebesgue_type: closure of mul T is not contained in M");
    subspace cap = intersect(m, adj.dom(tol), tol);
    if (!contains(adj.ker(tol), cap, tol))
        throw condition_violation(
            "kernel_condition",
            "weak_lebesgue_type: M ^ dom of the adjoint is not contained in its kernel");

    lebesgue_split s = detail::make_split(t, m, tol);
    if (!s.t1_is_operator)
        throw internal_consistency("weak_lebesgue_type: projected part t1 is not an operator");
    if (!s.t2_is_singular)
        throw internal_consistency("weak_lebesgue_type: projected part t2 is not singular");
    // Canonical form of the singular part: its range closure decomposes as
    // clos mul T (+) L with L meeting dom T* trivially, and
    // (t2)** = clos dom T** x (clos mul T (+) L).
    subspace mprime = s.canonical_m;
    subspace l = intersect(mprime, complement(t.mul(tol)), tol);
    if (intersect(l, adj.dom(tol), tol).dim() != 0)
        throw internal_consistency("weak_lebesgue_type: parameter component meets dom T*");
    linear_relation expected = linear_relation::product_space(t.closure().dom(tol), mprime);
    if (!relations_equal(s.t2.closure(), expected, tol))
        throw internal_consistency("weak_lebesgue_type: singular part closure formula failed");
    return s;
}

/// The canonical subspace M = clos ran t2 of a singular part, with its
/// component L orthogonal to mul T** inside M. For every Lebesgue type
/// split in finite dimension L is trivial (dom T* is closed).
struct canonical_subspaces {
    subspace m;
    subspace l;
};

inline canonical_subspaces canonical_subspace(const lebesgue_split& s,
                                              const tolerance_config& tol = {}) {
    if (!s.t2_is_singular)
        throw not_singular("canonical_subspace: the split's second part is not singular");
    linear_relation t = rel_sum(s.t1, s.t2, tol);
    subspace m = s.t2.closure().ran(tol);
    subspace l = intersect(m, complement(t.closure().mul(tol)), tol);
    // A singular part's closure is the product of the domain closure with M.
    linear_relation expected = linear_relation::product_space(t.closure().dom(tol), m);
    if (!relations_equal(s.t2.closure(), expected, tol))
        throw internal_consistency("canonical_subspace: singular product formula failed");
    return {m, l};
}

/// Equivalent range conditions of an orthogonal range decomposition: the
/// three statements hold or fail together; a numeric disagreement signals
/// tolerance breakdown.
struct range_split_report {
    bool ran_t1_in_ran_t = false;
    bool ran_t2_in_ran_t = false;
    bool direct_sum = false;
    double residual_t1 = 0.0;
    double residual_t2 = 0.0;
    double residual_sum = 0.0;
};

inline range_split_report range_split_equivalences(const lebesgue_split& s,
                                                   const tolerance_config& tol = {}) {
    linear_relation t = rel_sum(s.t1, s.t2, tol);
    subspace rt = t.ran(tol);
    subspace r1 = s.t1.ran(tol);
    subspace r2 = s.t2.ran(tol);
    range_split_report rep;
    rep.residual_t1 = containment_residual(rt, r1);
    rep.residual_t2 = containment_residual(rt, r2);
    rep.ran_t1_in_ran_t = rep.residual_t1 <= tol.contain;
    rep.ran_t2_in_ran_t = rep.residual_t2 <= tol.contain;
    subspace direct = sum(r1, r2, tol);
    rep.residual_sum = gap(rt, direct);
    rep.direct_sum = rep.residual_sum <= tol.eq;
    if (rep.ran_t1_in_ran_t != rep.ran_t2_in_ran_t || rep.ran_t1_in_ran_t != rep.direct_sum)
        throw internal_consistency(
            "range_split_equivalences: the equivalent conditions disagree");
    return rep;
}

/// The equivalent relation U T V for orthogonal U on K and V on H. The
/// Lebesgue and weak Lebesgue decompositions transport through this map
/// part by part.
inline linear_relation unitary_transform(const linear_relation& t, const Mat& u, const Mat& v,
                                         const tolerance_config& tol = {}) {
    if (u.rows() != t.dim_k() || u.cols() != t.dim_k() || v.rows() != t.dim_h() ||
        v.cols() != t.dim_h())
        throw dimension_mismatch("unitary_transform: factor shapes do not match the relation");
    if (max_abs(u.transpose() * u - Mat::Identity(u.rows(), u.rows())) > tol.orth ||
        max_abs(v.transpose() * v - Mat::Identity(v.rows(), v.rows())) > tol.orth)
        throw not_orthogonal("unitary_transform: factors are not orthogonal within tolerance");
    // Pairs (f, U g) with (V f, g) in T, i.e. blockwise (V^T h, U g).
    Mat w(t.dim_h() + t.dim_k(), t.graph().dim());
    w.topRows(t.dim_h()) = v.transpose() * t.graph_h_block();
    w.bottomRows(t.dim_k()) = u * t.graph_k_block();
    return linear_relation(t.dim_h(), t.dim_k(), subspace(t.dim_h() + t.dim_k(), w, tol));
}

}  // namespace relkit
