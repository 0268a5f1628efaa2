#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "relkit/subspace.hpp"

namespace relkit {

/// A linear relation T from R^dim_h to R^dim_k: a subspace of the product
/// space, stored with the H-components in the first dim_h coordinates and
/// the K-components below them.
///
/// In finite dimension every graph is closed, so T equals its closure and
/// regular coincides with operator-valued; closure() is exposed anyway so
/// client code written against a second adjoint reads literally.
class linear_relation {
public:
    linear_relation(int dim_h, int dim_k, subspace graph)
        : dim_h_(dim_h), dim_k_(dim_k), graph_(std::move(graph)) {
        if (dim_h_ <= 0 || dim_k_ <= 0)
            throw dimension_mismatch("linear_relation: space dimensions must be positive");
        if (graph_.ambient_dim() != dim_h_ + dim_k_)
            throw dimension_mismatch("linear_relation: graph ambient must equal dim_h + dim_k");
    }

    /// Graph of the everywhere-defined operator f -> m f (m is dim_k x dim_h).
    static linear_relation from_operator(const Mat& m, const tolerance_config& tol = {}) {
        const int dh = static_cast<int>(m.cols());
        const int dk = static_cast<int>(m.rows());
        if (dh == 0 || dk == 0)
            throw dimension_mismatch("from_operator: empty matrix");
        Mat cols(dh + dk, dh);
        cols.topRows(dh) = Mat::Identity(dh, dh);
        cols.bottomRows(dk) = m;
        // Columns are independent by construction; a plain QR orthonormalizes.
        Eigen::HouseholderQR<Mat> qr(cols);
        Mat q = qr.householderQ();
        return linear_relation(dh, dk, subspace(dh + dk, q.leftCols(dh), tol));
    }

    /// Relation spanned by explicit graph vectors (each column stacks an
    /// H-component on top of a K-component).
    static linear_relation from_graph_span(int dim_h, int dim_k, const Mat& pair_columns,
                                           const tolerance_config& tol = {}) {
        if (pair_columns.cols() > 0 && pair_columns.rows() != dim_h + dim_k)
            throw dimension_mismatch("from_graph_span: columns must have dim_h + dim_k entries");
        Mat cols = pair_columns;
        if (cols.size() == 0) cols.resize(dim_h + dim_k, 0);
        return linear_relation(dim_h, dim_k, subspace::span(cols, tol));
    }

    /// The product relation X x Y: dom = ker = X, ran = mul = Y.
    static linear_relation product_space(const subspace& x, const subspace& y) {
        const int dh = x.ambient_dim();
        const int dk = y.ambient_dim();
        Mat frame = Mat::Zero(dh + dk, x.dim() + y.dim());
        frame.block(0, 0, dh, x.dim()) = x.frame();
        frame.block(dh, x.dim(), dk, y.dim()) = y.frame();
        return linear_relation(dh, dk, subspace(dh + dk, frame));
    }

    static linear_relation identity(int n, const tolerance_config& tol = {}) {
        return from_operator(Mat::Identity(n, n), tol);
    }

    /// The zero operator on a prescribed domain, as a relation into R^dim_k.
    static linear_relation zero_on(const subspace& dom, int dim_k) {
        return product_space(dom, subspace::zero(dim_k));
    }

    int dim_h() const { return dim_h_; }
    int dim_k() const { return dim_k_; }
    const subspace& graph() const { return graph_; }

    Mat graph_h_block() const { return graph_.frame().topRows(dim_h_); }
    Mat graph_k_block() const { return graph_.frame().bottomRows(dim_k_); }

    subspace dom(const tolerance_config& tol = {}) const {
        return subspace::span(graph_h_block(), tol);
    }

    subspace ran(const tolerance_config& tol = {}) const {
        return subspace::span(graph_k_block(), tol);
    }

    /// Multivalued part {g : (0, g) in T}, extracted through an exact
    /// intersection with the coordinate block {0} x K so that the rank
    /// policy stays centralized in the subspace machinery.
    subspace mul(const tolerance_config& tol = {}) const {
        Mat zk = Mat::Zero(dim_h_ + dim_k_, dim_k_);
        zk.bottomRows(dim_k_) = Mat::Identity(dim_k_, dim_k_);
        subspace cap = intersect(graph_, subspace(dim_h_ + dim_k_, zk), tol);
        return subspace::span(Mat(cap.frame().bottomRows(dim_k_)), tol);
    }

    /// Kernel {f : (f, 0) in T}, via the inverse relation.
    subspace ker(const tolerance_config& tol = {}) const { return inverse().mul(tol); }

    /// The inverse relation {(g, f) : (f, g) in T}.
    linear_relation inverse() const {
        Mat w(dim_k_ + dim_h_, graph_.dim());
        w.topRows(dim_k_) = graph_k_block();
        w.bottomRows(dim_h_) = graph_h_block();
        return linear_relation(dim_k_, dim_h_, subspace(dim_k_ + dim_h_, w));
    }

    /// Adjoint: complement the graph in the product space, then move blocks
    /// to K x H with a sign flip on the H-part ((f, f') -> (f', -f)).
    linear_relation adjoint(const tolerance_config& tol = {}) const {
        subspace comp = complement(graph_);
        Mat w = comp.frame();
        Mat flipped(dim_k_ + dim_h_, w.cols());
        flipped.topRows(dim_k_) = w.bottomRows(dim_k_);
        flipped.bottomRows(dim_h_) = -w.topRows(dim_h_);
        return linear_relation(dim_k_, dim_h_, subspace(dim_k_ + dim_h_, flipped, tol));
    }

    /// Closure. Graphs are closed in finite dimension, so this is the
    /// identity; kept so formulas involving the closure read literally.
    linear_relation closure() const { return *this; }

private:
    int dim_h_;
    int dim_k_;
    subspace graph_;
};

inline bool relations_equal(const linear_relation& a, const linear_relation& b,
                            const tolerance_config& tol = {}) {
    if (a.dim_h() != b.dim_h() || a.dim_k() != b.dim_k()) return false;
    return subspace_equal(a.graph(), b.graph(), tol);
}

/// Whether graph(inner) is contained in graph(outer).
inline bool graph_contains(const linear_relation& outer, const linear_relation& inner,
                           const tolerance_config& tol = {}) {
    if (outer.dim_h() != inner.dim_h() || outer.dim_k() != inner.dim_k())
        throw dimension_mismatch("graph_contains: relations live between different spaces");
    return contains(outer.graph(), inner.graph(), tol);
}

/// A value of T at f (the unique one when T is an operator). Throws
/// outside_domain when f is not in dom T within tolerance.
inline Vec apply(const linear_relation& t, const Vec& f, const tolerance_config& tol = {}) {
    if (f.size() != t.dim_h()) throw dimension_mismatch("apply: vector dimension mismatch");
    Mat a = t.graph_h_block();
    Vec x = pinv(a, tol.rank_rtol) * f;
    if ((a * x - f).norm() > tol.contain * std::max(1.0, f.norm()))
        throw outside_domain("apply: vector lies outside dom T");
    return t.graph_k_block() * x;
}

/// Relation sum {(f, h + k) : (f, h) in T1, (f, k) in T2}; silently restricts
/// to the joint domain.
inline linear_relation rel_sum(const linear_relation& t1, const linear_relation& t2,
                               const tolerance_config& tol = {}) {
    if (t1.dim_h() != t2.dim_h() || t1.dim_k() != t2.dim_k())
        throw dimension_mismatch("rel_sum: relations live between different spaces");
    const int dh = t1.dim_h();
    const int dk = t1.dim_k();
    const int n = dh + 2 * dk;
    // Pairs (f, h, k) with (f, h) in T1 and (f, k) in T2, as an intersection
    // of two product embeddings in H x K x K.
    Mat sa = Mat::Zero(n, t1.graph().dim() + dk);
    sa.block(0, 0, dh, t1.graph().dim()) = t1.graph_h_block();
    sa.block(dh, 0, dk, t1.graph().dim()) = t1.graph_k_block();
    sa.block(dh + dk, t1.graph().dim(), dk, dk) = Mat::Identity(dk, dk);

    Mat sb = Mat::Zero(n, t2.graph().dim() + dk);
    sb.block(0, 0, dh, t2.graph().dim()) = t2.graph_h_block();
    sb.block(dh + dk, 0, dk, t2.graph().dim()) = t2.graph_k_block();
    sb.block(dh, t2.graph().dim(), dk, dk) = Mat::Identity(dk, dk);

    subspace z = intersect(subspace(n, sa), subspace(n, sb), tol);
    Mat img(dh + dk, z.dim());
    img.topRows(dh) = z.frame().topRows(dh);
    img.bottomRows(dk) = z.frame().middleRows(dh, dk) + z.frame().bottomRows(dk);
    return linear_relation(dh, dk, subspace::span(img, tol));
}

/// Relation product T1 T2 = {(f, f') : (f, phi) in T2, (phi, f') in T1 for
/// some phi}; inner dimensions must match.
inline linear_relation rel_product(const linear_relation& t1, const linear_relation& t2,
                                   const tolerance_config& tol = {}) {
    if (t2.dim_k() != t1.dim_h())
        throw dimension_mismatch("rel_product: inner dimensions do not match");
    const int dh = t2.dim_h();
    const int dm = t2.dim_k();
    const int dk = t1.dim_k();
    const int n = dh + dm + dk;
    // Triples (f, phi, f'): intersect graph(T2) x K with H x graph(T1),
    // then project out the middle block.
    Mat sa = Mat::Zero(n, t2.graph().dim() + dk);
    sa.block(0, 0, dh + dm, t2.graph().dim()) = t2.graph().frame();
    sa.block(dh + dm, t2.graph().dim(), dk, dk) = Mat::Identity(dk, dk);

    Mat sb = Mat::Zero(n, dh + t1.graph().dim());
    sb.block(0, 0, dh, dh) = Mat::Identity(dh, dh);
    sb.block(dh, dh, dm + dk, t1.graph().dim()) = t1.graph().frame();

    subspace z = intersect(subspace(n, sa), subspace(n, sb), tol);
    Mat img(dh + dk, z.dim());
    img.topRows(dh) = z.frame().topRows(dh);
    img.bottomRows(dk) = z.frame().bottomRows(dk);
    return linear_relation(dh, dk, subspace::span(img, tol));
}

/// The projected relation {(f, P_q g) : (f, g) in T} for a subspace q of K.
inline linear_relation apply_left_projection(const linear_relation& t, const subspace& q,
                                             const tolerance_config& tol = {}) {
    if (q.ambient_dim() != t.dim_k())
        throw dimension_mismatch("apply_left_projection: projector lives in the wrong space");
    Mat cols(t.dim_h() + t.dim_k(), t.graph().dim());
    cols.topRows(t.dim_h()) = t.graph_h_block();
    Mat kb = t.graph_k_block();
    if (q.dim() == 0)
        cols.bottomRows(t.dim_k()).setZero();
    else
        cols.bottomRows(t.dim_k()) = q.frame() * (q.frame().transpose() * kb);
    return linear_relation(t.dim_h(), t.dim_k(), subspace::span(cols, tol));
}

/// The nonnegative selfadjoint relation T* T.
inline linear_relation gram(const linear_relation& t, const tolerance_config& tol = {}) {
    return rel_product(t.adjoint(tol), t, tol);
}

inline bool is_operator(const linear_relation& t, const tolerance_config& tol = {}) {
    return t.mul(tol).dim() == 0;
}

/// Regular (= closable): the closure is an operator. Coincides with
/// is_operator in finite dimension; spelled through the closure anyway.
inline bool is_regular(const linear_relation& t, const tolerance_config& tol = {}) {
    return is_operator(t.closure(), tol);
}

/// Singular: decided by dom T* = ker T*, cross-checked against the closure
/// characterization dom T** = ker T**. A disagreement means the tolerance
/// policy broke down, not a mathematical state.
inline bool is_singular(const linear_relation& t, const tolerance_config& tol = {}) {
    linear_relation adj = t.adjoint(tol);
    const bool by_adjoint = subspace_equal(adj.dom(tol), adj.ker(tol), tol);
    linear_relation cl = t.closure();
    const bool by_closure = subspace_equal(cl.dom(tol), cl.ker(tol), tol);
    if (by_adjoint != by_closure)
        throw internal_consistency(
            "is_singular: the adjoint and closure characterizations disagree");
    return by_adjoint;
}

/// Nonnegativity of a relation in one space: the mixed Gram form of the
/// graph generators has no eigenvalue below -tol.
inline bool is_nonnegative(const linear_relation& t, const tolerance_config& tol = {}) {
    if (t.dim_h() != t.dim_k())
        throw dimension_mismatch("is_nonnegative: requires a relation in a single space");
    if (t.graph().dim() == 0) return true;
    Mat a = t.graph_h_block();
    Mat b = t.graph_k_block();
    Mat s = symmetrized(b.transpose() * a);
    const double scale = std::max(1.0, max_abs(s));
    return min_eigenvalue(s) >= -tol.contain * scale;
}

inline bool is_selfadjoint(const linear_relation& t, const tolerance_config& tol = {}) {
    if (t.dim_h() != t.dim_k())
        throw dimension_mismatch("is_selfadjoint: requires a relation in a single space");
    return relations_equal(t, t.adjoint(tol), tol);
}

}  // namespace relkit
