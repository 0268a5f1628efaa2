#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relkit/closability.hpp"
#include "relkit/decompose.hpp"
#include "relkit/document.hpp"
#include "relkit/dominate.hpp"
#include "relkit/generate.hpp"
#include "relkit/pairs.hpp"

namespace relkit {

/// Collects named residual checks for one property case.
struct check_recorder {
    int checks = 0;
    double worst = 0.0;
    std::vector<std::pair<std::string, double>> failed;

    void check(const std::string& name, double residual, double tolerance) {
        ++checks;
        worst = std::max(worst, residual);
        if (!(residual <= tolerance)) failed.emplace_back(name, residual);
    }
    void expect(const std::string& name, bool ok) { check(name, ok ? 0.0 : 1.0, 0.5); }
    bool ok() const { return failed.empty(); }
};

struct suite_result {
    std::string name;
    int cases = 0;
    int checks = 0;
    int failures = 0;
    double worst_residual = 0.0;
    std::vector<std::string> failed_checks;
};

struct verify_outcome {
    std::vector<suite_result> suites;
    bool all_pass = true;
    json reproducer;  ///< minimized document for the first failing case, or null
};

namespace detail {

inline rng_t case_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t index,
                      std::uint64_t salt) {
    std::uint64_t x = seed;
    x ^= 0x9e3779b97f4a7c15ULL * (suite + 1);
    x ^= 0xbf58476d1ce4e5b9ULL * (index + 1);
    x ^= 0x94d049bb133111ebULL * (salt + 1);
    return rng_t(x);
}

inline json relation_reproducer(const linear_relation& t) {
    return json{{"kind", "graph_span"},
                {"dim_h", t.dim_h()},
                {"dim_k", t.dim_k()},
                {"payload", json{{"generators", matrix_to_json(Mat(t.graph().frame().transpose()))}}}};
}

using relation_case_fn =
    std::function<void(rng_t& aux_rng, const linear_relation& t, check_recorder& rec)>;

inline bool case_fails(const relation_case_fn& fn, std::uint64_t seed, std::uint64_t suite,
                       std::uint64_t index, const linear_relation& t) {
    check_recorder rec;
    rng_t aux = case_rng(seed, suite, index, 1);
    try {
        fn(aux, t, rec);
    } catch (const std::exception&) {
        return true;
    }
    return !rec.ok();
}

/// Greedily drops graph generators while the case keeps failing.
inline linear_relation minimize_failure(const relation_case_fn& fn, std::uint64_t seed,
                                        std::uint64_t suite, std::uint64_t index,
                                        linear_relation t, const tolerance_config& tol) {
    bool progress = true;
    while (progress && t.graph().dim() > 1) {
        progress = false;
        for (int j = 0; j < t.graph().dim(); ++j) {
            Mat w = t.graph().frame();
            Mat reduced(w.rows(), w.cols() - 1);
            reduced << w.leftCols(j), w.rightCols(w.cols() - 1 - j);
            linear_relation candidate =
                linear_relation::from_graph_span(t.dim_h(), t.dim_k(), reduced, tol);
            if (case_fails(fn, seed, suite, index, candidate)) {
                t = candidate;
                progress = true;
                break;
            }
        }
    }
    return t;
}

inline void run_relation_suite(verify_outcome& out, const std::string& name,
                               std::uint64_t suite_id, std::uint64_t seed, int count,
                               int max_dim, const tolerance_config& tol,
                               const relation_case_fn& fn) {
    suite_result res;
    res.name = name;
    for (int i = 0; i < count; ++i) {
        rng_t gen = case_rng(seed, suite_id, static_cast<std::uint64_t>(i), 0);
        linear_relation t = random_relation_mixed(gen, max_dim, tol);
        check_recorder rec;
        rng_t aux = case_rng(seed, suite_id, static_cast<std::uint64_t>(i), 1);
        bool threw = false;
        try {
            fn(aux, t, rec);
        } catch (const std::exception& e) {
            threw = true;
            rec.failed.emplace_back(std::string("exception: ") + e.what(), 1.0);
        }
        res.cases += 1;
        res.checks += rec.checks;
        res.worst_residual = std::max(res.worst_residual, rec.worst);
        if (!rec.ok() || threw) {
            res.failures += 1;
            for (const auto& f : rec.failed)
                if (res.failed_checks.size() < 8) res.failed_checks.push_back(f.first);
            if (out.reproducer.is_null()) {
                linear_relation shrunk =
                    minimize_failure(fn, seed, suite_id, static_cast<std::uint64_t>(i), t, tol);
                out.reproducer = relation_reproducer(shrunk);
                out.reproducer["suite"] = name;
                out.reproducer["case_index"] = i;
            }
        }
    }
    out.all_pass = out.all_pass && res.failures == 0;
    out.suites.push_back(std::move(res));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Property cases, one function per theorem cluster.
// ---------------------------------------------------------------------------

inline void case_subspace_algebra(rng_t&, const linear_relation& t, check_recorder& rec,
                                  const tolerance_config& tol) {
    subspace s1 = t.dom(tol);
    subspace s2 = t.ker(tol);
    rec.check("complement_involution", gap(complement(complement(s1)), s1), tol.eq);
    const int dsum = sum(s1, s2, tol).dim();
    const int dcap = intersect(s1, s2, tol).dim();
    rec.expect("dimension_formula", s1.dim() + s2.dim() == dsum + dcap);
    Mat p = t.ran(tol).projector();
    rec.check("projector_idempotent", max_abs(p * p - p), 10.0 * tol.orth);
    rec.check("projector_symmetric", max_abs(p - p.transpose()), 10.0 * tol.orth);
    rec.expect("sum_monotone", contains(sum(s1, s2, tol), s1, tol));
    rec.expect("intersect_monotone", contains(s1, intersect(s1, s2, tol), tol));
}

inline void case_duality(rng_t& aux, const linear_relation& t, check_recorder& rec,
                         const tolerance_config& tol) {
    linear_relation adj = t.adjoint(tol);
    rec.check("dom_perp_is_mul_adjoint", gap(complement(t.dom(tol)), adj.mul(tol)), tol.eq);
    rec.check("ran_perp_is_ker_adjoint", gap(complement(t.ran(tol)), adj.ker(tol)), tol.eq);
    rec.check("adjoint_dom_perp_is_mul", gap(complement(adj.dom(tol)), t.mul(tol)), tol.eq);
    rec.check("adjoint_ran_perp_is_ker", gap(complement(adj.ran(tol)), t.ker(tol)), tol.eq);
    rec.check("h_splits_dom_plus_adjoint_ran",
              gap(sum(t.dom(tol), adj.ran(tol), tol), subspace::full(t.dim_h())), tol.eq);
    rec.check("k_splits_adjoint_dom_plus_ran",
              gap(sum(adj.dom(tol), t.ran(tol), tol), subspace::full(t.dim_k())), tol.eq);
    rec.check("adjoint_involution", gap(adj.adjoint(tol).graph(), t.graph()), tol.eq);
    rec.check("closure_is_identity", gap(t.closure().graph(), t.graph()), tol.eq);

    // Adjoint pairing: every generator of T* pairs correctly with every
    // generator of T, independent of how the adjoint was computed.
    if (t.graph().dim() > 0 && adj.graph().dim() > 0) {
        Mat lhs = t.graph_k_block().transpose() * adj.graph_h_block();
        Mat rhs = t.graph_h_block().transpose() * adj.graph_k_block();
        rec.check("adjoint_pairing", max_abs(lhs - rhs), tol.eq);
    }

    // Product adjoint inclusion, with equality for an everywhere-defined
    // bounded factor on the left.
    std::uniform_int_distribution<int> dimdist(1, 4);
    linear_relation t1 =
        linear_relation::from_operator(random_gaussian(aux, dimdist(aux), t.dim_k()), tol);
    linear_relation prod = rel_product(t1, t, tol);
    linear_relation lhs = rel_product(t.adjoint(tol), t1.adjoint(tol), tol);
    linear_relation rhs = prod.adjoint(tol);
    rec.check("product_adjoint_inclusion", containment_residual(rhs.graph(), lhs.graph()),
              tol.contain);
    rec.check("product_adjoint_equality_bounded", gap(lhs.graph(), rhs.graph()), tol.eq);
}

inline void case_gram(rng_t&, const linear_relation& t, check_recorder& rec,
                      const tolerance_config& tol) {
    linear_relation g = gram(t, tol);
    rec.expect("gram_nonnegative", is_nonnegative(g, tol));
    rec.expect("gram_selfadjoint", is_selfadjoint(g, tol));
    rec.check("gram_mul_is_adjoint_mul", gap(g.mul(tol), t.adjoint(tol).mul(tol)), tol.eq);
    linear_relation shifted = rel_sum(g, linear_relation::identity(t.dim_h(), tol), tol);
    rec.check("gram_plus_identity_surjective",
              gap(shifted.ran(tol), subspace::full(t.dim_h())), tol.eq);
}

inline void case_projection_lemmas(rng_t& aux, const linear_relation& t, check_recorder& rec,
                                   const tolerance_config& tol) {
    const int dk = t.dim_k();
    std::uniform_int_distribution<int> qdim(0, dk);
    subspace q = random_subspace(aux, dk, qdim(aux), tol);

    // Splitting through a projector recovers T exactly when Q leaves the
    // multivalued part invariant.
    subspace m = t.mul(tol);
    bool invariant = true;
    for (int j = 0; j < m.dim(); ++j) {
        Vec projected = q.project(m.frame().col(j));
        if (projected.norm() > tol.contain && !contains(m, projected, tol)) invariant = false;
    }
    linear_relation recombined =
        rel_sum(apply_left_projection(t, complement(q), tol), apply_left_projection(t, q, tol), tol);
    const bool equal = relations_equal(recombined, t, tol);
    rec.expect("projector_split_iff_mul_invariant", equal == invariant);
    rec.expect("projector_split_contains_t", graph_contains(recombined, t, tol));

    // Engineered invariant choice: Q = mul T itself always recombines.
    linear_relation recombined_mul =
        rel_sum(apply_left_projection(t, complement(m), tol), apply_left_projection(t, m, tol), tol);
    rec.check("projector_split_mul_choice", gap(recombined_mul.graph(), t.graph()), tol.eq);

    // Engineered violating choice: tilt one multivalued direction out of mul T.
    if (m.dim() > 0 && m.dim() < dk) {
        Vec v = m.frame().col(0);
        Vec w = complement(m).frame().col(0);
        Mat tilt = (v + w) / std::sqrt(2.0);
        subspace tilted = subspace::span(tilt, tol);
        bool tilted_invariant = true;
        for (int j = 0; j < m.dim(); ++j) {
            Vec projected = tilted.project(m.frame().col(j));
            if (projected.norm() > tol.contain && !contains(m, projected, tol))
                tilted_invariant = false;
        }
        if (!tilted_invariant) {
            linear_relation strict = rel_sum(apply_left_projection(t, complement(tilted), tol),
                                             apply_left_projection(t, tilted, tol), tol);
            rec.expect("projector_split_violation_strict",
                       !relations_equal(strict, t, tol) && graph_contains(strict, t, tol));
        }
    }

    // Adjoint of the projected relation: (QT)* = T* Q, with the domain and
    // kernel formulas of the product T* Q.
    linear_relation qt = apply_left_projection(t, q, tol);
    linear_relation adj_qt = qt.adjoint(tol);
    linear_relation qop = linear_relation::from_operator(q.projector(), tol);
    linear_relation tstarq = rel_product(t.adjoint(tol), qop, tol);
    rec.check("projected_adjoint_product", gap(adj_qt.graph(), tstarq.graph()), tol.eq);

    linear_relation adj = t.adjoint(tol);
    subspace expected_dom = sum(complement(q), intersect(adj.dom(tol), q, tol), tol);
    rec.check("projected_adjoint_domain", gap(tstarq.dom(tol), expected_dom), tol.eq);
    subspace expected_ker = sum(complement(q), intersect(adj.ker(tol), q, tol), tol);
    rec.check("projected_adjoint_kernel", gap(tstarq.ker(tol), expected_ker), tol.eq);
}

inline void case_lebesgue(rng_t&, const linear_relation& t, check_recorder& rec,
                          const tolerance_config& tol) {
    lebesgue_split s = lebesgue(t, tol);
    rec.expect("regular_part_is_operator", s.t1_is_operator);
    rec.expect("regular_part_is_regular", s.t1_is_regular);
    rec.expect("singular_part_is_singular", s.t2_is_singular);
    rec.check("reconstruction", gap(rel_sum(s.t1, s.t2, tol).graph(), t.graph()), tol.eq);
    rec.check("range_orthogonality", range_orthogonality_residual(s, tol), tol.contain);
    rec.check("regular_part_contained", containment_residual(t.graph(), s.t1.graph()),
              tol.contain);
    linear_relation expected_sing =
        linear_relation::product_space(t.dom(tol), t.closure().mul(tol));
    rec.check("singular_closure_product", gap(s.t2.closure().graph(), expected_sing.graph()),
              tol.eq);
    canonical_subspaces cs = canonical_subspace(s, tol);
    rec.check("canonical_m_is_mul", gap(cs.m, t.closure().mul(tol)), tol.eq);
    rec.expect("canonical_component_trivial", cs.l.dim() == 0);
    range_split_equivalences(s, tol);  // throws on internal disagreement
    rec.expect("classification_regular", is_regular(t, tol) == (s.t2.ran(tol).dim() == 0));
}

inline void case_lebesgue_type(rng_t& aux, const linear_relation& t, check_recorder& rec,
                               const tolerance_config& tol) {
    linear_relation adj = t.adjoint(tol);
    lebesgue_split canonical = lebesgue(t, tol);
    subspace mul_cl = t.closure().mul(tol);
    subspace ker_adj = adj.ker(tol);

    // Admissible construction: M = mul T** (+) L with L inside ker T*.
    if (ker_adj.dim() > 0) {
        std::uniform_int_distribution<int> ldim(0, ker_adj.dim());
        const int l = ldim(aux);
        subspace lsub = l == 0 ? subspace::zero(t.dim_k())
                               : subspace::span(Mat(ker_adj.frame() * random_gaussian(aux, ker_adj.dim(), l)), tol);
        subspace m = sum(mul_cl, lsub, tol);
        lebesgue_split s = lebesgue_type(t, m, tol);
        rec.check("admissible_t1_matches_lebesgue", gap(s.t1.graph(), canonical.t1.graph()),
                  tol.eq);
        rec.check("admissible_t2_matches_lebesgue", gap(s.t2.graph(), canonical.t2.graph()),
                  tol.eq);
        canonical_subspaces cs = canonical_subspace(s, tol);
        rec.expect("admissible_component_trivial", cs.l.dim() == 0);
        rec.expect("maximality_reflection", contains(m, mul_cl, tol));
    }

    // Random candidates: acceptance must coincide with the two admissibility
    // conditions, and rejections must name the first violated clause.
    std::uniform_int_distribution<int> mdim(0, t.dim_k());
    subspace m = random_subspace(aux, t.dim_k(), mdim(aux), tol);
    const bool cond1 = contains(adj.dom(tol), complement(m), tol);
    const bool cond2 = contains(ker_adj, intersect(m, adj.dom(tol), tol), tol);
    try {
        lebesgue_split s = lebesgue_type(t, m, tol);
        rec.expect("random_m_accept_iff_conditions", cond1 && cond2);
        rec.check("random_m_t1_unique", gap(s.t1.graph(), canonical.t1.graph()), tol.eq);
        rec.check("random_m_t2_unique", gap(s.t2.graph(), canonical.t2.graph()), tol.eq);
    } catch (const condition_violation& e) {
        rec.expect("random_m_reject_iff_conditions", !(cond1 && cond2));
        rec.expect("random_m_clause_named",
                   e.clause() == (cond1 ? "kernel_condition" : "complement_condition"));
    }
}

inline void case_weak_coincidence(rng_t&, const linear_relation& t, check_recorder& rec,
                                  const tolerance_config& tol) {
    lebesgue_split weak = weak_lebesgue(t, tol);
    lebesgue_split strong = lebesgue(t, tol);
    rec.check("weak_equals_strong_t1", gap(weak.t1.graph(), strong.t1.graph()), tol.eq);
    rec.check("weak_equals_strong_t2", gap(weak.t2.graph(), strong.t2.graph()), tol.eq);
    // Regular/singular parts of the operator part reproduce those of T.
    lebesgue_split of_op = lebesgue(weak.t1, tol);
    rec.check("reg_of_op_part", gap(of_op.t1.graph(), strong.t1.graph()), tol.eq);
    linear_relation sing_sum = rel_sum(of_op.t2, weak.t2, tol);
    rec.check("sing_splits_through_op_part", gap(sing_sum.graph(), strong.t2.graph()), tol.eq);

    // Weak type splits: any admissible M produces the weak decomposition.
    linear_relation adj = t.adjoint(tol);
    subspace ker_adj = adj.ker(tol);
    subspace m = sum(t.mul(tol), ker_adj, tol);
    lebesgue_split s = weak_lebesgue_type(t, m, tol);
    rec.check("weak_type_t1_unique", gap(s.t1.graph(), weak.t1.graph()), tol.eq);
    rec.check("weak_type_t2_unique", gap(s.t2.graph(), weak.t2.graph()), tol.eq);
}

inline void case_domination(rng_t& aux, const linear_relation& t, check_recorder& rec,
                            const tolerance_config& tol) {
    // Reflexivity.
    auto self = dominates(t, t, tol);
    rec.expect("reflexive", self.has_value());
    if (self) rec.check("reflexive_residual", self->residual, tol.contain);

    // Chain via projections, and the composed witness.
    std::uniform_int_distribution<int> qdim(0, t.dim_k());
    subspace q1 = sum(t.mul(tol), random_subspace(aux, t.dim_k(), qdim(aux), tol), tol);
    linear_relation s2 = apply_left_projection(t, q1, tol);
    subspace q2 = sum(s2.mul(tol), random_subspace(aux, t.dim_k(), qdim(aux), tol), tol);
    linear_relation s3 = apply_left_projection(s2, q2, tol);
    auto w21 = dominates(s2, t, tol);
    auto w32 = dominates(s3, s2, tol);
    rec.expect("chain_low", w21.has_value());
    rec.expect("chain_high", w32.has_value());
    if (w21 && w32) {
        Mat composed = w32->c * w21->c;
        rec.check("transitive_composition", witness_residual(s3, t, composed),
                  tol.contain * std::max(1.0, max_abs(composed)));
    }

    // The regular part is contractively dominated by T.
    lebesgue_split ls = lebesgue(t, tol);
    auto c = min_constant(ls.t1, t, tol);
    rec.expect("regular_part_constant_exists", c.has_value());
    if (c) rec.check("regular_part_contractive", std::max(0.0, *c - 1.0), tol.contain);

    // Witness transport to regular and operator parts.
    if (w21) {
        domination_witness reg = transport_to_regular_parts(s2, t, *w21, tol);
        rec.check("transport_regular_residual", reg.residual, tol.contain);
        domination_witness op = transport_to_operator_parts(s2, t, *w21, tol);
        rec.check("transport_operator_residual", op.residual, tol.contain);
    }

    // Maximality: the operator part of any distinguished split is dominated
    // by T_op; for type splits the regular part is dominated by T_reg.
    lebesgue_split weak = weak_lebesgue(t, tol);
    linear_relation t1 = apply_left_projection(t, complement(q1), tol);
    if (is_operator(t1, tol)) {
        auto wmax = dominates(t1, weak.t1, tol);
        rec.expect("operator_part_maximal", wmax.has_value());
        if (wmax) rec.check("operator_part_contractive", std::max(0.0, wmax->c_min - 1.0),
                            tol.contain);
    }
}

inline void case_domlemma_equivalence(rng_t& aux, const linear_relation&, check_recorder& rec,
                                      const tolerance_config& tol) {
    // Operator pairs with varied domains and engineered kernel defects: the
    // witness route and the constant route must agree on feasibility.
    std::uniform_int_distribution<int> d(1, 4);
    const int dh = d(aux);
    const int dk1 = d(aux);
    const int dk2 = d(aux);
    std::uniform_int_distribution<int> domdim(0, dh);
    linear_relation s2 = random_relation(aux, dh, dk2, domdim(aux), 0, tol);
    linear_relation s1 = random_relation(aux, dh, dk1, domdim(aux), 0, tol);
    auto w = dominates(s1, s2, tol);
    auto c = min_constant(s1, s2, tol);
    rec.expect("domlemma_feasibility_agreement", w.has_value() == c.has_value());
    if (w && c) {
        rec.check("domlemma_constant_vs_canonical", std::abs(w->c_min - *c),
                  tol.contain * (1.0 + *c));
        rec.check("witness_residual", w->residual, tol.contain);
    }
}

inline void case_metric(rng_t& aux, const linear_relation& t, check_recorder& rec,
                        const tolerance_config& tol) {
    Mat w = t.graph().frame();
    if (w.cols() > 0) {
        for (int probe = 0; probe < 5; ++probe) {
            Vec coeff = random_gaussian(aux, static_cast<int>(w.cols()), 1);
            Vec pair = w * coeff;
            Vec f = pair.head(t.dim_h());
            Vec fp = pair.tail(t.dim_k());
            metric_value mv = metric_defect(t, f, fp, tol);
            const double direct = fp.squaredNorm() - projection_defect(t, f, fp, tol);
            rec.check("metric_vs_projection", std::abs(mv.value - direct),
                      tol.metric * (1.0 + fp.squaredNorm()));
            rec.expect("metric_confident", mv.confident);
        }
    }
    rec.expect("metric_regularity_agreement", is_regular_metric(t, tol) == is_regular(t, tol));
}

inline void case_truncation(rng_t&, const linear_relation& t, check_recorder& rec,
                            const tolerance_config& tol) {
    linear_relation s = lebesgue(t, tol).t1;  // regular by construction
    subspace d = s.dom(tol);
    double top = 0.0;
    if (d.dim() > 0) top = spectral_norm(apply_columns(s, d.frame(), tol));
    std::vector<double> levels{0.25 * top + 0.1, 0.5 * top + 0.2, top + 1.0};
    truncation_sequence seq = make_truncation_sequence(s, levels, tol);

    // Monotone on eigenvectors, exact up to roundoff.
    for (int j = 0; j < seq.eigenvectors.cols(); ++j) {
        Vec f = seq.eigenvectors.col(j);
        double prev = -1.0;
        bool mono = true;
        for (const Mat& op : seq.operators) {
            const double cur = (op * f).norm();
            if (cur < prev - 1e-12) mono = false;
            prev = cur;
        }
        rec.expect("eigenvector_monotone", mono);
    }
    // Terminal level reaches ||T f|| on the domain frame.
    for (int j = 0; j < d.dim(); ++j) {
        Vec f = d.frame().col(j);
        const double tn = (seq.operators.back() * f).norm();
        const double tf = apply(s, f, tol).norm();
        rec.check("terminal_equality", std::abs(tn - tf), 1e-10 * (1.0 + tf));
    }
    rec.expect("sequence_certifies_closability", closability_from_sequence(s, seq, tol));

    // Each truncation is contractively dominated by T.
    for (const Mat& op : seq.operators) {
        linear_relation tn = linear_relation::from_operator(op, tol);
        auto w = dominates(tn, s, tol);
        rec.expect("truncation_dominated", w.has_value());
        if (w) rec.check("truncation_contractive", std::max(0.0, w->c_min - 1.0), tol.contain);
    }

    // A uniformly deflated sequence must fail the supremum test.
    if (d.dim() > 0 && top > 0.1) {
        truncation_sequence bad = seq;
        for (Mat& op : bad.operators) op *= 0.5;
        rec.expect("deflated_sequence_rejected", !closability_from_sequence(s, bad, tol));
        // And an out-of-order sequence must violate monotonicity.
        truncation_sequence swapped = seq;
        std::swap(swapped.operators.front(), swapped.operators.back());
        bool nonmonotone_caught = false;
        try {
            closability_from_sequence(s, swapped, tol);
        } catch (const monotonicity_violation&) {
            nonmonotone_caught = true;
        }
        const bool distinct =
            max_abs(seq.operators.front() - seq.operators.back()) > 1e-6 * (1.0 + top);
        if (distinct) rec.expect("nonmonotone_sequence_rejected", nonmonotone_caught);
    }
}

inline void case_equivariance(rng_t& aux, const linear_relation& t, check_recorder& rec,
                              const tolerance_config& tol) {
    Mat u = random_orthogonal(aux, t.dim_k());
    Mat v = random_orthogonal(aux, t.dim_h());
    linear_relation tt = unitary_transform(t, u, v, tol);
    lebesgue_split original = lebesgue(t, tol);
    lebesgue_split transformed = lebesgue(tt, tol);
    rec.check("lebesgue_t1_transport",
              gap(transformed.t1.graph(), unitary_transform(original.t1, u, v, tol).graph()),
              tol.eq);
    rec.check("lebesgue_t2_transport",
              gap(transformed.t2.graph(), unitary_transform(original.t2, u, v, tol).graph()),
              tol.eq);
    lebesgue_split weak0 = weak_lebesgue(t, tol);
    lebesgue_split weak1 = weak_lebesgue(tt, tol);
    rec.check("weak_t1_transport",
              gap(weak1.t1.graph(), unitary_transform(weak0.t1, u, v, tol).graph()), tol.eq);
    rec.check("weak_t2_transport",
              gap(weak1.t2.graph(), unitary_transform(weak0.t2, u, v, tol).graph()), tol.eq);
    rec.check("mul_transport", gap(tt.mul(tol), subspace::span(Mat(u * t.mul(tol).frame()), tol)),
              tol.eq);
}

/// Pair cases draw their own matrices; kept separate from the relation corpus.
inline void case_pairs(rng_t& aux, check_recorder& rec, const tolerance_config& tol) {
    std::uniform_int_distribution<int> d(1, 5);
    const int dh = d(aux);
    const int dk = d(aux);
    const int de = d(aux);
    std::uniform_int_distribution<int> rdist(0, std::min(dh, de));
    const int r = rdist(aux);
    Mat a = r == 0 ? Mat::Zero(dh, de)
                   : Mat(random_gaussian(aux, dh, r) * random_gaussian(aux, r, de));
    Mat b = random_gaussian(aux, dk, de);
    operator_pair pair = pair_relation(a, b, tol);

    subspace ran_a = subspace::span(a, tol);
    rec.check("pair_dom_is_ran_a", gap(pair.relation.dom(tol), ran_a), tol.eq);
    subspace ker_a = complement(subspace::span(Mat(a.transpose()), tol));
    subspace expected_mul = subspace::span(Mat(b * ker_a.frame()), tol);
    rec.check("pair_mul_is_b_ker_a", gap(pair.relation.mul(tol), expected_mul), tol.eq);

    pair_split split = pair_lebesgue(pair, tol);
    rec.check("pair_additivity", max_abs(split.b1 + split.b2 - b), 1e-12 * (1.0 + max_abs(b)));
    subspace ker_b1 = complement(subspace::span(Mat(split.b1.transpose()), tol));
    rec.expect("pair_regular_kernel", contains(ker_b1, ker_a, tol));
    rec.expect("pair_regular_part_operator",
               is_operator(pair_relation(a, split.b1, tol).relation, tol));
    rec.expect("pair_singular_part_singular",
               is_singular(pair_relation(a, split.b2, tol).relation, tol));

    // PSD specialization against the parallel-sum limit oracle.
    std::uniform_int_distribution<int> psize(1, 5);
    const int n = psize(aux);
    std::uniform_int_distribution<int> prank(0, n);
    Mat pa = random_psd(aux, n, prank(aux), tol);
    Mat pb = random_psd(aux, n, prank(aux), tol);
    psd_split ps = psd_pair_decomposition(pa, pb, tol);
    rec.check("psd_additivity", max_abs(ps.b_ac + ps.b_s - pb), 1e-10 * (1.0 + max_abs(pb)));
    rec.check("psd_ac_psd", std::max(0.0, -min_eigenvalue(ps.b_ac)), 1e-10);
    rec.check("psd_s_psd", std::max(0.0, -min_eigenvalue(ps.b_s)), 1e-10);
    rec.check("psd_oracle_gap", psd_oracle_gap(pa, pb, tol), tol.oracle);
    Mat p1 = parallel_sum(pa, pb, tol);
    Mat p2 = parallel_sum(pb, pa, tol);
    rec.check("parallel_sum_symmetric", max_abs(p1 - p2), 1e-9 * (1.0 + max_abs(p1)));
    rec.check("parallel_sum_psd", std::max(0.0, -min_eigenvalue(p1)), 1e-10);
}

/// Runs every property suite with the seeded generator. Deterministic for a
/// fixed (seed, count, dims) triple; single-threaded so reports stay stable.
inline verify_outcome run_verify(std::uint64_t seed, int count, int max_dim,
                                 const tolerance_config& tol = {}) {
    verify_outcome out;
    out.reproducer = json();
    struct named_case {
        const char* name;
        detail::relation_case_fn fn;
    };
    const named_case cases[] = {
        {"subspace_algebra",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_subspace_algebra(r, t, rec, tol);
         }},
        {"duality_identities",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_duality(r, t, rec, tol);
         }},
        {"gram_relation",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_gram(r, t, rec, tol);
         }},
        {"projection_lemmas",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_projection_lemmas(r, t, rec, tol);
         }},
        {"lebesgue_split",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_lebesgue(r, t, rec, tol);
         }},
        {"lebesgue_type_uniqueness",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_lebesgue_type(r, t, rec, tol);
         }},
        {"weak_coincidence",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_weak_coincidence(r, t, rec, tol);
         }},
        {"domination_preorder",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_domination(r, t, rec, tol);
         }},
        {"domination_lemma_equivalence",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_domlemma_equivalence(r, t, rec, tol);
         }},
        {"metric_oracle",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_metric(r, t, rec, tol);
         }},
        {"truncation_sequences",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_truncation(r, t, rec, tol);
         }},
        {"unitary_equivariance",
         [&tol](rng_t& r, const linear_relation& t, check_recorder& rec) {
             case_equivariance(r, t, rec, tol);
         }},
    };
    std::uint64_t suite_id = 0;
    for (const named_case& c : cases)
        detail::run_relation_suite(out, c.name, suite_id++, seed, count, max_dim, tol, c.fn);

    // Pair suite (independent corpus of matrices).
    suite_result pairs_res;
    pairs_res.name = "operator_pairs";
    for (int i = 0; i < count; ++i) {
        rng_t aux = detail::case_rng(seed, suite_id, static_cast<std::uint64_t>(i), 1);
        check_recorder rec;
        bool threw = false;
        std::string what;
        try {
            case_pairs(aux, rec, tol);
        } catch (const std::exception& e) {
            threw = true;
            what = e.what();
        }
        pairs_res.cases += 1;
        pairs_res.checks += rec.checks;
        pairs_res.worst_residual = std::max(pairs_res.worst_residual, rec.worst);
        if (!rec.ok() || threw) {
            pairs_res.failures += 1;
            if (threw && pairs_res.failed_checks.size() < 8)
                pairs_res.failed_checks.push_back("exception: " + what);
            for (const auto& f : rec.failed)
                if (pairs_res.failed_checks.size() < 8) pairs_res.failed_checks.push_back(f.first);
            if (out.reproducer.is_null())
                out.reproducer = json{{"suite", "operator_pairs"}, {"case_index", i}};
        }
    }
    out.all_pass = out.all_pass && pairs_res.failures == 0;
    out.suites.push_back(std::move(pairs_res));
    return out;
}

}  // namespace relkit
