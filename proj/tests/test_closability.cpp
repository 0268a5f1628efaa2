#include "test_helpers.hpp"

using namespace relkit;
using relkit_test::make_mixed_relation;
using relkit_test::mat2;
using relkit_test::vec2;

TEST_CASE("truncation of a diagonal operator cuts the spectrum") {
    linear_relation t = linear_relation::from_operator(mat2(1, 0, 0, 3));
    truncation_sequence seq = make_truncation_sequence(t, {1.0, 3.0});
    REQUIRE(seq.operators.size() == 2);
    CHECK(max_abs(seq.operators[0] - mat2(1, 0, 0, 0)) < 1e-12);
    CHECK(max_abs(seq.operators[1] - mat2(1, 0, 0, 3)) < 1e-12);
    CHECK(closability_from_sequence(t, seq));
}

TEST_CASE("truncation of the zero operator vanishes") {
    linear_relation t = linear_relation::from_operator(Mat::Zero(2, 2));
    truncation_sequence seq = make_truncation_sequence(t, {1.0, 2.0});
    for (const Mat& op : seq.operators) CHECK(max_abs(op) == 0.0);
    CHECK(closability_from_sequence(t, seq));
}

TEST_CASE("terminal truncation reproduces the operator norms") {
    rng_t rng(83);
    Mat m = random_gaussian(rng, 4, 4);
    linear_relation t = linear_relation::from_operator(m);
    const double top = spectral_norm(m) + 1.0;
    truncation_sequence seq = make_truncation_sequence(t, {0.25 * top, 0.5 * top, top});
    for (int j = 0; j < 4; ++j) {
        Vec f = Vec::Zero(4);
        f(j) = 1.0;
        CHECK(std::abs((seq.operators.back() * f).norm() - (m * f).norm()) <= 1e-10);
    }
    // The eigen data of the gram square root matches the singular values.
    Vec sv = singular_values(m);
    Vec lam = seq.eigenvalues;
    std::sort(lam.data(), lam.data() + lam.size(), std::greater<double>());
    for (int i = 0; i < 4; ++i) CHECK(std::abs(lam(i) - sv(i)) < 1e-9);
}

TEST_CASE("truncations are contractively dominated") {
    rng_t rng(89);
    for (int i = 0; i < 25; ++i) {
        linear_relation t = lebesgue(random_relation_mixed(rng, 5)).t1;
        subspace d = t.dom();
        double top = 0.1;
        if (d.dim() > 0) top = spectral_norm(apply_columns(t, d.frame())) + 0.5;
        truncation_sequence seq = make_truncation_sequence(t, {0.5 * top, top});
        for (const Mat& op : seq.operators) {
            auto w = dominates(linear_relation::from_operator(op), t);
            REQUIRE(w.has_value());
            CHECK(w->c_min <= 1.0 + 1e-8);
        }
    }
}

TEST_CASE("deflated sequences fail the supremum test") {
    linear_relation t = linear_relation::from_operator(mat2(1, 0, 0, 3));
    truncation_sequence seq = make_truncation_sequence(t, {1.0, 3.0});
    for (Mat& op : seq.operators) op *= 0.5;
    CHECK_FALSE(closability_from_sequence(t, seq));
}

TEST_CASE("non-monotone sequences are rejected outright") {
    linear_relation t = linear_relation::from_operator(mat2(1, 0, 0, 3));
    truncation_sequence seq = make_truncation_sequence(t, {1.0, 3.0});
    std::swap(seq.operators[0], seq.operators[1]);
    CHECK_THROWS_AS(closability_from_sequence(t, seq), monotonicity_violation);
}

TEST_CASE("truncation requires a regular relation and ordered levels") {
    CHECK_THROWS_AS(make_truncation_sequence(make_mixed_relation(), {1.0}), not_regular);
    linear_relation t = linear_relation::from_operator(mat2(1, 0, 0, 3));
    CHECK_THROWS_AS(make_truncation_sequence(t, {2.0, 1.0}), error);
}

TEST_CASE("projection defect values") {
    rng_t rng(97);
    linear_relation op = linear_relation::from_operator(random_gaussian(rng, 2, 2));
    Mat w = op.graph().frame();
    for (int j = 0; j < w.cols(); ++j)
        CHECK(projection_defect(op, Vec(w.col(j).head(2)), Vec(w.col(j).tail(2))) < 1e-14);

    linear_relation t = make_mixed_relation();
    CHECK(std::abs(projection_defect(t, vec2(1, 0), vec2(1, 1)) - 1.0) < 1e-10);

    linear_relation prod = linear_relation::product_space(
        relkit_test::span_of({vec2(1, 0)}, 2), relkit_test::span_of({vec2(1, 0)}, 2));
    CHECK(std::abs(projection_defect(prod, vec2(1, 0), vec2(1, 0)) - 1.0) < 1e-10);

    CHECK_THROWS_AS(projection_defect(t, vec2(0, 1), vec2(0, 0)), not_in_graph);
}

TEST_CASE("metric defect of the scalar identity") {
    Mat one(1, 1);
    one << 1.0;
    linear_relation t = linear_relation::from_operator(one);
    Vec f(1), fp(1);
    f << 1.0;
    fp << 1.0;
    metric_value mv = metric_defect(t, f, fp);
    CHECK(mv.confident);
    CHECK(std::abs(mv.value - 1.0) < 1e-10);
}

TEST_CASE("metric defect of the mixed relation matches the projection complement") {
    linear_relation t = make_mixed_relation();
    Vec f = vec2(1, 0);
    Vec fp = vec2(1, 1);
    metric_value mv = metric_defect(t, f, fp);
    CHECK(mv.confident);
    const double complement_value = fp.squaredNorm() - projection_defect(t, f, fp);
    CHECK(std::abs(mv.value - 1.0) < 1e-8);
    CHECK(std::abs(mv.value - complement_value) < 1e-8);
}

TEST_CASE("metric defect of the zero operator vanishes") {
    linear_relation t = linear_relation::from_operator(Mat::Zero(2, 2));
    metric_value mv = metric_defect(t, vec2(1, 0), vec2(0, 0));
    CHECK(std::abs(mv.value) < 1e-10);
}

TEST_CASE("metric regularity matches the algebraic classification") {
    rng_t rng(101);
    linear_relation op = linear_relation::from_operator(random_gaussian(rng, 2, 2));
    CHECK(is_regular_metric(op));
    CHECK_FALSE(is_regular_metric(make_mixed_relation()));
    linear_relation prod = linear_relation::product_space(
        relkit_test::span_of({vec2(1, 0)}, 2), relkit_test::span_of({vec2(0, 1)}, 2));
    CHECK_FALSE(is_regular_metric(prod));
}

TEST_CASE("metric and projection routes agree on a random corpus") {
    tolerance_config tol;
    rng_t rng(103);
    for (int i = 0; i < 60; ++i) {
        linear_relation t = random_relation_mixed(rng, 5, tol);
        Mat w = t.graph().frame();
        if (w.cols() == 0) continue;
        for (int probe = 0; probe < 5; ++probe) {
            Vec pair = w * random_gaussian(rng, static_cast<int>(w.cols()), 1);
            Vec f = pair.head(t.dim_h());
            Vec fp = pair.tail(t.dim_k());
            metric_value mv = metric_defect(t, f, fp, tol);
            const double direct = fp.squaredNorm() - projection_defect(t, f, fp, tol);
            CHECK(std::abs(mv.value - direct) <= 1e-6 * (1.0 + fp.squaredNorm()));
            CHECK(mv.confident);
        }
        CHECK(is_regular_metric(t, tol) == is_regular(t, tol));
    }
}
