#include "test_helpers.hpp"

using namespace relkit;
using relkit_test::make_mixed_relation;
using relkit_test::mat2;

TEST_CASE("every relation dominates itself") {
    rng_t rng(53);
    for (int i = 0; i < 25; ++i) {
        linear_relation t = random_relation_mixed(rng, 4);
        auto w = dominates(t, t);
        REQUIRE(w.has_value());
        CHECK(w->residual <= 1e-8);
        if (w->canonical_c) CHECK(w->c_min <= 1.0 + 1e-8);
    }
}

TEST_CASE("diagonal operators with scaled entries") {
    linear_relation s1 = linear_relation::from_operator(mat2(1, 0, 0, 0));
    linear_relation s2 = linear_relation::from_operator(mat2(2, 0, 0, 0));
    auto w = dominates(s1, s2);
    REQUIRE(w.has_value());
    REQUIRE(w->canonical_c.has_value());
    CHECK(std::abs(w->c_min - 0.5) < 1e-10);
    CHECK(max_abs(*w->canonical_c - mat2(0.5, 0, 0, 0)) < 1e-10);
    CHECK(w->contractive);

    auto c = min_constant(s1, s2);
    REQUIRE(c.has_value());
    CHECK(std::abs(*c - 0.5) < 1e-10);
}

TEST_CASE("kernel mismatches defeat domination") {
    linear_relation s1 = linear_relation::from_operator(Mat::Identity(2, 2));
    linear_relation s2 = linear_relation::from_operator(mat2(1, 0, 0, 0));
    CHECK_FALSE(dominates(s1, s2).has_value());
    CHECK_FALSE(min_constant(s1, s2).has_value());
}

TEST_CASE("minimal constant of a relation against itself is one") {
    rng_t rng(59);
    linear_relation t = linear_relation::from_operator(random_gaussian(rng, 3, 3));
    auto c = min_constant(t, t);
    REQUIRE(c.has_value());
    CHECK(std::abs(*c - 1.0) < 1e-10);
}

TEST_CASE("regular parts are contractively dominated") {
    rng_t rng(61);
    for (int i = 0; i < 100; ++i) {
        linear_relation t = random_relation_mixed(rng, 5);
        auto c = min_constant(lebesgue(t).t1, t);
        REQUIRE(c.has_value());
        CHECK(*c <= 1.0 + 1e-8);
    }
}

TEST_CASE("witness transport to regular and operator parts") {
    linear_relation t = make_mixed_relation();
    auto self = dominates(t, t);
    REQUIRE(self.has_value());

    // With the identity as witness, the transported witness is the projector
    // complement of the multivalued axis.
    domination_witness identity_witness = *self;
    identity_witness.c = Mat::Identity(2, 2);
    domination_witness reg = transport_to_regular_parts(t, t, identity_witness);
    Mat expected = Mat::Identity(2, 2) - t.mul().projector();
    CHECK(max_abs(reg.c - expected) < 1e-10);
    CHECK(reg.residual <= 1e-8);

    domination_witness op = transport_to_operator_parts(t, t, identity_witness);
    CHECK(max_abs(op.c - expected) < 1e-10);

    // An operator: the operator part is the relation itself and the witness
    // passes through unchanged.
    rng_t rng(67);
    linear_relation a = linear_relation::from_operator(random_gaussian(rng, 2, 2));
    auto wa = dominates(a, a);
    REQUIRE(wa.has_value());
    domination_witness opa = transport_to_operator_parts(a, a, *wa);
    CHECK(max_abs(opa.c - wa->c) < 1e-10);
}

TEST_CASE("stale witnesses are rejected") {
    linear_relation t = make_mixed_relation();
    auto w = dominates(t, t);
    REQUIRE(w.has_value());
    linear_relation other = linear_relation::from_operator(mat2(0, 1, 1, 0));
    domination_witness broken = *w;
    broken.c = mat2(5, 0, 0, 5);
    CHECK_THROWS_AS(transport_to_regular_parts(other, t, broken), stale_witness);
}

TEST_CASE("projected parts are dominated with transported witnesses") {
    rng_t rng(71);
    for (int i = 0; i < 50; ++i) {
        linear_relation t = random_relation_mixed(rng, 4);
        std::uniform_int_distribution<int> d(0, t.dim_k());
        subspace q = sum(t.mul(), random_subspace(rng, t.dim_k(), d(rng)));
        linear_relation s = apply_left_projection(t, q);
        auto w = dominates(s, t);
        REQUIRE(w.has_value());
        domination_witness reg = transport_to_regular_parts(s, t, *w);
        CHECK(reg.residual <= 1e-8);
        domination_witness op = transport_to_operator_parts(s, t, *w);
        CHECK(op.residual <= 1e-8);
    }
}

TEST_CASE("witness composition certifies chains") {
    rng_t rng(73);
    for (int i = 0; i < 50; ++i) {
        linear_relation t = random_relation_mixed(rng, 4);
        std::uniform_int_distribution<int> d(0, t.dim_k());
        subspace q1 = random_subspace(rng, t.dim_k(), d(rng));
        linear_relation s2 = apply_left_projection(t, q1);
        subspace q2 = random_subspace(rng, t.dim_k(), d(rng));
        linear_relation s3 = apply_left_projection(s2, q2);
        auto w21 = dominates(s2, t);
        auto w32 = dominates(s3, s2);
        REQUIRE(w21.has_value());
        REQUIRE(w32.has_value());
        Mat composed = w32->c * w21->c;
        CHECK(witness_residual(s3, t, composed) <= 1e-8 * std::max(1.0, max_abs(composed)));
    }
}

TEST_CASE("feasibility and constant routes agree on operator pairs") {
    tolerance_config tol;
    rng_t rng(79);
    int dominated_seen = 0;
    int refused_seen = 0;
    for (int i = 0; i < 300; ++i) {
        std::uniform_int_distribution<int> d(1, 4);
        const int dh = d(rng);
        std::uniform_int_distribution<int> domdim(0, dh);
        linear_relation s2 = random_relation(rng, dh, d(rng), domdim(rng), 0, tol);
        linear_relation s1 = random_relation(rng, dh, d(rng), domdim(rng), 0, tol);
        auto w = dominates(s1, s2, tol);
        auto c = min_constant(s1, s2, tol);
        CHECK(w.has_value() == c.has_value());
        if (w) {
            ++dominated_seen;
            CHECK(w->residual <= 1e-8);
            CHECK(std::abs(w->c_min - *c) <= 1e-8 * (1.0 + *c));
        } else {
            ++refused_seen;
        }
    }
    // The corpus must exercise both outcomes.
    CHECK(dominated_seen > 0);
    CHECK(refused_seen > 0);
}
