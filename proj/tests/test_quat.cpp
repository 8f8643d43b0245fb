#include <doctest.h>

#include <limits>

#include "quattrack/quat.hpp"
#include "test_util.hpp"

using namespace quattrack;
using test::close;

TEST_SUITE_BEGIN("quat");

TEST_CASE("product of basis units: ij = k") {
    const Quat i = pure({1, 0, 0}), j = pure({0, 1, 0}), k = pure({0, 0, 1});
    CHECK(close(mul(i, j), k));
    // non-commutativity witness
    CHECK(close(mul(i, j), -mul(j, i)));
}

TEST_CASE("product, hand-expanded case") {
    // (1 + i)(1 + j) = 1 + i + j + ij = 1 + i + j + k
    const Quat p{1.0, {1.0, 0.0, 0.0}};
    const Quat q{1.0, {0.0, 1.0, 0.0}};
    CHECK(close(mul(p, q), Quat{1.0, {1.0, 1.0, 1.0}}));
}

TEST_CASE("identity is a two-sided unit") {
    test::Rng rng;
    for (int n = 0; n < 100; ++n) {
        const Quat q = rng.quat();
        CHECK(close(mul(q, Quat::identity()), q));
        CHECK(close(mul(Quat::identity(), q), q));
    }
}

TEST_CASE("conjugation") {
    CHECK(close(conj({1.0, {2.0, 3.0, 4.0}}), Quat{1.0, {-2.0, -3.0, -4.0}}));
    test::Rng rng;
    for (int n = 0; n < 100; ++n) {
        const Quat q = rng.quat();
        CHECK(close(conj(conj(q)), q));
    }
}

TEST_CASE("conjugation reverses products") {
    test::Rng rng;
    for (int n = 0; n < 1000; ++n) {
        const Quat p = rng.quat(), q = rng.quat();
        CHECK(close(conj(mul(p, q)), mul(conj(q), conj(p))));
    }
}

TEST_CASE("norm basics") {
    CHECK(norm(Quat{1.0, {1.0, 1.0, 1.0}}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(norm(Quat::identity()) == 1.0);
    CHECK(norm_sq(Quat{1.0, {1.0, 1.0, 1.0}}) == 4.0);
}

TEST_CASE("norm is multiplicative") {
    test::Rng rng;
    for (int n = 0; n < 1000; ++n) {
        const Quat p = rng.quat(), q = rng.quat();
        const double lhs = norm(mul(p, q));
        const double rhs = norm(p) * norm(q);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs + 1e-300);
    }
}

TEST_CASE("|q|^2 equals q*q and qq*") {
    test::Rng rng;
    for (int n = 0; n < 1000; ++n) {
        const Quat q = rng.quat();
        CHECK(close(scalar_part(mul(conj(q), q)), norm_sq(q)));
        CHECK(close(scalar_part(mul(q, conj(q))), norm_sq(q)));
        CHECK(close(vec(mul(conj(q), q)), Vec3::zero()));
    }
}

TEST_CASE("product is associative") {
    test::Rng rng;
    for (int n = 0; n < 1000; ++n) {
        const Quat p = rng.quat(), q = rng.quat(), r = rng.quat();
        const Quat lhs = mul(mul(p, q), r);
        const Quat rhs = mul(p, mul(q, r));
        const double scale = std::max(1.0, norm(p) * norm(q) * norm(r));
        CHECK(norm(lhs - rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("pure/vec identification") {
    CHECK(close(pure({1, 2, 3}), Quat{0.0, {1.0, 2.0, 3.0}}));
    CHECK(close(vec(Quat{5.0, {1.0, 2.0, 3.0}}), Vec3{1.0, 2.0, 3.0}));
    test::Rng rng;
    for (int n = 0; n < 100; ++n) {
        const Vec3 v = rng.vec();
        CHECK(close(vec(pure(v)), v));
        CHECK(pure(v).s == 0.0);
    }
}

TEST_CASE("conjugating a pure quaternion by a unit one stays pure") {
    test::Rng rng;
    for (int n = 0; n < 1000; ++n) {
        const Quat q = rng.unit_quat();
        const Quat sandwich = mul(mul(conj(q), pure(rng.vec())), q);
        CHECK(std::abs(scalar_part(sandwich)) <= 1e-12);
    }
}

TEST_CASE("finiteness probe") {
    CHECK(is_finite(Quat{1.0, {2.0, 3.0, 4.0}}));
    CHECK_FALSE(is_finite(Quat{std::numeric_limits<double>::quiet_NaN(), {0, 0, 0}}));
    CHECK_FALSE(is_finite(Quat{0.0, {std::numeric_limits<double>::infinity(), 0, 0}}));
}

TEST_SUITE_END();
