#include "unsharp/qmath.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"

using namespace unsharp;

namespace {
constexpr double kH = 1.0 / std::numbers::sqrt2;
const Complex kI{0.0, 1.0};
}  // namespace

TEST(qmath, inner_basics) {
    EXPECT_EQ(inner(Vec2C{1.0, 0.0}, Vec2C{1.0, 0.0}), Complex(1.0, 0.0));
    EXPECT_EQ(inner(Vec2C{1.0, 0.0}, Vec2C{0.0, 1.0}), Complex(0.0, 0.0));
    EXPECT_NEAR(std::abs(inner(Vec2C{kH, kH * kI}, Vec2C{kH, -kH * kI})), 0.0, 1e-15);
}

TEST(qmath, inner_is_conjugate_linear_in_first_argument) {
    const Vec2C a{1.0, 2.0 * kI};
    const Vec2C b{0.5, 1.0};
    const Complex s{0.3, -1.7};
    EXPECT_NEAR(std::abs(inner(s * a, b) - std::conj(s) * inner(a, b)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner(a, s * b) - s * inner(a, b)), 0.0, 1e-15);
}

TEST(qmath, tensor_ordering_is_object_major) {
    EXPECT_EQ(tensor(Vec2C{1.0, 0.0}, Vec2C{1.0, 0.0}), (Vec4C{1.0, 0.0, 0.0, 0.0}));
    EXPECT_EQ(tensor(Vec2C{1.0, 0.0}, Vec2C{0.0, 1.0}), (Vec4C{0.0, 1.0, 0.0, 0.0}));
    const Vec4C t = tensor(Vec2C{kH, kH}, Vec2C{1.0, 0.0});
    EXPECT_LE(max_abs_diff(t, Vec4C{kH, 0.0, kH, 0.0}), 1e-15);
    EXPECT_TRUE(t.is_state());
}

TEST(qmath, apply_to_object) {
    auto rng = unsharp::testing::test_rng(1);
    const Vec4C s = unsharp::testing::random_state4(rng);
    EXPECT_LE(max_abs_diff(apply_to_object(Op2C::identity(), s), s), 0.0);

    const Vec4C killed = apply_to_object(Op2C::diagonal(1.0, 0.0), Vec4C{0.0, 0.0, 0.6, 0.8});
    EXPECT_EQ(killed, (Vec4C{0.0, 0.0, 0.0, 0.0}));

    const double t = 0.37;
    const Vec4C singlet{0.0, kH, -kH, 0.0};
    const Vec4C out = apply_to_object(Op2C::diagonal(1.0, t), singlet);
    EXPECT_LE(max_abs_diff(out, Vec4C{0.0, kH, -t * kH, 0.0}), 1e-15);
    EXPECT_LT(out.norm(), 1.0);
}

TEST(qmath, apply_to_object_matches_explicit_kronecker) {
    auto rng = unsharp::testing::test_rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const Op2C u = unsharp::testing::random_unitary(rng);
        const Vec4C s = unsharp::testing::random_state4(rng);
        Vec4C expected;
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                const Complex k = u(r / 2, c / 2) * (r % 2 == c % 2 ? 1.0 : 0.0);
                expected[r] += k * s[c];
            }
        }
        EXPECT_LE(max_abs_diff(apply_to_object(u, s), expected), 1e-14);
    }
}

TEST(qmath, operator_predicates) {
    EXPECT_TRUE(Op2C::rotation(0.3).is_unitary());
    EXPECT_TRUE(Op2C::diagonal(1.0, 0.4).is_hermitian());
    EXPECT_FALSE(Op2C::diagonal(1.0, 0.4).is_unitary());
    EXPECT_FALSE(Op2C(0.0, 1.0, 0.0, 0.0).is_hermitian());
    const Op2C a = Op2C::rotation(0.2), b = Op2C::diagonal(2.0, kI), c = Op2C(1.0, kI, 0.5, -1.0);
    EXPECT_LE(max_abs_diff((a * b) * c, a * (b * c)), 1e-15);
}

// Random-state properties.
TEST(qmath, tensor_norm_is_multiplicative) {
    auto rng = unsharp::testing::test_rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2C a = unsharp::testing::random_state2(rng) * 1.7;
        const Vec2C b = unsharp::testing::random_state2(rng) * 0.4;
        EXPECT_NEAR(tensor(a, b).norm(), a.norm() * b.norm(), 1e-12);
    }
}

TEST(qmath, local_unitaries_preserve_inner_products) {
    auto rng = unsharp::testing::test_rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const Op2C u = unsharp::testing::random_unitary(rng);
        ASSERT_TRUE(u.is_unitary());
        const Vec4C x = unsharp::testing::random_state4(rng), y = unsharp::testing::random_state4(rng);
        EXPECT_NEAR(std::abs(inner(apply_to_object(u, x), apply_to_object(u, y)) - inner(x, y)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(inner(apply_to_probe(u, x), apply_to_probe(u, y)) - inner(x, y)), 0.0, 1e-12);
    }
}

TEST(qmath, inner_is_hermitian_symmetric) {
    auto rng = unsharp::testing::test_rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec4C x = unsharp::testing::random_state4(rng), y = unsharp::testing::random_state4(rng);
        EXPECT_NEAR(std::abs(inner(x, y) - std::conj(inner(y, x))), 0.0, 1e-15);
        EXPECT_NEAR(inner(x, x).imag(), 0.0, 1e-15);
    }
}

TEST(qmath, object_conditional_reassembles_state) {
    auto rng = unsharp::testing::test_rng(6);
    const Vec4C s = unsharp::testing::random_state4(rng);
    const Vec4C back = tensor(Vec2C{1.0, 0.0}, object_conditional(Vec2C{1.0, 0.0}, s)) +
                       tensor(Vec2C{0.0, 1.0}, object_conditional(Vec2C{0.0, 1.0}, s));
    EXPECT_LE(max_abs_diff(back, s), 1e-15);
}
