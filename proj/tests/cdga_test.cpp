#include "cdga/cdga.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cdga;
using cdga::testing::get;
using cdga::testing::load;

namespace {

Cdga kt() { return get<AlgebraItem>(load("bundle_s2_over_kt.cdga"), "KT").model; }

}  // namespace

TEST(Cdga, KtModelFromText) {
    const Cdga c = kt();
    ASSERT_EQ(c.size(), 4);
    EXPECT_EQ(c.algebra().format(c.d(2)), "u1*u2");
    EXPECT_TRUE(c.d(0).is_zero());
    EXPECT_TRUE(c.d_squared_zero());
}

TEST(Cdga, RejectsInhomogeneousDifferential) {
    const auto alg = FreeAlgebra::from_degrees({{"x", 2}, {"y", 3}});
    EXPECT_THROW(Cdga(alg, {Polynomial(), alg.gen("x")}), Error);
    EXPECT_NO_THROW(Cdga(alg, {Polynomial(), alg.power(alg.gen("x"), 2)}));
}

TEST(Cdga, DifferentialIsADerivation) {
    const auto doc = load("bundle_s2_over_kt.cdga");
    const Cdga c = get<FibrationItem>(doc, "X").model.total();
    const auto& alg = c.algebra();
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> deg(0, 5);
    for (int s = 0; s < 2000; ++s) {
        const int i = deg(rng), j = deg(rng);
        const Polynomial x = cdga::testing::random_element(alg, i, rng), y = cdga::testing::random_element(alg, j, rng);
        const Rational sign = (i % 2) ? -1 : 1;
        EXPECT_EQ(c.apply_d(alg.multiply(x, y)),
                  alg.multiply(c.apply_d(x), y) + alg.multiply(x, c.apply_d(y)) * sign);
        EXPECT_TRUE(c.apply_d(c.apply_d(x)).is_zero());
    }
}

TEST(Validation, SquareFailureWitness) {
    const auto doc = load("invalid/circle_action_verbatim.cdga");
    const Cdga t = get<FibrationItem>(doc, "M").model.total();
    const auto v = validate_cdga(t, 4);
    EXPECT_FALSE(v.valid());
    ASSERT_EQ(v.failures.size(), 1u);
    EXPECT_EQ(t.algebra().generator(v.failures[0].generator).name, "w2");
    EXPECT_EQ(t.algebra().format(v.failures[0].d_squared), "2*x*v1*v2 - 2*x*v2^2");
    EXPECT_FALSE(v.is_sullivan);
}

TEST(Validation, SullivanOrderAndMinimality) {
    const auto alg = FreeAlgebra::from_degrees({{"c", 1}, {"a", 1}, {"b", 1}});
    // d c = a b, declared before a and b.
    const Cdga c(alg, {alg.multiply(alg.gen("a"), alg.gen("b")), Polynomial(), Polynomial()});
    const auto v = validate_cdga(c, 2);
    EXPECT_TRUE(v.is_sullivan);
    EXPECT_TRUE(v.is_minimal);
    EXPECT_EQ(v.generator_order, (std::vector<int>{1, 2, 0}));

    const auto alg2 = FreeAlgebra::from_degrees({{"e", 3}, {"f", 4}});
    const Cdga contractible(alg2, {alg2.gen("f"), Polynomial()});
    const auto v2 = validate_cdga(contractible, 5);
    EXPECT_TRUE(v2.is_sullivan);
    EXPECT_FALSE(v2.is_minimal);
    EXPECT_EQ(v2.non_minimal_generators, std::vector<int>{0});
    EXPECT_THROW(validate_cdga(contractible, 4), Error);
}

TEST(Validation, SelfReferenceIsNotSullivan) {
    // d p = p q: d^2 = 0, but p can never be peeled.
    const auto alg = FreeAlgebra::from_degrees({{"p", 1}, {"q", 1}});
    const Cdga c(alg, {alg.multiply(alg.gen("p"), alg.gen("q")), Polynomial()});
    const auto v = validate_cdga(c, 2);
    EXPECT_TRUE(v.d_squared_zero);
    EXPECT_FALSE(v.is_sullivan);
    EXPECT_EQ(v.generator_order, std::vector<int>{1});
}

TEST(F0, ShapeCheck) {
    const auto doc = load("spheres.cdga");
    EXPECT_TRUE(f0_shape_check(get<AlgebraItem>(doc, "CP2").model).holds);
    EXPECT_TRUE(f0_shape_check(get<AlgebraItem>(doc, "S2xS4").model).holds);
    const auto s = f0_shape_check(get<AlgebraItem>(doc, "S2S2_sum").model);
    EXPECT_FALSE(s.holds);
    EXPECT_FALSE(f0_shape_check(kt()).holds);
}

TEST(Tensor, ProductOfModels) {
    const auto doc = load("spheres.cdga");
    const Cdga s2 = get<AlgebraItem>(doc, "S2").model;
    const Cdga t = tensor_product(s2, rename_generators(s2, "_2"));
    ASSERT_EQ(t.size(), 4);
    EXPECT_EQ(t.algebra().format(t.d(3)), "x_2^2");
    EXPECT_TRUE(t.d_squared_zero());
}
