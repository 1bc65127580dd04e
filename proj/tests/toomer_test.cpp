#include "cdga/lie.hpp"
#include "cdga/toomer.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cdga;
using cdga::testing::get;
using cdga::testing::load;

namespace {

int e0(const Cdga& c, int m) { return e0_of_space(c, m, true).e0; }

}  // namespace

TEST(Toomer, SpheresAndProjectiveSpaces) {
    const auto sp = load("spheres.cdga");
    EXPECT_EQ(e0(get<AlgebraItem>(sp, "S2").model, 2), 1);
    EXPECT_EQ(e0(get<AlgebraItem>(sp, "S4").model, 4), 1);
    EXPECT_EQ(e0(get<AlgebraItem>(sp, "CP2").model, 4), 2);
    EXPECT_EQ(e0(get<AlgebraItem>(sp, "CP3").model, 6), 3);
    EXPECT_EQ(e0(get<AlgebraItem>(sp, "S2xS4").model, 6), 2);
}

TEST(Toomer, Nilmanifolds) {
    const auto nil = load("nilpotent.cdga");
    EXPECT_EQ(e0(get<AlgebraItem>(nil, "heis3_model").model, 3), 3);
    EXPECT_EQ(e0(get<AlgebraItem>(nil, "T3").model, 3), 3);
    EXPECT_EQ(e0(get<AlgebraItem>(load("bundle_s2_over_kt.cdga"), "KT").model, 4), 4);
}

TEST(Toomer, TruncationDifferential) {
    const auto kt = get<AlgebraItem>(load("bundle_s2_over_kt.cdga"), "KT").model;
    const TruncatedModel t(kt, 1);
    const auto& alg = kt.algebra();
    // d u3 = u1 u2 has word length 2, so it dies in the length-1 quotient.
    EXPECT_TRUE(t.differential(alg.gen("u3")).is_zero());
    EXPECT_EQ(t.basis(2).size(), 0);
    EXPECT_EQ(TruncatedModel(kt, 2).basis(2).size(), 6);
    EXPECT_THROW(TruncatedModel(kt, -1), Error);
}

TEST(Toomer, ClassInvariant) {
    const auto cp2 = get<AlgebraItem>(load("spheres.cdga"), "CP2").model;
    const auto& alg = cp2.algebra();
    EXPECT_EQ(e0_of_class(cp2, 4, alg.power(alg.gen("x"), 2)).e0, 2);
    EXPECT_EQ(e0_of_class(cp2, 2, alg.gen("x")).e0, 1);
    EXPECT_THROW(e0_of_class(cp2, 5, alg.gen("y")), Error);
    const auto kt = get<AlgebraItem>(load("bundle_s2_over_kt.cdga"), "KT").model;
    EXPECT_THROW(e0_of_class(kt, 2, kt.algebra().multiply(kt.algebra().gen("u1"), kt.algebra().gen("u2"))), Error);
}

TEST(Toomer, InjectivityIsMonotone) {
    for (const auto& f : cdga::testing::corpus_files())
        for (const auto& it : load(f).items) {
            auto a = std::get_if<AlgebraItem>(&it);
            if (!a || !a->formal_dim || *a->formal_dim > 12)
                continue;
            const auto r = e0_of_space(a->model, *a->formal_dim, true);
            bool seen = false;
            for (bool inj : r.injective_at) {
                EXPECT_FALSE(seen && !inj) << f << ":" << a->name;
                seen = seen || inj;
            }
        }
}

TEST(Toomer, ScanWitnessIsKilled) {
    const auto x = get<FibrationItem>(load("bundle_s2_over_kt.cdga"), "X").model.total();
    const auto r = e0_of_space(x, 6, true);
    ASSERT_EQ(r.e0, 5);
    ASSERT_TRUE(r.witness_preimage.has_value());
    const TruncatedModel t(x, 4);
    EXPECT_EQ(t.differential(*r.witness_preimage), t.project(r.witness));
    EXPECT_FALSE(TruncatedModel(x, 5).coboundary_preimage(r.witness_degree, r.witness).has_value());
}

TEST(Toomer, TopClassSearch) {
    const auto x = get<FibrationItem>(load("bundle_s2_over_kt.cdga"), "X").model.total();
    const CohomologyRing h(x, 6);
    const auto ps = *poincare_structure(h, 6).structure;
    const auto r = e0_top_class(x, ps);
    EXPECT_EQ(r.e0, 5);
    EXPECT_EQ(r.witness.min_word_length(), 5);
    EXPECT_EQ(h.reduce_to_class(6, r.witness), h.reduce_to_class(6, ps.top));
}

TEST(Toomer, NonMinimalModelIsFlagged) {
    const auto alg = FreeAlgebra::from_degrees({{"x", 2}, {"e", 3}, {"f", 4}, {"y", 5}});
    const Cdga c(alg, {Polynomial(), alg.gen("f"), Polynomial(), alg.power(alg.gen("x"), 3)});
    const auto r = e0_of_space(c, 4, true);
    EXPECT_TRUE(r.presentation_dependent);
    EXPECT_EQ(r.e0, 2);
}
