#include "cdga/presented.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cdga;
using cdga::testing::get;
using cdga::testing::load;

namespace {

PresentedRing ring(const std::string& name) { return get<RingItem>(load("rings.cdga"), name).ring; }

// theta nilpotent <=> theta^N vanishes on every generator, with N = total dimension.
bool oracle_nilpotent(const PresentedRing& r, const RingDerivation& t) {
    int total = 0;
    for (int k = 0; k <= r.top(); ++k)
        total += r.dimension(k);
    for (int g = 0; g < r.algebra().size(); ++g) {
        Polynomial p = Polynomial::generator(g);
        for (int i = 0; i < total && !p.is_zero(); ++i)
            p = r.normal_form(t.apply(r, p));
        if (!p.is_zero())
            return false;
    }
    return true;
}

}  // namespace

TEST(Presented, QuotientDimensions) {
    const std::vector<std::pair<std::string, std::vector<int>>> cases = {
        {"trunc3", {1, 0, 1, 0, 1}},
        {"trunc4", {1, 0, 1, 0, 1, 0, 1}},
        {"S2xS4", {1, 0, 1, 0, 1, 0, 1}},
        {"S2xS2", {1, 0, 2, 0, 1}},
        {"S2S2_sum", {1, 0, 4, 0, 1}},
    };
    for (const auto& [name, dims] : cases) {
        const auto r = ring(name);
        for (int k = 0; k < static_cast<int>(dims.size()); ++k)
            EXPECT_EQ(r.dimension(k), dims[static_cast<std::size_t>(k)]) << name << " " << k;
        EXPECT_TRUE(ring_poincare_duality(r).holds) << name;
    }
}

TEST(Presented, NormalForm) {
    const auto r = ring("S2S2_sum");
    const auto& alg = r.algebra();
    EXPECT_TRUE(r.is_zero(alg.multiply(alg.gen("a"), alg.gen("al"))));
    EXPECT_EQ(r.normal_form(alg.multiply(alg.gen("a"), alg.gen("b"))),
              r.normal_form(alg.multiply(alg.gen("al"), alg.gen("be"))));
    EXPECT_FALSE(r.is_zero(alg.multiply(alg.gen("a"), alg.gen("b"))));
}

// Degree-zero derivations of a degree-2 generated PD ring with top degree 4 form the
// conformal orthogonal algebra of the intersection form: n(n-1)/2 + 1.
TEST(Presented, DerivationSpaceDimensions) {
    EXPECT_EQ(derivation_space(ring("trunc3")).size(), 1u);
    EXPECT_EQ(derivation_space(ring("S2xS2")).size(), 2u);
    EXPECT_EQ(derivation_space(ring("S2S2_sum")).size(), 7u);
    EXPECT_EQ(derivation_space(ring("S2xS4")).size(), 2u);
    for (const auto& name : {"trunc3", "trunc4", "S2xS4", "S2xS2", "S2S2_sum"}) {
        const auto r = ring(name);
        for (const auto& t : derivation_space(r))
            EXPECT_TRUE(is_derivation(r, t)) << name;
    }
}

TEST(Presented, CertifiedAbsence) {
    for (const auto& name : {"trunc3", "trunc4", "S2xS4", "S2xS2"}) {
        const auto d = nilpotent_derivation_decision(ring(name));
        EXPECT_EQ(d.verdict, NilpotentVerdict::NoneCertified) << name;
        EXPECT_TRUE(d.shape_rule) << name;
        EXPECT_TRUE(d.witnesses.empty()) << name;
    }
}

TEST(Presented, ConnectedSumHasNilpotentDerivation) {
    const auto r = ring("S2S2_sum");
    const auto d = nilpotent_derivation_decision(r);
    EXPECT_EQ(d.verdict, NilpotentVerdict::ExistsWithWitness);
    EXPECT_FALSE(d.shape_rule);
    ASSERT_FALSE(d.witnesses.empty());
    for (const auto& w : d.witnesses) {
        EXPECT_TRUE(is_derivation(r, w));
        EXPECT_FALSE(w.is_zero());
        EXPECT_TRUE(oracle_nilpotent(r, w));
    }
}

TEST(Presented, KnownNilpotentDerivation) {
    const auto r = ring("S2S2_sum");
    const auto& alg = r.algebra();
    RingDerivation t;
    t.images = {-alg.gen("al"), Polynomial(), Polynomial(), alg.gen("b")};
    EXPECT_TRUE(is_derivation(r, t));
    EXPECT_TRUE(is_nilpotent(r, t));
    EXPECT_TRUE(oracle_nilpotent(r, t));
    EXPECT_TRUE(r.is_zero(t.apply(r, alg.multiply(alg.gen("a"), alg.gen("be")))));
    EXPECT_TRUE(r.is_zero(t.apply(r, alg.multiply(alg.gen("a"), alg.gen("b")))));

    const auto d = nilpotent_derivation_decision(r);
    bool found = false;
    for (const auto& w : d.witnesses) {
        bool same = true;
        for (std::size_t g = 0; g < t.images.size(); ++g)
            same = same && r.normal_form(w.images[g]) == r.normal_form(t.images[g]);
        found = found || same;
    }
    EXPECT_TRUE(found);
}

TEST(Presented, NonDerivationRejected) {
    const auto r = ring("S2xS2");
    const auto& alg = r.algebra();
    RingDerivation t;
    t.images = {alg.gen("b"), Polynomial()};
    EXPECT_FALSE(is_derivation(r, t));
}

TEST(Presented, DecisionIsDeterministic) {
    const auto r = ring("S2S2_sum");
    const auto a = nilpotent_derivation_decision(r);
    const auto b = nilpotent_derivation_decision(r);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.random_samples, b.random_samples);
    ASSERT_EQ(a.witnesses.size(), b.witnesses.size());
    for (std::size_t i = 0; i < a.witnesses.size(); ++i)
        EXPECT_EQ(a.witnesses[i].images, b.witnesses[i].images);
}
