#include "cdga/dsl.hpp"
#include "cdga/untwist.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cdga;
using cdga::testing::get;
using cdga::testing::load;

namespace {

RelativeModel fibration(const std::string& file, const std::string& name) {
    return get<FibrationItem>(load(file), name).model;
}

}  // namespace

TEST(Untwist, TrivialTwistGivesIdentity) {
    const auto m = fibration("untwist.cdga", "CP2_trivial");
    const auto r = untwist_over_circle(m);
    EXPECT_TRUE(r.identity);
    EXPECT_TRUE(r.isomorphism());
    for (int g = 0; g < m.total().size(); ++g)
        EXPECT_EQ(r.images[static_cast<std::size_t>(g)], Polynomial::generator(g));
}

TEST(Untwist, ExactTwistIsRemoved) {
    const auto m = fibration("untwist.cdga", "G_twisted");
    ASSERT_TRUE(validate_relative_model(m).valid());
    const auto r = untwist_over_circle(m);
    ASSERT_FALSE(r.obstruction.has_value());
    EXPECT_FALSE(r.identity);
    EXPECT_TRUE(r.equals_product);
    EXPECT_TRUE(r.chain_map);
    EXPECT_TRUE(r.unipotent);
    EXPECT_TRUE(r.isomorphism());

    const auto& falg = m.fiber().algebra();
    const auto& talg = m.total().algebra();
    const int z = *falg.find("z"), u = *falg.find("u");
    EXPECT_EQ(falg.format(r.eta[static_cast<std::size_t>(z)]), "y");
    EXPECT_EQ(falg.format(r.zeta[static_cast<std::size_t>(u)]), "y*b");
    EXPECT_EQ(talg.format(r.images[static_cast<std::size_t>(m.fiber_id(z))]), "z + v*y");
    EXPECT_EQ(talg.format(r.images[static_cast<std::size_t>(m.fiber_id(u))]), "u + v*y*b");
    EXPECT_EQ(r.final_differential, product_model(m.base(), m.fiber()).total().differentials());
}

// Independent check of the composed map: applying it to the product differential
// and to the twisted one by hand.
TEST(Untwist, ImagesFormChainMap) {
    const auto m = fibration("untwist.cdga", "G_twisted");
    const auto r = untwist_over_circle(m);
    const auto& talg = m.total().algebra();
    const auto prod = product_model(m.base(), m.fiber());
    for (int g = 0; g < m.total().size(); ++g) {
        const Polynomial lhs = m.total().apply_d(r.images[static_cast<std::size_t>(g)]);
        const Polynomial rhs = talg.substitute(r.images, talg, prod.total().d(g));
        EXPECT_EQ(lhs, rhs) << talg.generator(g).name;
    }
}

TEST(Untwist, Preconditions) {
    const auto doc = load("products.cdga");
    EXPECT_THROW(untwist_over_circle(get<FibrationItem>(doc, "T2xS2").model), Error);
    // two even and three odd fiber generators
    EXPECT_THROW(untwist_over_circle(fibration("circle_action.cdga", "M")), Error);
    EXPECT_THROW(untwist_over_circle(fibration("invalid/circle_action_verbatim.cdga", "M")), Error);
}

TEST(Untwist, ObstructionReported) {
    // theta(v) = x is a cocycle that is not exact in the fiber.
    const auto doc = parse_spec(R"(
        algebra circle { gen t:1; }
        algebra F { gen x:2, v:2; gen y:3, w:3; d y = x^2; d w = x*v; }
        fibration E { base = circle; fiber = F; d v = t*x; d y = x^2; d w = x*v + t*y; }
    )");
    const auto m = get<FibrationItem>(doc, "E").model;
    ASSERT_TRUE(validate_relative_model(m).valid());
    const auto r = untwist_over_circle(m);
    ASSERT_TRUE(r.obstruction.has_value());
    EXPECT_EQ(r.obstruction->stage, 1);
    EXPECT_EQ(m.fiber().algebra().format(r.obstruction->value), "x");
    EXPECT_FALSE(r.isomorphism());
}

TEST(Untwist, RestrictToBaseGenerator) {
    const auto m = fibration("products.cdga", "T2xS2");
    const auto c = restrict_to_base_generator(m, 1);
    EXPECT_EQ(c.base_size(), 1);
    EXPECT_EQ(c.base().algebra().generator(0).name, m.base().algebra().generator(1).name);
    EXPECT_TRUE(untwist_over_circle(c).identity);
}
