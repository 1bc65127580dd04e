#pragma once

// Untwisting a relative model over a circle with an F0-shaped fiber:
// conjugation by x_i -> x_i + v eta_i, then y_j -> y_j + v zeta_j.

#include "cdga/relative.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdga {

struct UntwistObstruction {
    int stage = 0;
    int generator = 0;  // fiber generator id
    Polynomial value;   // theta(x_i) (stage 1) or theta'(y_j) (stage 3), over the fiber alphabet
};

struct UntwistResult {
    std::optional<UntwistObstruction> obstruction;
    std::vector<Polynomial> eta;           // per fiber generator; zero on odd ones
    std::vector<Polynomial> zeta;          // per fiber generator; zero on even ones
    std::vector<Polynomial> images;        // composed isomorphism on all total generators
    std::vector<Polynomial> intermediate;  // D' on all total generators
    std::vector<Polynomial> final_differential;
    bool equals_product = false;
    bool chain_map = false;
    bool unipotent = false;
    bool identity = false;  // nothing to do: theta = 0

    bool isomorphism() const { return !obstruction && equals_product && chain_map && unipotent; }
};

namespace detail {

inline std::vector<Polynomial> conjugate(const Cdga& c, const std::vector<Polynomial>& phi,
                                         const std::vector<Polynomial>& phi_inv) {
    const auto& alg = c.algebra();
    std::vector<Polynomial> out;
    for (int g = 0; g < c.size(); ++g)
        out.push_back(alg.substitute(phi_inv, alg, c.apply_d(phi[static_cast<std::size_t>(g)])));
    return out;
}

}  // namespace detail

inline UntwistResult untwist_over_circle(const RelativeModel& m) {
    if (m.base_size() != 1 || m.base().algebra().generator(0).degree != 1 || !m.base().d(0).is_zero())
        throw Error("untwist: the base must be a single closed generator of degree 1");
    const auto shape = f0_shape_check(m.fiber());
    if (!shape.holds)
        throw Error("untwist: fiber is not of F0 shape (" + shape.reason + ")");
    if (!validate_relative_model(m).valid())
        throw Error("untwist: relative model fails validation");
    const auto fds = extract_fiber_derivations(m);
    for (const auto& p : fds.chi2)
        if (!p.is_zero())
            throw Error("internal inconsistency: base word length >= 2 over a circle");

    const auto& fiber = m.fiber();
    const auto& total = m.total();
    const auto& talg = total.algebra();
    const int r = fiber.size();
    const Polynomial v = Polynomial::generator(0);
    UntwistResult out;
    out.eta.resize(static_cast<std::size_t>(r));
    out.zeta.resize(static_cast<std::size_t>(r));
    out.identity = fds.all_zero();

    for (int g : shape.even) {
        const Polynomial& target = fds.theta[0][static_cast<std::size_t>(g)];
        auto eta = solve_coboundary(fiber, fiber.algebra().generator(g).degree, target);
        if (!eta) {
            out.obstruction = UntwistObstruction{1, g, target};
            return out;
        }
        out.eta[static_cast<std::size_t>(g)] = std::move(*eta);
    }

    auto identity_map = [&] {
        std::vector<Polynomial> id;
        for (int g = 0; g < total.size(); ++g)
            id.push_back(Polynomial::generator(g));
        return id;
    };
    std::vector<Polynomial> phi = identity_map(), phi_inv = identity_map();
    for (int g : shape.even) {
        const Polynomial shift = talg.multiply(v, m.include_fiber(out.eta[static_cast<std::size_t>(g)]));
        phi[static_cast<std::size_t>(m.fiber_id(g))] += shift;
        phi_inv[static_cast<std::size_t>(m.fiber_id(g))] -= shift;
    }
    out.intermediate = detail::conjugate(total, phi, phi_inv);
    for (int g : shape.even)
        if (!out.intermediate[static_cast<std::size_t>(m.fiber_id(g))].is_zero())
            throw Error("internal inconsistency: D'(x) != 0 after the first change of basis");

    std::vector<Polynomial> fiber_d;
    for (int j = 0; j < r; ++j)
        fiber_d.push_back(out.intermediate[static_cast<std::size_t>(m.fiber_id(j))]);
    const RelativeModel stage2(m.base(), fiber, fiber_d);
    const auto fds2 = extract_fiber_derivations(stage2);
    for (int g : shape.odd) {
        const Polynomial& target = fds2.theta[0][static_cast<std::size_t>(g)];
        auto zeta = solve_coboundary(fiber, fiber.algebra().generator(g).degree, target);
        if (!zeta) {
            out.obstruction = UntwistObstruction{3, g, target};
            return out;
        }
        out.zeta[static_cast<std::size_t>(g)] = std::move(*zeta);
    }

    std::vector<Polynomial> psi = identity_map(), psi_inv = identity_map();
    for (int g : shape.odd) {
        const Polynomial shift = talg.multiply(v, m.include_fiber(out.zeta[static_cast<std::size_t>(g)]));
        psi[static_cast<std::size_t>(m.fiber_id(g))] += shift;
        psi_inv[static_cast<std::size_t>(m.fiber_id(g))] -= shift;
    }
    out.final_differential = detail::conjugate(stage2.total(), psi, psi_inv);

    const RelativeModel product = product_model(m.base(), fiber);
    out.equals_product = out.final_differential == product.total().differentials();

    // Composite phi o psi, checked as a chain map (product model) -> (given model).
    for (int g = 0; g < total.size(); ++g)
        out.images.push_back(talg.substitute(phi, talg, psi[static_cast<std::size_t>(g)]));
    out.chain_map = true;
    for (int g = 0; g < total.size(); ++g) {
        const Polynomial lhs = total.apply_d(out.images[static_cast<std::size_t>(g)]);
        const Polynomial rhs = talg.substitute(out.images, talg, product.total().d(g));
        out.chain_map = out.chain_map && lhs == rhs;
    }
    out.unipotent = true;
    for (int g = 0; g < total.size(); ++g) {
        const Polynomial linear = out.images[static_cast<std::size_t>(g)].word_length_window(1, 1);
        out.unipotent = out.unipotent && linear == Polynomial::generator(g);
    }
    return out;
}

// Keeps base generator i as the circle coordinate and sends the others to
// zero; valid when d(v_i) = 0.
inline RelativeModel restrict_to_base_generator(const RelativeModel& m, int i) {
    const auto& base = m.base();
    if (i < 0 || i >= base.size())
        throw Error("restrict: base generator out of range");
    if (!base.d(i).is_zero())
        throw Error("restrict: base generator '" + base.algebra().generator(i).name + "' is not closed");
    Cdga circle(FreeAlgebra({base.algebra().generator(i)}, base.algebra().cap()));
    std::vector<Generator> gens{base.algebra().generator(i)};
    for (const auto& g : m.fiber().algebra().generators())
        gens.push_back(g);
    const FreeAlgebra target(gens, m.total().algebra().cap());
    std::vector<Polynomial> images;
    for (int g = 0; g < m.total().size(); ++g) {
        if (g < base.size())
            images.push_back(g == i ? Polynomial::generator(0) : Polynomial());
        else
            images.push_back(Polynomial::generator(g - base.size() + 1));
    }
    std::vector<Polynomial> d;
    for (int j = 0; j < m.fiber().size(); ++j)
        d.push_back(m.total().algebra().substitute(images, target, m.D(j)));
    return RelativeModel(circle, m.fiber(), std::move(d));
}

}  // namespace cdga
