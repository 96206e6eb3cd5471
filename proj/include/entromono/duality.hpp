#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entromono/action.hpp"
#include "entromono/errors.hpp"
#include "entromono/fingroup.hpp"
#include "entromono/rational.hpp"
#include "entromono/window.hpp"

namespace entromono::duality {

// The dual of a finite abelian group has the same invariant factors; we fix
// once and for all the self-duality given by <x,y> = sum_i x_i y_i / d_i in
// Q/Z and express every annihilator and dual matrix in these coordinates.
inline fingroup::FinAbGroup dual_group(const fingroup::FinAbGroup& g) { return g; }

inline Rational pairing(const fingroup::FinAbGroup& g, const fingroup::Element& x,
                        const fingroup::Element& y) {
    if (x.coords.size() != g.rank() || y.coords.size() != g.rank())
        throw AmbientMismatchError("pairing arguments not in group");
    Rational acc(0);
    for (std::size_t i = 0; i < g.rank(); ++i)
        acc = acc + Rational(x.coords[i] * y.coords[i], g.factors[i]);
    return acc.frac();
}

// H^perp = { chi : chi(H) = 0 }, inside the fixed dual copy.
inline fingroup::Subgroup annihilator(const fingroup::Subgroup& h) {
    const auto& g = h.ambient;
    const std::size_t k = g.rank();
    const std::int64_t m = g.exponent();
    // y in H^perp iff sum_i x_i (m/d_i) y_i = 0 mod m for every generator x
    const auto& gens = h.generators;
    intmat::Mat c(gens.size(), k + gens.size());
    for (std::size_t r = 0; r < gens.size(); ++r) {
        for (std::size_t i = 0; i < k; ++i) c(r, i) = gens[r].coords[i] * (m / g.factors[i]);
        c(r, k + r) = m;
    }
    intmat::Mat ker = intmat::kernel_basis(c);
    std::vector<fingroup::Element> out;
    for (std::size_t col = 0; col < ker.cols; ++col) {
        std::vector<std::int64_t> y(k);
        for (std::size_t i = 0; i < k; ++i) {
            intmat::Int red = ker(i, col) % g.factors[i];
            if (red < 0) red += g.factors[i];
            y[i] = red.get_si();
        }
        out.push_back(fingroup::Element{std::move(y)});
    }
    return fingroup::span(dual_group(g), std::move(out));
}

// f-hat: dual(target) -> dual(source), chi -> chi . f. In coordinates,
// B_ji = A_ij * d_j / e_i (integral by well-definedness of A).
inline fingroup::Hom dual_hom(const fingroup::Hom& f) {
    const auto& d = f.source.factors;
    const auto& e = f.target.factors;
    std::vector<std::int64_t> b(f.source.rank() * f.target.rank(), 0);
    for (std::size_t j = 0; j < f.source.rank(); ++j)
        for (std::size_t i = 0; i < f.target.rank(); ++i) {
            __int128 v = (__int128(f.at(i, j)) * d[j]) / e[i];
            b[j * f.target.rank() + i] = std::int64_t(v % d[j]);
        }
    return fingroup::Hom(dual_group(f.target), dual_group(f.source), std::move(b));
}

// Dual action: sides swap and each generator endomorphism dualizes.
inline action::MonoidAction<action::FinAbCarrier> dual_action(
    const action::MonoidAction<action::FinAbCarrier>& a) {
    auto side = a.side == action::Side::Left ? action::Side::Right : action::Side::Left;
    auto dual_carrier = dual_group(a.carrier.group);
    if (a.mon.kind() == monoid::Kind::Numerical)
        return action::make_numerical_finab_action(a.mon, dual_carrier, dual_hom(*a.base_endo), side);
    std::vector<fingroup::Hom> gens;
    for (const auto& g : a.gens) gens.push_back(dual_hom(g));
    return action::make_finab_action(a.mon, dual_carrier, std::move(gens), side);
}

// ---------------------------------------------------------------------------
// Profinite duals of shift carriers, handled exclusively through finite
// windows: K = dual(X) is never materialized; a window W = B^sites provides
// the finite quotient K_W = dual(W) together with the duals of the clipped
// translations.
// ---------------------------------------------------------------------------

struct ProfiniteDual {
    action::MonoidAction<action::ShiftCarrier> discrete;  // the discrete side
};

struct WindowedQuotient {
    shift::WindowEmbedding window;            // W <= X, a box span
    fingroup::FinAbGroup k_w;                 // dual of the window group
    std::vector<fingroup::Hom> action_on_kw;  // dual clipped translations, one per element of F
};

inline WindowedQuotient windowed_quotient(const ProfiniteDual& p,
                                          const std::vector<shift::Index>& window_sites,
                                          const std::vector<monoid::MonoidElement>& f) {
    shift::WindowEmbedding w(p.discrete.carrier.space, window_sites);
    WindowedQuotient out{w, dual_group(w.group), {}};
    for (const auto& s : f) {
        auto e = action::endo_of(p.discrete, s);
        std::vector<std::int64_t> by = e.vector;
        if (e.kind == shift::TranslationKind::Pull)
            for (auto& c : by) c = -c;
        out.action_on_kw.push_back(dual_hom(w.clipped_translation(by)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bridge pair: Ker(lambda)^perp = E(lambda-hat), and the dual of the induced
// injective action is conjugate to the restricted core action.
// ---------------------------------------------------------------------------

struct BridgeReport {
    fingroup::Subgroup kernel;
    fingroup::Subgroup kernel_perp;
    fingroup::Subgroup core;
    bool annihilator_match = false;
    bool conjugate_match = false;
    bool pass() const { return annihilator_match && conjugate_match; }
};

inline BridgeReport bridge_pair_check(const action::MonoidAction<action::FinAbCarrier>& a) {
    auto ind = action::induced_injective_action(a);
    auto rho = dual_action(a);
    auto core = action::surjective_core(rho);
    BridgeReport rep{*ind.kernel.subgroup, annihilator(*ind.kernel.subgroup), core.core};
    rep.annihilator_match = rep.kernel_perp == rep.core;
    // iota . dual(lambda-bar_s) = dual(lambda_s) . iota with iota = dual(proj)
    rep.conjugate_match = true;
    auto iota = dual_hom(ind.projection);
    auto check = [&](const fingroup::Hom& lam, const fingroup::Hom& lam_bar) {
        return fingroup::compose(iota, dual_hom(lam_bar)) == fingroup::compose(dual_hom(lam), iota);
    };
    if (a.mon.kind() == monoid::Kind::Numerical) {
        rep.conjugate_match = check(*a.base_endo, *ind.action.base_endo);
    } else {
        for (std::size_t i = 0; i < a.gens.size(); ++i)
            rep.conjugate_match = rep.conjugate_match && check(a.gens[i], ind.action.gens[i]);
    }
    return rep;
}

}  // namespace entromono::duality
