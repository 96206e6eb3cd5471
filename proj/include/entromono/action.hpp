#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entromono/errors.hpp"
#include "entromono/fingroup.hpp"
#include "entromono/monoid.hpp"
#include "entromono/shiftspace.hpp"

namespace entromono::action {

struct FinAbCarrier {
    fingroup::FinAbGroup group;
    using Element = fingroup::Element;
    using Endo = fingroup::Hom;
    bool operator==(const FinAbCarrier&) const = default;
};

struct ShiftCarrier {
    shift::ShiftSpace space;
    using Element = shift::Configuration;
    using Endo = shift::TranslationEndo;
    bool operator==(const ShiftCarrier&) const = default;
};

enum class Side { Left, Right };

// Action of a supported monoid given on generators. Over the commutative
// monoids handled here left and right actions have the same data; the side
// flag records the intent ((LA.*) vs (RA.*)).
template <class Carrier>
struct MonoidAction {
    monoid::AmenableMonoid mon = monoid::AmenableMonoid::free_comm(1);
    Carrier carrier;
    Side side = Side::Left;
    std::vector<typename Carrier::Endo> gens;
    std::vector<typename Carrier::Endo> gen_invs;       // lattice monoid, finite carrier
    std::optional<typename Carrier::Endo> base_endo;    // numerical monoid: action = n -> base^n
};

// ---------------------------------------------------------------------------
// Constructors with eager validation: generator endomorphisms must commute
// pairwise, and group monoids must act invertibly.
// ---------------------------------------------------------------------------

inline MonoidAction<FinAbCarrier> make_finab_action(const monoid::AmenableMonoid& mon,
                                                    const fingroup::FinAbGroup& group,
                                                    std::vector<fingroup::Hom> gens,
                                                    Side side = Side::Left) {
    MonoidAction<FinAbCarrier> a;
    a.mon = mon;
    a.carrier = FinAbCarrier{group};
    a.side = side;
    if (mon.kind() == monoid::Kind::Numerical)
        throw Error("numerical-monoid actions are built from a base endomorphism");
    if (gens.size() != mon.generator_count()) throw Error("one endomorphism per monoid generator");
    for (const auto& g : gens)
        if (!(g.source == group) || !(g.target == group))
            throw AmbientMismatchError("generator endo not an endomorphism of the carrier");
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (!fingroup::commute(gens[i], gens[j]))
                throw Error("generator endomorphisms do not commute");
    if (mon.kind() == monoid::Kind::Lattice) {
        for (const auto& g : gens) {
            auto inv = fingroup::invert(g);
            if (!inv) throw Error("lattice monoid requires invertible generator endomorphisms");
            a.gen_invs.push_back(*inv);
        }
    }
    a.gens = std::move(gens);
    return a;
}

// Numerical submonoids of N act as restrictions of an N-action n -> f^n;
// an independent choice per generator cannot be validated against the full
// relation congruence, so it is not offered.
inline MonoidAction<FinAbCarrier> make_numerical_finab_action(const monoid::AmenableMonoid& mon,
                                                              const fingroup::FinAbGroup& group,
                                                              fingroup::Hom base,
                                                              Side side = Side::Left) {
    if (mon.kind() != monoid::Kind::Numerical) throw Error("monoid is not numerical");
    if (!(base.source == group) || !(base.target == group))
        throw AmbientMismatchError("base endo not an endomorphism of the carrier");
    MonoidAction<FinAbCarrier> a;
    a.mon = mon;
    a.carrier = FinAbCarrier{group};
    a.side = side;
    for (auto g : mon.generators()) a.gens.push_back(fingroup::hom_power(base, std::uint64_t(g)));
    a.base_endo = std::move(base);
    return a;
}

inline MonoidAction<ShiftCarrier> make_shift_action(const monoid::AmenableMonoid& mon,
                                                    const shift::ShiftSpace& space,
                                                    std::vector<shift::TranslationEndo> gens,
                                                    Side side = Side::Left) {
    MonoidAction<ShiftCarrier> a;
    a.mon = mon;
    a.carrier = ShiftCarrier{space};
    a.side = side;
    if (mon.kind() == monoid::Kind::Numerical) {
        if (gens.size() != 1) throw Error("numerical shift action takes one base translation");
        a.base_endo = gens.front();
        for (auto g : mon.generators()) {
            auto v = gens.front().vector;
            for (auto& c : v) c *= g;
            a.gens.emplace_back(space, std::move(v), gens.front().kind);
        }
        return a;
    }
    if (gens.size() != mon.generator_count()) throw Error("one translation per monoid generator");
    for (const auto& g : gens)
        if (!(g.space == space)) throw AmbientMismatchError("translation endo space mismatch");
    if (space.kind == shift::IndexKind::NonNeg) {
        if (mon.kind() == monoid::Kind::Lattice)
            throw Error("lattice monoid cannot act invertibly on a one-sided space");
        for (const auto& g : gens)
            if (g.kind != gens.front().kind)
                throw Error("mixed push/pull generators do not commute on a one-sided space");
    }
    a.gens = std::move(gens);
    return a;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

inline fingroup::Hom endo_of(const MonoidAction<FinAbCarrier>& a, const monoid::MonoidElement& s) {
    if (!a.mon.is_member(s.v)) throw Error("element outside acting monoid");
    if (a.mon.kind() == monoid::Kind::Numerical)
        return fingroup::hom_power(*a.base_endo, std::uint64_t(s.v[0]));
    fingroup::Hom acc = fingroup::identity_hom(a.carrier.group);
    for (std::size_t i = 0; i < a.gens.size(); ++i) {
        if (s.v[i] == 0) continue;
        const bool negative = s.v[i] < 0;
        const auto& g = negative ? a.gen_invs[i] : a.gens[i];
        acc = fingroup::compose(fingroup::hom_power(g, std::uint64_t(negative ? -s.v[i] : s.v[i])), acc);
    }
    return acc;
}

inline shift::TranslationEndo endo_of(const MonoidAction<ShiftCarrier>& a,
                                      const monoid::MonoidElement& s) {
    if (!a.mon.is_member(s.v)) throw Error("element outside acting monoid");
    const auto& space = a.carrier.space;
    if (a.mon.kind() == monoid::Kind::Numerical) {
        auto v = a.base_endo->vector;
        for (auto& c : v) c *= s.v[0];
        return shift::TranslationEndo(space, std::move(v), a.base_endo->kind);
    }
    if (space.kind == shift::IndexKind::NonNeg) {
        std::vector<std::int64_t> v(space.dim, 0);
        for (std::size_t i = 0; i < a.gens.size(); ++i)
            for (int k = 0; k < space.dim; ++k) v[k] += s.v[i] * a.gens[i].vector[k];
        auto kind = a.gens.empty() ? shift::TranslationKind::Push : a.gens.front().kind;
        return shift::TranslationEndo(space, std::move(v), kind);
    }
    // two-sided: everything is a signed translation
    std::vector<std::int64_t> v(space.dim, 0);
    for (std::size_t i = 0; i < a.gens.size(); ++i) {
        std::int64_t sign = a.gens[i].kind == shift::TranslationKind::Push ? 1 : -1;
        for (int k = 0; k < space.dim; ++k) v[k] += sign * s.v[i] * a.gens[i].vector[k];
    }
    shift::TranslationEndo e;
    e.space = space;
    e.vector = std::move(v);
    e.kind = shift::TranslationKind::Push;
    return e;
}

template <class Carrier>
typename Carrier::Element act(const MonoidAction<Carrier>& a, const monoid::MonoidElement& s,
                              const typename Carrier::Element& x) {
    if constexpr (std::is_same_v<Carrier, FinAbCarrier>) {
        return fingroup::apply(endo_of(a, s), x);
    } else {
        return shift::apply_translation(endo_of(a, s), x);
    }
}

inline monoid::MonoidElement diagonal_element(const monoid::AmenableMonoid& m, std::int64_t n = 1) {
    if (m.kind() == monoid::Kind::Numerical) return monoid::MonoidElement{{n * m.generators().front()}};
    return monoid::MonoidElement{std::vector<std::int64_t>(m.dim(), n)};
}

// ---------------------------------------------------------------------------
// Kernel of the action: the increasing union of Ker(lambda_s) along the
// cofinal diagonal chain, with a stabilization witness.
// ---------------------------------------------------------------------------

struct KernelCertificate {
    bool trivial = false;
    bool whole = false;
    std::optional<fingroup::Subgroup> subgroup;       // finite carriers
    std::optional<monoid::MonoidElement> witness;     // s* with Ker(lambda_{s*}) = Ker(lambda)
    std::string description;
};

inline KernelCertificate kernel_of_action(const MonoidAction<FinAbCarrier>& a) {
    const auto& g = a.carrier.group;
    KernelCertificate cert;
    fingroup::Hom t = endo_of(a, diagonal_element(a.mon));
    fingroup::Subgroup prev = fingroup::kernel(t);
    fingroup::Hom power = t;
    for (int n = 1; n < 128; ++n) {
        power = fingroup::compose(t, power);
        fingroup::Subgroup next = fingroup::kernel(power);
        if (next == prev) {
            // one confirming step past the witness
            if (!(fingroup::kernel(fingroup::compose(t, power)) == prev))
                throw Error("kernel chain failed its confirmation step");
            cert.subgroup = prev;
            cert.witness = diagonal_element(a.mon, n);
            cert.trivial = prev.order == 1;
            cert.whole = prev.order == g.order();
            cert.description = "stabilized union of Ker(lambda_s) along the diagonal chain";
            return cert;
        }
        prev = std::move(next);
    }
    throw HorizonExhaustionError("kernel chain did not stabilize within the horizon");
}

inline KernelCertificate kernel_of_action(const MonoidAction<ShiftCarrier>& a) {
    KernelCertificate cert;
    const auto& space = a.carrier.space;
    bool one_sided_pull = space.kind == shift::IndexKind::NonNeg && !a.gens.empty() &&
                          a.gens.front().kind == shift::TranslationKind::Pull;
    if (!one_sided_pull) {
        cert.trivial = true;
        cert.description = "all generators act injectively (push translations)";
        return cert;
    }
    auto total = endo_of(a, diagonal_element(a.mon));
    bool moves = std::any_of(total.vector.begin(), total.vector.end(), [](auto c) { return c != 0; });
    if (!moves) {
        cert.trivial = true;
        cert.description = "pull by the zero vector is the identity";
        return cert;
    }
    cert.whole = true;
    cert.description =
        "one-sided pull: any finitely supported configuration is annihilated by a large enough shift";
    return cert;
}

// ---------------------------------------------------------------------------
// Induced injective action on X / Ker(lambda).
// ---------------------------------------------------------------------------

struct InducedInjective {
    MonoidAction<FinAbCarrier> action;  // on the quotient
    fingroup::Hom projection;           // X -> X/Ker(lambda), S-equivariant
    KernelCertificate kernel;
};

inline InducedInjective induced_injective_action(const MonoidAction<FinAbCarrier>& a) {
    InducedInjective out;
    out.kernel = kernel_of_action(a);
    auto [q, proj] = fingroup::quotient(a.carrier.group, *out.kernel.subgroup);
    auto induce = [&](const fingroup::Hom& f) {
        auto fq = fingroup::induced_on_quotient(f, q, proj);
        if (!(fingroup::compose(proj, f) == fingroup::compose(fq, proj)))
            throw Error("induced endo is not compatible with the projection");
        if (!fingroup::is_injective(fq)) throw Error("induced endo failed to be injective");
        return fq;
    };
    MonoidAction<FinAbCarrier> ind;
    ind.mon = a.mon;
    ind.side = a.side;
    ind.carrier = FinAbCarrier{q};
    if (a.mon.kind() == monoid::Kind::Numerical) {
        ind = make_numerical_finab_action(a.mon, q, induce(*a.base_endo), a.side);
    } else {
        std::vector<fingroup::Hom> gens;
        for (const auto& f : a.gens) gens.push_back(induce(f));
        ind = make_finab_action(a.mon, q, std::move(gens), a.side);
    }
    out.action = std::move(ind);
    out.projection = proj;
    return out;
}

// Shift carriers: push actions are already injective; a one-sided pull action
// collapses to the zero group.
struct InducedInjectiveShift {
    std::variant<MonoidAction<ShiftCarrier>, MonoidAction<FinAbCarrier>> action;
    KernelCertificate kernel;
};

inline InducedInjectiveShift induced_injective_action(const MonoidAction<ShiftCarrier>& a) {
    InducedInjectiveShift out;
    out.kernel = kernel_of_action(a);
    if (out.kernel.trivial) {
        out.action = a;
        return out;
    }
    if (!out.kernel.whole) throw HorizonExhaustionError("unsupported mixed shift kernel");
    MonoidAction<FinAbCarrier> z;
    z.mon = a.mon;
    z.side = a.side;
    z.carrier = FinAbCarrier{fingroup::FinAbGroup{}};
    if (a.mon.kind() == monoid::Kind::Numerical) {
        z = make_numerical_finab_action(a.mon, z.carrier.group,
                                        fingroup::identity_hom(z.carrier.group), a.side);
    } else {
        std::vector<fingroup::Hom> gens(a.mon.generator_count(),
                                        fingroup::identity_hom(z.carrier.group));
        z = make_finab_action(a.mon, z.carrier.group, std::move(gens), a.side);
    }
    out.action = std::move(z);
    return out;
}

// ---------------------------------------------------------------------------
// Ore localization. On a finite carrier the injective quotient action is
// already by automorphisms, so the direct system has bijective transition
// maps and the limit is the quotient itself. On a one-sided push shift the
// localization is the two-sided shift over the same base, by re-indexing.
// ---------------------------------------------------------------------------

struct LocalizedFinAb {
    monoid::FractionGroup group;
    MonoidAction<FinAbCarrier> action;  // lattice action on X* by automorphisms
    fingroup::Hom eps1;                 // X/Ker -> X*, injective and S-equivariant
    fingroup::Hom proj;                 // X -> X/Ker
};

inline LocalizedFinAb ore_localize(const MonoidAction<FinAbCarrier>& a) {
    auto ind = induced_injective_action(a);
    const auto& q = ind.action.carrier.group;
    LocalizedFinAb out;
    out.group = monoid::fraction_group(a.mon);
    out.proj = ind.projection;
    out.eps1 = fingroup::identity_hom(q);
    auto lat = monoid::AmenableMonoid::lattice(out.group.rank);
    std::vector<fingroup::Hom> gens;
    if (a.mon.kind() == monoid::Kind::Numerical) {
        // the fraction group is gcd*Z; express gcd as a Bezout combination
        std::vector<std::int64_t> c(a.mon.generators().size(), 0);
        std::int64_t acc = a.mon.generators()[0];
        c[0] = 1;
        for (std::size_t i = 1; i < a.mon.generators().size(); ++i) {
            std::int64_t x = 0, y = 0;
            std::int64_t g = std::int64_t(
                mpz_class(gcd(mpz_class(acc), mpz_class(a.mon.generators()[i]))).get_si());
            // extended gcd on word-size values
            std::int64_t a0 = acc, b0 = a.mon.generators()[i], x0 = 1, x1 = 0, y0 = 0, y1 = 1;
            while (b0) {
                std::int64_t qq = a0 / b0;
                a0 -= qq * b0;
                std::swap(a0, b0);
                x0 -= qq * x1;
                std::swap(x0, x1);
                y0 -= qq * y1;
                std::swap(y0, y1);
            }
            x = x0;
            y = y0;
            for (auto& cc : c) cc *= x;
            c[i] = y;
            acc = g;
        }
        fingroup::Hom e = fingroup::identity_hom(q);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            auto base = fingroup::hom_power(*ind.action.base_endo, std::uint64_t(a.mon.generators()[i]));
            if (c[i] < 0) {
                auto inv = fingroup::invert(base);
                if (!inv) throw Error("induced endo not invertible");
                base = *inv;
            }
            e = fingroup::compose(fingroup::hom_power(base, std::uint64_t(c[i] < 0 ? -c[i] : c[i])), e);
        }
        gens.push_back(std::move(e));
    } else {
        gens = ind.action.gens;
    }
    out.action = make_finab_action(lat, q, std::move(gens), a.side);
    // lambda*_g . lambda*_{g^{-1}} = id, spot-verified on the generators
    for (std::size_t i = 0; i < out.action.gens.size(); ++i)
        if (!(fingroup::compose(out.action.gens[i], out.action.gen_invs[i]) == fingroup::identity_hom(q)))
            throw Error("localized generator is not invertible");
    return out;
}

struct LocalizedShift {
    monoid::FractionGroup group;
    MonoidAction<ShiftCarrier> action;  // on the two-sided space
    std::function<shift::Configuration(const shift::Configuration&)> eps1;
};

inline LocalizedShift ore_localize(const MonoidAction<ShiftCarrier>& a) {
    const auto& space = a.carrier.space;
    if (!a.gens.empty() && space.kind == shift::IndexKind::NonNeg &&
        a.gens.front().kind == shift::TranslationKind::Pull)
        throw Error("localize the induced injective action instead: a one-sided pull collapses to 0");
    LocalizedShift out;
    out.group = monoid::fraction_group(a.mon);
    shift::ShiftSpace full(space.base, space.dim, shift::IndexKind::Full);
    std::vector<shift::TranslationEndo> gens;
    for (const auto& g : a.gens) gens.emplace_back(full, g.vector, g.kind);
    out.action = make_shift_action(monoid::AmenableMonoid::lattice(out.group.rank), full,
                                   std::move(gens), a.side);
    out.eps1 = [full](const shift::Configuration& x) {
        shift::Configuration y{full, x.entries};
        return y;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Surjective core of a right action on a finite carrier.
// ---------------------------------------------------------------------------

struct SurjectiveCore {
    fingroup::Subgroup core;                 // E(rho) <= K
    fingroup::FinAbGroup core_group;         // abstract E(rho)
    fingroup::Hom inclusion;                 // core_group -> K, equivariant
    MonoidAction<FinAbCarrier> restricted;   // rho-bar, surjective on the core
    monoid::MonoidElement witness;           // s* with rho_{s*}(K) = E(rho)
};

inline SurjectiveCore surjective_core(const MonoidAction<FinAbCarrier>& a) {
    fingroup::Hom t = endo_of(a, diagonal_element(a.mon));
    fingroup::Subgroup prev = fingroup::image(t);
    fingroup::Hom power = t;
    for (int n = 1; n < 128; ++n) {
        power = fingroup::compose(t, power);
        fingroup::Subgroup next = fingroup::image(power);
        if (next == prev) {
            if (!(fingroup::image(fingroup::compose(t, power)) == prev))
                throw Error("image chain failed its confirmation step");
            SurjectiveCore out;
            out.core = prev;
            out.witness = diagonal_element(a.mon, n);
            auto [habs, incl] = fingroup::subgroup_embedding(prev);
            out.core_group = habs;
            out.inclusion = incl;
            auto restrict = [&](const fingroup::Hom& f) {
                auto r = fingroup::restrict_endo(f, prev, habs, incl);
                if (!(fingroup::compose(f, incl) == fingroup::compose(incl, r)))
                    throw Error("restricted endo is not compatible with the inclusion");
                if (!fingroup::is_surjective(r)) throw Error("restricted endo failed to be surjective");
                return r;
            };
            if (a.mon.kind() == monoid::Kind::Numerical) {
                out.restricted = make_numerical_finab_action(a.mon, habs, restrict(*a.base_endo), a.side);
            } else {
                std::vector<fingroup::Hom> gens;
                for (const auto& f : a.gens) gens.push_back(restrict(f));
                out.restricted = make_finab_action(a.mon, habs, std::move(gens), a.side);
            }
            return out;
        }
        prev = std::move(next);
    }
    throw HorizonExhaustionError("image chain did not stabilize within the horizon");
}

// ---------------------------------------------------------------------------
// Restriction to an invariant subgroup and the induced quotient action.
// ---------------------------------------------------------------------------

struct RestrictionQuotient {
    MonoidAction<FinAbCarrier> on_subgroup;
    fingroup::FinAbGroup subgroup_group;
    fingroup::Hom inclusion;
    MonoidAction<FinAbCarrier> on_quotient;
    fingroup::FinAbGroup quotient_group;
    fingroup::Hom projection;
};

inline RestrictionQuotient invariant_restriction_and_quotient(const MonoidAction<FinAbCarrier>& a,
                                                              const fingroup::Subgroup& y) {
    if (!(y.ambient == a.carrier.group)) throw AmbientMismatchError("subgroup of a different carrier");
    for (std::size_t i = 0; i < a.gens.size(); ++i)
        for (const auto& gen : y.generators) {
            auto img = fingroup::apply(a.gens[i], gen);
            if (!fingroup::contains(y, img)) {
                std::string desc = "(";
                for (auto c : gen.coords) desc += std::to_string(c) + ",";
                desc += ")";
                throw NotInvariantError(i, desc, "subgroup is not invariant under generator");
            }
        }
    RestrictionQuotient out;
    auto [habs, incl] = fingroup::subgroup_embedding(y);
    auto [q, proj] = fingroup::quotient(a.carrier.group, y);
    out.subgroup_group = habs;
    out.inclusion = incl;
    out.quotient_group = q;
    out.projection = proj;
    auto restrict = [&](const fingroup::Hom& f) {
        auto r = fingroup::restrict_endo(f, y, habs, incl);
        if (!(fingroup::compose(f, incl) == fingroup::compose(incl, r)))
            throw Error("restriction is not equivariant");
        return r;
    };
    auto induce = [&](const fingroup::Hom& f) {
        auto r = fingroup::induced_on_quotient(f, q, proj);
        if (!(fingroup::compose(proj, f) == fingroup::compose(r, proj)))
            throw Error("quotient action is not equivariant");
        return r;
    };
    if (a.mon.kind() == monoid::Kind::Numerical) {
        out.on_subgroup = make_numerical_finab_action(a.mon, habs, restrict(*a.base_endo), a.side);
        out.on_quotient = make_numerical_finab_action(a.mon, q, induce(*a.base_endo), a.side);
    } else {
        std::vector<fingroup::Hom> sg, qg;
        for (const auto& f : a.gens) {
            sg.push_back(restrict(f));
            qg.push_back(induce(f));
        }
        out.on_subgroup = make_finab_action(a.mon, habs, std::move(sg), a.side);
        out.on_quotient = make_finab_action(a.mon, q, std::move(qg), a.side);
    }
    return out;
}

// Shift carriers: the invariant subgroup is given sitewise by a subgroup of
// the base; restriction and quotient are again shifts, over the abstract
// subgroup and the quotient base respectively.
struct ShiftRestrictionQuotient {
    MonoidAction<ShiftCarrier> on_subgroup;
    MonoidAction<ShiftCarrier> on_quotient;
    std::function<shift::Configuration(const shift::Configuration&)> include_config;
    std::function<shift::Configuration(const shift::Configuration&)> project_config;
    fingroup::Hom base_inclusion;   // abstract sub-base -> base
    fingroup::Hom base_projection;  // base -> quotient base
};

inline ShiftRestrictionQuotient invariant_restriction_and_quotient(
    const MonoidAction<ShiftCarrier>& a, const fingroup::Subgroup& base_subgroup) {
    const auto& space = a.carrier.space;
    if (!(base_subgroup.ambient == space.base))
        throw AmbientMismatchError("base subgroup of a different base group");
    auto [habs, incl] = fingroup::subgroup_embedding(base_subgroup);
    auto [q, proj] = fingroup::quotient(space.base, base_subgroup);
    if (habs.order() < 2 || q.order() < 2)
        throw Error("degenerate sitewise subgroup for a shift carrier");
    shift::ShiftSpace sub_space(habs, space.dim, space.kind);
    shift::ShiftSpace quo_space(q, space.dim, space.kind);

    auto remap = [](const shift::ShiftSpace& target, const fingroup::Hom& f,
                    const shift::Configuration& x) {
        shift::Configuration y{target, {}};
        for (const auto& [idx, val] : x.entries) {
            auto v = fingroup::apply(f, val);
            if (!fingroup::is_zero(v)) y.entries.emplace_back(idx, std::move(v));
        }
        return y;
    };

    ShiftRestrictionQuotient out;
    auto mk = [&](const shift::ShiftSpace& sp) {
        std::vector<shift::TranslationEndo> gens;
        if (a.mon.kind() == monoid::Kind::Numerical) {
            gens.emplace_back(sp, a.base_endo->vector, a.base_endo->kind);
        } else {
            for (const auto& g : a.gens) gens.emplace_back(sp, g.vector, g.kind);
        }
        return make_shift_action(a.mon, sp, std::move(gens), a.side);
    };
    out.on_subgroup = mk(sub_space);
    out.on_quotient = mk(quo_space);
    out.include_config = [space, incl, remap](const shift::Configuration& x) {
        return remap(space, incl, x);
    };
    out.project_config = [quo_space, proj, remap](const shift::Configuration& x) {
        return remap(quo_space, proj, x);
    };
    out.base_inclusion = incl;
    out.base_projection = proj;
    return out;
}

}  // namespace entromono::action
