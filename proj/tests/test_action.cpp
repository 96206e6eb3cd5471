#include "doctest.h"
#include "entromono/action.hpp"
#include "test_util.hpp"

using namespace entromono;
using namespace entromono::action;
using fingroup::FinAbGroup;
using fingroup::Hom;
using fingroup::make_element;

namespace {

MonoidAction<FinAbCarrier> mult_action(std::int64_t factor, std::int64_t modulus) {
    FinAbGroup g({modulus});
    return make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {Hom(g, g, {factor})});
}

MonoidAction<ShiftCarrier> one_sided_shift(shift::TranslationKind kind) {
    shift::ShiftSpace s(FinAbGroup({2}), 1, shift::IndexKind::NonNeg);
    return make_shift_action(monoid::AmenableMonoid::free_comm(1), s,
                             {shift::TranslationEndo(s, {1}, kind)});
}

}  // namespace

TEST_CASE("act evaluates powers correctly") {
    SUBCASE("the identity of the monoid acts as the identity") {
        auto a = mult_action(2, 5);
        auto x = make_element(a.carrier.group, {3});
        CHECK(act(a, a.mon.zero(), x) == x);
    }
    SUBCASE("repeated squaring agrees with naive iteration") {
        auto a = mult_action(2, 5);
        for (std::int64_t n = 0; n <= 12; ++n) {
            for (std::int64_t v = 0; v < 5; ++v) {
                auto x = make_element(a.carrier.group, {v});
                auto fast = act(a, a.mon.element({n}), x);
                auto slow = x;
                for (std::int64_t i = 0; i < n; ++i)
                    slow = fingroup::apply(a.gens[0], slow);
                CHECK(fast == slow);
            }
        }
        // s = 3 sends x to 8x = 3x mod 5
        CHECK(act(a, a.mon.element({3}), make_element(a.carrier.group, {1})) ==
              make_element(a.carrier.group, {3}));
    }
    SUBCASE("push shift moves delta_0 to delta_2") {
        auto a = one_sided_shift(shift::TranslationKind::Push);
        auto d0 = shift::delta(a.carrier.space, {0}, make_element(FinAbGroup({2}), {1}));
        auto d2 = shift::delta(a.carrier.space, {2}, make_element(FinAbGroup({2}), {1}));
        CHECK(act(a, a.mon.element({2}), d0) == d2);
    }
    SUBCASE("semigroup law on random elements") {
        auto a = mult_action(3, 7);
        for (int trial = 0; trial < 20; ++trial) {
            auto s = a.mon.element({testutil::randint(0, 6)});
            auto t = a.mon.element({testutil::randint(0, 6)});
            auto x = make_element(a.carrier.group, {testutil::randint(0, 6)});
            CHECK(act(a, a.mon.add(s, t), x) == act(a, s, act(a, t, x)));
        }
    }
}

TEST_CASE("construction rejects non-commuting generators") {
    FinAbGroup g({2, 2});
    Hom swap(g, g, {0, 1, 1, 0});
    Hom proj(g, g, {1, 0, 0, 0});
    CHECK_THROWS_AS(
        make_finab_action(monoid::AmenableMonoid::free_comm(2), g, {swap, proj}),
        Error);
}

TEST_CASE("kernel of the action with stabilization witness") {
    SUBCASE("mult-by-2 on Z/4 exhausts the whole group") {
        auto a = mult_action(2, 4);
        auto cert = kernel_of_action(a);
        CHECK(cert.whole);
        CHECK(cert.subgroup->order == 4);
        REQUIRE(cert.witness.has_value());
        // the witness endo already realizes the full kernel
        auto at_witness = fingroup::kernel(endo_of(a, *cert.witness));
        CHECK(at_witness == *cert.subgroup);
    }
    SUBCASE("mult-by-2 on Z/5 is injective") {
        auto cert = kernel_of_action(mult_action(2, 5));
        CHECK(cert.trivial);
        CHECK(cert.subgroup->order == 1);
    }
    SUBCASE("pull shift annihilates everything") {
        auto cert = kernel_of_action(one_sided_shift(shift::TranslationKind::Pull));
        CHECK(cert.whole);
    }
    SUBCASE("push shift is injective") {
        auto cert = kernel_of_action(one_sided_shift(shift::TranslationKind::Push));
        CHECK(cert.trivial);
    }
}

TEST_CASE("kernel invariance under the action") {
    for (int trial = 0; trial < 20; ++trial) {
        auto g = testutil::random_group(512);
        if (g.rank() == 0) continue;
        auto f = testutil::random_hom(g, g);
        auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {f});
        auto cert = kernel_of_action(a);
        // act(s,.)^{-1}(Ker) = Ker for the generator
        CHECK(fingroup::preimage(f, *cert.subgroup) == *cert.subgroup);
    }
}

TEST_CASE("induced injective action") {
    SUBCASE("mult-by-2 on Z/4 collapses to the trivial group") {
        auto ind = induced_injective_action(mult_action(2, 4));
        CHECK(ind.action.carrier.group.trivial());
    }
    SUBCASE("injective actions are unchanged") {
        auto a = mult_action(2, 5);
        auto ind = induced_injective_action(a);
        CHECK(ind.action.carrier.group == a.carrier.group);
        CHECK(ind.action.gens[0] == a.gens[0]);
    }
    SUBCASE("pull shift collapses to zero") {
        auto ind = induced_injective_action(one_sided_shift(shift::TranslationKind::Pull));
        auto* fin = std::get_if<MonoidAction<FinAbCarrier>>(&ind.action);
        REQUIRE(fin != nullptr);
        CHECK(fin->carrier.group.trivial());
    }
    SUBCASE("generators of the induced action are injective") {
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testutil::random_group(512);
            if (g.rank() == 0) continue;
            auto f = testutil::random_hom(g, g);
            auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {f});
            auto ind = induced_injective_action(a);
            for (const auto& gen : ind.action.gens) CHECK(fingroup::is_injective(gen));
        }
    }
}

TEST_CASE("ore localization of finite-carrier actions") {
    SUBCASE("mult-by-2 on Z/5 inverts to mult-by-3") {
        auto loc = ore_localize(mult_action(2, 5));
        CHECK(loc.group.rank == 1);
        auto x = make_element(loc.action.carrier.group, {1});
        auto y = act(loc.action, monoid::MonoidElement{{-1}}, x);
        CHECK(y == make_element(loc.action.carrier.group, {3}));
    }
    SUBCASE("epsilon_1 intertwines the actions") {
        auto a = mult_action(3, 7);
        auto loc = ore_localize(a);
        for (std::int64_t v = 0; v < 7; ++v) {
            auto x = make_element(a.carrier.group, {v});
            auto lhs = fingroup::apply(loc.eps1, act(a, a.mon.element({1}), x));
            auto rhs = act(loc.action, monoid::MonoidElement{{1}}, fingroup::apply(loc.eps1, x));
            CHECK(lhs == rhs);
        }
    }
    SUBCASE("lattice actions localize to themselves") {
        FinAbGroup g({5});
        auto a = make_finab_action(monoid::AmenableMonoid::lattice(1), g, {Hom(g, g, {2})});
        auto loc = ore_localize(a);
        CHECK(loc.action.gens[0] == a.gens[0]);
    }
    SUBCASE("numerical monoid localizes through a Bezout combination") {
        // <2,3> acting by f^n with f = mult-by-2 on Z/7; the fraction group is Z
        auto m = monoid::AmenableMonoid::numerical({2, 3});
        FinAbGroup g({7});
        auto a = make_numerical_finab_action(m, g, Hom(g, g, {2}));
        auto loc = ore_localize(a);
        CHECK(loc.group == monoid::FractionGroup{1, 1});
        // the generator of the localized Z-action is mult-by-2 again (3-2=1)
        auto x = make_element(g, {1});
        CHECK(act(loc.action, monoid::MonoidElement{{1}}, x) == make_element(g, {2}));
        CHECK(act(loc.action, monoid::MonoidElement{{-1}}, make_element(g, {2})) == x);
    }
}

TEST_CASE("ore localization of shifts") {
    SUBCASE("one-sided push becomes the two-sided shift") {
        auto a = one_sided_shift(shift::TranslationKind::Push);
        auto loc = ore_localize(a);
        CHECK(loc.action.carrier.space.kind == shift::IndexKind::Full);
        CHECK(loc.action.carrier.space.base == a.carrier.space.base);
        // epsilon_1 is equivariant on sample points
        auto d0 = shift::delta(a.carrier.space, {0}, make_element(FinAbGroup({2}), {1}));
        auto lhs = loc.eps1(act(a, a.mon.element({1}), d0));
        auto rhs = act(loc.action, monoid::MonoidElement{{1}}, loc.eps1(d0));
        CHECK(lhs == rhs);
        // fractions act by translations in both directions
        auto y = act(loc.action, monoid::MonoidElement{{-3}}, loc.eps1(d0));
        CHECK(y.entries.front().first == shift::Index{-3});
    }
    SUBCASE("pull shifts are rejected with a pointer to the induced action") {
        CHECK_THROWS_AS(ore_localize(one_sided_shift(shift::TranslationKind::Pull)), Error);
    }
}

TEST_CASE("localization is exact on finite carriers") {
    // mult-by-2 on Z/20: Ker = <5>, X-bar = Z/5; Y = <4> = Z/5 is invariant
    FinAbGroup g({20});
    auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {Hom(g, g, {2})});
    auto y = fingroup::span(g, {make_element(g, {4})});
    auto rq = invariant_restriction_and_quotient(a, y);
    auto loc_x = ore_localize(a);
    auto loc_y = ore_localize(rq.on_subgroup);
    auto loc_q = ore_localize(rq.on_quotient);
    CHECK(loc_x.action.carrier.group.order() == 5);
    CHECK(loc_y.action.carrier.group.order() == 5);
    CHECK(loc_q.action.carrier.group.order() == 1);
    // localized inclusion stays injective, localized projection stays surjective
    auto incl_star = fingroup::induced_between_quotients(
        rq.inclusion, loc_y.action.carrier.group, loc_y.proj, loc_x.action.carrier.group, loc_x.proj);
    auto proj_star = fingroup::induced_between_quotients(
        rq.projection, loc_x.action.carrier.group, loc_x.proj, loc_q.action.carrier.group, loc_q.proj);
    CHECK(fingroup::is_injective(incl_star));
    CHECK(fingroup::is_surjective(proj_star));
    // equivariance of the localized inclusion
    CHECK(fingroup::compose(loc_x.action.gens[0], incl_star) ==
          fingroup::compose(incl_star, loc_y.action.gens[0]));
}

TEST_CASE("surjective core") {
    auto right = [](std::int64_t factor, std::int64_t modulus) {
        FinAbGroup g({modulus});
        return make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {Hom(g, g, {factor})},
                                 Side::Right);
    };
    SUBCASE("mult-by-2 on Z/4 has a trivial core") {
        auto core = surjective_core(right(2, 4));
        CHECK(core.core.order == 1);
    }
    SUBCASE("mult-by-2 on Z/5 is already surjective") {
        auto core = surjective_core(right(2, 5));
        CHECK(core.core.order == 5);
    }
    SUBCASE("identity action keeps everything") {
        FinAbGroup g({6});
        auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), g,
                                   {fingroup::identity_hom(g)}, Side::Right);
        CHECK(surjective_core(a).core.order == 6);
    }
    SUBCASE("idempotence: the core of the restricted action is everything") {
        for (int trial = 0; trial < 15; ++trial) {
            auto g = testutil::random_group(256);
            if (g.rank() == 0) continue;
            auto f = testutil::random_hom(g, g);
            auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {f}, Side::Right);
            auto core = surjective_core(a);
            auto again = surjective_core(core.restricted);
            CHECK(again.core.order == core.core.order);
        }
    }
}

TEST_CASE("invariant restriction and quotient") {
    SUBCASE("finite carrier with the invariant even part") {
        FinAbGroup z4({4});
        auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), z4, {Hom(z4, z4, {2})});
        auto y = fingroup::span(z4, {make_element(z4, {2})});
        auto rq = invariant_restriction_and_quotient(a, y);
        CHECK(rq.subgroup_group.order() == 2);
        CHECK(rq.quotient_group.order() == 2);
    }
    SUBCASE("Y = 0 gives the quotient back, Y = X gives the restriction back") {
        FinAbGroup z6({6});
        auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), z6, {Hom(z6, z6, {5})});
        auto rq0 = invariant_restriction_and_quotient(a, fingroup::zero_subgroup(z6));
        CHECK(rq0.quotient_group.order() == 6);
        auto rq1 = invariant_restriction_and_quotient(a, fingroup::full_subgroup(z6));
        CHECK(rq1.subgroup_group.order() == 6);
    }
    SUBCASE("non-invariant subgroups are reported with a witness") {
        FinAbGroup g({2, 2});
        Hom swap(g, g, {0, 1, 1, 0});
        auto a = make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {swap});
        auto y = fingroup::span(g, {make_element(g, {1, 0})});
        CHECK_THROWS_AS(invariant_restriction_and_quotient(a, y), NotInvariantError);
    }
    SUBCASE("shift carrier splits sitewise") {
        shift::ShiftSpace s(FinAbGroup({4}), 1, shift::IndexKind::Full);
        auto a = make_shift_action(monoid::AmenableMonoid::lattice(1), s,
                                   {shift::TranslationEndo(s, {1}, shift::TranslationKind::Push)});
        auto y = fingroup::span(FinAbGroup({4}), {make_element(FinAbGroup({4}), {2})});
        auto rq = invariant_restriction_and_quotient(a, y);
        CHECK(rq.on_subgroup.carrier.space.base.order() == 2);
        CHECK(rq.on_quotient.carrier.space.base.order() == 2);
        // the projection intertwines the shifts
        auto d0 = shift::delta(s, {0}, make_element(FinAbGroup({4}), {1}));
        auto lhs = rq.project_config(act(a, a.mon.element({1}), d0));
        auto rhs = act(rq.on_quotient, a.mon.element({1}), rq.project_config(d0));
        CHECK(lhs == rhs);
        // the inclusion intertwines the shifts on sample points
        auto sub0 = shift::delta(rq.on_subgroup.carrier.space, {2},
                                 make_element(rq.on_subgroup.carrier.space.base, {1}));
        auto li = rq.include_config(act(rq.on_subgroup, a.mon.element({1}), sub0));
        auto ri = act(a, a.mon.element({1}), rq.include_config(sub0));
        CHECK(li == ri);
    }
}
