#include "doctest.h"
#include "entromono/duality.hpp"
#include "test_util.hpp"

using namespace entromono;
using namespace entromono::duality;
using fingroup::FinAbGroup;
using fingroup::Hom;
using fingroup::make_element;

namespace {

// Solve incl(c) = y for an injective embedding; test-side inverse transport.
fingroup::Element express_in_subgroup(const Hom& incl, const fingroup::Element& y) {
    const std::size_t k = incl.target.rank();
    const std::size_t r = incl.source.rank();
    intmat::Mat m(k, r + k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < r; ++j) m(i, j) = incl.at(i, j);
        m(i, r + i) = incl.target.factors[i];
    }
    auto sol = intmat::solve_linear(m, std::vector<intmat::Int>(y.coords.begin(), y.coords.end()));
    REQUIRE(sol.has_value());
    std::vector<std::int64_t> c(r);
    for (std::size_t i = 0; i < r; ++i) {
        intmat::Int red = (*sol)[i] % incl.source.factors[i];
        if (red < 0) red += incl.source.factors[i];
        c[i] = red.get_si();
    }
    return fingroup::Element{std::move(c)};
}

}  // namespace

TEST_CASE("the pairing is bi-additive and nondegenerate") {
    for (int trial = 0; trial < 15; ++trial) {
        auto g = testutil::random_group(256);
        if (g.rank() == 0) continue;
        auto x = testutil::random_element(g);
        auto y = testutil::random_element(g);
        auto z = testutil::random_element(g);
        CHECK(pairing(g, fingroup::add(g, x, y), z) ==
              (pairing(g, x, z) + pairing(g, y, z)).frac());
        if (!fingroup::is_zero(x)) {
            bool all_zero = true;
            for (const auto& w : fingroup::elements(g))
                if (!(pairing(g, x, w) == Rational(0))) all_zero = false;
            CHECK_FALSE(all_zero);
        }
    }
}

TEST_CASE("annihilators on small cyclic groups") {
    FinAbGroup z4({4});
    SUBCASE("zero and full") {
        CHECK(annihilator(fingroup::zero_subgroup(z4)).order == 4);
        CHECK(annihilator(fingroup::full_subgroup(z4)).order == 1);
    }
    SUBCASE("the even part of Z/4 is self-annihilating") {
        auto h = fingroup::span(z4, {make_element(z4, {2})});
        auto perp = annihilator(h);
        // oracle: enumerate the four characters
        std::vector<fingroup::Element> expect;
        for (const auto& y : fingroup::elements(z4)) {
            bool kills = true;
            for (const auto& x : fingroup::subgroup_elements(h))
                if (!(pairing(z4, x, y) == Rational(0))) kills = false;
            if (kills) expect.push_back(y);
        }
        CHECK(fingroup::subgroup_elements(perp) == expect);
        CHECK(perp == h);
    }
    SUBCASE("order identity and double annihilator on random groups") {
        for (int trial = 0; trial < 30; ++trial) {
            auto g = testutil::random_group(4096);
            auto h = testutil::random_subgroup(g);
            auto perp = annihilator(h);
            CHECK(h.order * perp.order == g.order());
            CHECK(annihilator(perp) == h);
        }
    }
    SUBCASE("lattice anti-isomorphism") {
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testutil::random_group(4096);
            auto h1 = testutil::random_subgroup(g);
            auto h2 = testutil::random_subgroup(g);
            CHECK(annihilator(fingroup::subgroup_sum(h1, h2)) ==
                  fingroup::subgroup_intersection(annihilator(h1), annihilator(h2)));
            CHECK(annihilator(fingroup::subgroup_intersection(h1, h2)) ==
                  fingroup::subgroup_sum(annihilator(h1), annihilator(h2)));
        }
    }
}

TEST_CASE("dual homomorphisms") {
    FinAbGroup z4({4});
    SUBCASE("identity, zero, mult-by-2") {
        CHECK(dual_hom(fingroup::identity_hom(z4)) == fingroup::identity_hom(z4));
        CHECK(dual_hom(fingroup::zero_hom(z4, z4)) == fingroup::zero_hom(z4, z4));
        Hom mul2(z4, z4, {2});
        CHECK(dual_hom(mul2) == mul2);
    }
    SUBCASE("adjointness under the pairing") {
        for (int trial = 0; trial < 20; ++trial) {
            auto src = testutil::random_group(256);
            auto tgt = testutil::random_group(256);
            auto f = testutil::random_hom(src, tgt);
            auto fd = dual_hom(f);
            auto x = testutil::random_element(src);
            auto y = testutil::random_element(tgt);
            CHECK(pairing(tgt, fingroup::apply(f, x), y) ==
                  pairing(src, x, fingroup::apply(fd, y)));
        }
    }
    SUBCASE("contravariant functoriality") {
        for (int trial = 0; trial < 15; ++trial) {
            auto a = testutil::random_group(128);
            auto b = testutil::random_group(128);
            auto c = testutil::random_group(128);
            auto f = testutil::random_hom(a, b);
            auto g = testutil::random_hom(b, c);
            CHECK(dual_hom(fingroup::compose(g, f)) ==
                  fingroup::compose(dual_hom(f), dual_hom(g)));
        }
    }
    SUBCASE("anchor identity and Im(f)-perp = Ker(f-hat)") {
        for (int trial = 0; trial < 20; ++trial) {
            auto src = testutil::random_group(256);
            auto tgt = testutil::random_group(256);
            auto f = testutil::random_hom(src, tgt);
            auto h = testutil::random_subgroup(src);
            // (f(H))-perp = (f-hat)^{-1}(H-perp)
            std::vector<fingroup::Element> image_gens;
            for (const auto& e : h.generators) image_gens.push_back(fingroup::apply(f, e));
            auto fh = fingroup::span(tgt, image_gens);
            CHECK(annihilator(fh) == fingroup::preimage(dual_hom(f), annihilator(h)));
            CHECK(annihilator(fingroup::image(f)) == fingroup::kernel(dual_hom(f)));
        }
    }
    SUBCASE("double dual is the identity in the fixed coordinates") {
        for (int trial = 0; trial < 15; ++trial) {
            auto src = testutil::random_group(256);
            auto tgt = testutil::random_group(256);
            auto f = testutil::random_hom(src, tgt);
            CHECK(dual_hom(dual_hom(f)) == f);
        }
    }
}

TEST_CASE("dual actions") {
    SUBCASE("identity action dualizes to the identity action") {
        FinAbGroup g({6});
        auto a = action::make_finab_action(monoid::AmenableMonoid::free_comm(1), g,
                                           {fingroup::identity_hom(g)});
        auto d = dual_action(a);
        CHECK(d.side == action::Side::Right);
        CHECK(d.gens[0] == fingroup::identity_hom(g));
    }
    SUBCASE("mult-by-2 on Z/5 dualizes to mult-by-2") {
        FinAbGroup z5({5});
        auto a = action::make_finab_action(monoid::AmenableMonoid::free_comm(1), z5,
                                           {Hom(z5, z5, {2})});
        auto d = dual_action(a);
        CHECK(d.gens[0].at(0, 0) == 2);
    }
    SUBCASE("double dual action is the original") {
        for (int trial = 0; trial < 10; ++trial) {
            auto g = testutil::random_group(256);
            if (g.rank() == 0) continue;
            auto f = testutil::random_hom(g, g);
            auto a = action::make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {f});
            auto dd = dual_action(dual_action(a));
            CHECK(dd.side == action::Side::Left);
            CHECK(dd.gens[0] == a.gens[0]);
        }
    }
}

TEST_CASE("bridge pair: kernel annihilator equals the surjective core") {
    auto mult = [](std::int64_t factor, std::int64_t modulus) {
        FinAbGroup g({modulus});
        return action::make_finab_action(monoid::AmenableMonoid::free_comm(1), g,
                                         {Hom(g, g, {factor})});
    };
    SUBCASE("mult-by-2 on Z/4") {
        auto rep = bridge_pair_check(mult(2, 4));
        CHECK(rep.kernel.order == 4);
        CHECK(rep.core.order == 1);
        CHECK(rep.pass());
    }
    SUBCASE("invertible action") {
        auto rep = bridge_pair_check(mult(3, 8));
        CHECK(rep.kernel.order == 1);
        CHECK(rep.core.order == 8);
        CHECK(rep.pass());
    }
    SUBCASE("mult-by-2 on Z/8") {
        // enumeration: 2^3 * x = 0 for every x in Z/8, so the union exhausts
        // the whole group and the core collapses
        FinAbGroup z8({8});
        std::size_t killed = 0;
        for (const auto& x : fingroup::elements(z8))
            if (fingroup::is_zero(fingroup::apply(fingroup::hom_power(Hom(z8, z8, {2}), 3), x)))
                ++killed;
        CHECK(killed == 8);
        auto rep = bridge_pair_check(mult(2, 8));
        CHECK(rep.kernel.order == 8);
        CHECK(rep.core.order == 1);
        CHECK(rep.pass());
    }
    SUBCASE("random actions on groups of order <= 256") {
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testutil::random_group(256);
            if (g.rank() == 0) continue;
            auto f = testutil::random_hom(g, g);
            auto a = action::make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {f});
            CHECK(bridge_pair_check(a).pass());
        }
    }
}

TEST_CASE("localization and colocalization are dual at finite scale") {
    for (int trial = 0; trial < 15; ++trial) {
        auto g = testutil::random_group(256);
        if (g.rank() == 0) continue;
        auto f = testutil::random_hom(g, g);
        auto a = action::make_finab_action(monoid::AmenableMonoid::free_comm(1), g, {f});
        auto loc = action::ore_localize(a);
        auto core = action::surjective_core(dual_action(a));
        // transport tau : dual(X-bar) -> core_group through the common image E(rho)
        auto iota = dual_hom(loc.proj);
        CHECK(fingroup::image(iota) == core.core);
        const auto& xbar_dual = iota.source;
        std::vector<std::int64_t> tau_m(core.core_group.rank() * xbar_dual.rank());
        for (std::size_t j = 0; j < xbar_dual.rank(); ++j) {
            auto e = fingroup::zero(xbar_dual);
            e.coords[j] = 1;
            auto c = express_in_subgroup(core.inclusion, fingroup::apply(iota, e));
            for (std::size_t i = 0; i < core.core_group.rank(); ++i)
                tau_m[i * xbar_dual.rank() + j] = c.coords[i];
        }
        Hom tau(xbar_dual, core.core_group, std::move(tau_m));
        CHECK(fingroup::is_injective(tau));
        CHECK(fingroup::is_surjective(tau));
        // tau intertwines the dual of the localized action with the core action
        CHECK(fingroup::compose(tau, dual_hom(loc.action.gens[0])) ==
              fingroup::compose(core.restricted.gens[0], tau));
    }
}

TEST_CASE("windowed quotients of the profinite dual") {
    shift::ShiftSpace s(FinAbGroup({2}), 1, shift::IndexKind::NonNeg);
    auto lambda = action::make_shift_action(
        monoid::AmenableMonoid::free_comm(1), s,
        {shift::TranslationEndo(s, {1}, shift::TranslationKind::Push)});
    ProfiniteDual p{lambda};
    SUBCASE("the zero window has a trivial dual") {
        auto wq = windowed_quotient(p, {}, {lambda.mon.element({1})});
        CHECK(wq.k_w.trivial());
    }
    SUBCASE("two sites give the four-element dual") {
        auto wq = windowed_quotient(p, {{0}, {1}}, {lambda.mon.element({0}), lambda.mon.element({1})});
        CHECK(wq.k_w.order() == 4);
        CHECK(wq.action_on_kw.size() == 2);
    }
    SUBCASE("window spanned by a three-step trajectory") {
        auto wq = windowed_quotient(p, {{0}, {1}, {2}},
                                    {lambda.mon.element({0}), lambda.mon.element({1}),
                                     lambda.mon.element({2})});
        CHECK(wq.k_w.order() == 8);
    }
    SUBCASE("index identity: |T_F(lambda, W)| = [K_W : C_F(rho, W-perp)]") {
        for (int n = 1; n <= 4; ++n) {
            std::vector<shift::Index> sites;
            std::vector<monoid::MonoidElement> f;
            for (std::int32_t i = 0; i < n; ++i) {
                sites.push_back({i});
                f.push_back(lambda.mon.element({i}));
            }
            auto wq = windowed_quotient(p, sites, f);
            // W = base group at the origin, inside the window group
            auto d0 = shift::delta(s, {0}, make_element(s.base, {1}));
            auto w_sub = fingroup::span(wq.window.group, {wq.window.embed(d0)});
            // discrete side: the trajectory subgroup
            std::vector<fingroup::Element> traj_gens;
            for (const auto& el : f) {
                auto t = action::endo_of(lambda, el);
                traj_gens.push_back(wq.window.embed(shift::apply_translation(t, d0)));
            }
            auto traj = fingroup::span(wq.window.group, traj_gens);
            // compact side: C_F = intersection of pullbacks of W-perp
            auto c = fingroup::full_subgroup(wq.k_w);
            auto wperp = annihilator(w_sub);
            for (const auto& rho_s : wq.action_on_kw)
                c = fingroup::subgroup_intersection(c, fingroup::preimage(rho_s, wperp));
            CHECK(traj.order == wq.k_w.order() / c.order);
        }
    }
}
