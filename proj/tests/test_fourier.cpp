#include <cmath>

#include "doctest.h"
#include "entromono/fourier.hpp"
#include "test_util.hpp"

using namespace entromono;
using namespace entromono::fourier;
using fingroup::FinAbGroup;
using fingroup::Hom;
using fingroup::make_element;

namespace {

CxFunction random_positive(const FinAbGroup& g, Convention conv) {
    CxFunction f(g, conv);
    for (auto& v : f.table) v = Cx(double(testutil::randint(0, 4)), 0);
    f.table[0] += Cx(1, 0);  // keep it nonzero
    return f;
}

// quadratic-form oracle for positive-definiteness on random coefficient sets
bool posdef_quadratic_oracle(const CxFunction& f, int trials = 24) {
    const auto& g = f.group;
    for (int t = 0; t < trials; ++t) {
        int n = int(testutil::randint(1, 4));
        std::vector<fingroup::Element> xs;
        std::vector<Cx> cs;
        for (int i = 0; i < n; ++i) {
            xs.push_back(testutil::random_element(g));
            cs.push_back(Cx(double(testutil::randint(-3, 3)), double(testutil::randint(-3, 3))));
        }
        Cx acc(0, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                acc += cs[i] * std::conj(cs[j]) * f.at(fingroup::sub(g, xs[i], xs[j]));
        if (acc.real() < -1e-7 || std::abs(acc.imag()) > 1e-7) return false;
    }
    return true;
}

double linf(const CxFunction& a, const CxFunction& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.table.size(); ++i)
        m = std::max(m, std::abs(a.table[i] - b.table[i]));
    return m;
}

}  // namespace

TEST_CASE("convolution") {
    FinAbGroup z4({4});
    SUBCASE("the point mass at zero is the discrete unit") {
        auto f = random_positive(z4, Convention::Counting);
        auto unit = indicator(z4, Convention::Counting, {fingroup::zero(z4)});
        CHECK(linf(convolve(f, unit), f) < 1e-12);
    }
    SUBCASE("chi_C * chi_C for the even part of Z/4") {
        auto h = fingroup::span(z4, {make_element(z4, {2})});
        auto chi = indicator_subgroup(h, Convention::Counting);
        auto sq = convolve(chi, chi);
        CHECK(sq.at0().real() == doctest::Approx(2.0));
        CHECK(norm1(sq) == doctest::Approx(4.0));  // mu(C)^2
    }
    SUBCASE("the constant one is the compact-side unit") {
        FinAbGroup z6({6});
        CxFunction chi_k(z6, Convention::Normalized);
        for (auto& v : chi_k.table) v = Cx(1, 0);
        auto prod = convolve(chi_k, chi_k);
        CHECK(linf(prod, chi_k) < 1e-12);
        CHECK(norm1(chi_k) == doctest::Approx(1.0));
    }
    SUBCASE("commutative, associative, norm-multiplicative on positives") {
        FinAbGroup g({2, 6});
        auto f1 = random_positive(g, Convention::Counting);
        auto f2 = random_positive(g, Convention::Counting);
        auto f3 = random_positive(g, Convention::Counting);
        CHECK(linf(convolve(f1, f2), convolve(f2, f1)) < 1e-9);
        CHECK(linf(convolve(convolve(f1, f2), f3), convolve(f1, convolve(f2, f3))) < 1e-9);
        CHECK(norm1(convolve(f1, f2)) ==
              doctest::Approx(norm1(f1) * norm1(f2)).epsilon(1e-12));
    }
}

TEST_CASE("transforms of canonical functions") {
    SUBCASE("the point mass transforms to the constant one") {
        FinAbGroup z5({5});
        auto unit = indicator(z5, Convention::Counting, {fingroup::zero(z5)});
        auto hat = dft(unit);
        for (const auto& v : hat.table) CHECK(std::abs(v - Cx(1, 0)) < 1e-12);
    }
    SUBCASE("the constant one transforms to n times the point mass") {
        FinAbGroup z6({6});
        CxFunction one(z6, Convention::Counting);
        for (auto& v : one.table) v = Cx(1, 0);
        auto hat = dft(one);
        CHECK(std::abs(hat.table[0] - Cx(6, 0)) < 1e-9);
        for (std::size_t i = 1; i < hat.table.size(); ++i) CHECK(std::abs(hat.table[i]) < 1e-9);
    }
    SUBCASE("subgroup indicators transform exactly to |H| chi_{H-perp}") {
        FinAbGroup z4({4});
        auto h = fingroup::span(z4, {make_element(z4, {2})});
        auto [scale, perp] = subgroup_indicator_dft(h);
        CHECK(scale == 2);
        // numeric transform agrees with the exact one
        auto hat = dft(indicator_subgroup(h, Convention::Counting));
        for (const auto& y : fingroup::elements(z4)) {
            double expect = fingroup::contains(perp, y) ? 2.0 : 0.0;
            CHECK(std::abs(hat.at(y) - Cx(expect, 0)) < 1e-9);
        }
    }
    SUBCASE("exact subgroup transform on random groups") {
        for (int trial = 0; trial < 10; ++trial) {
            auto g = testutil::random_group(64);
            auto h = testutil::random_subgroup(g);
            auto [scale, perp] = subgroup_indicator_dft(h);
            auto hat = dft(indicator_subgroup(h, Convention::Counting));
            for (const auto& y : fingroup::elements(g)) {
                double expect = fingroup::contains(perp, y) ? double(scale) : 0.0;
                CHECK(std::abs(hat.at(y) - Cx(expect, 0)) < 1e-8);
            }
        }
    }
}

TEST_CASE("positive definiteness") {
    SUBCASE("convolution squares are positive-definite") {
        for (int trial = 0; trial < 10; ++trial) {
            auto g = testutil::random_group(36);
            if (g.rank() == 0) continue;
            auto psi = random_positive(g, Convention::Counting);
            auto phi = convolve(psi, reflect(psi));
            CHECK(is_positive_definite(phi));
            CHECK(posdef_quadratic_oracle(phi));
        }
    }
    SUBCASE("characters are positive-definite") {
        FinAbGroup z5({5});
        CxFunction chi(z5, Convention::Counting);
        for (const auto& y : fingroup::elements(z5)) {
            double ang = 2.0 * std::numbers::pi *
                         duality::pairing(z5, make_element(z5, {1}), y).to_double();
            chi.at(y) = Cx(std::cos(ang), std::sin(ang));
        }
        CHECK(is_positive_definite(chi));
    }
    SUBCASE("an off-origin point mass is not positive-definite") {
        FinAbGroup z4({4});
        auto f = indicator(z4, Convention::Counting, {make_element(z4, {1})});
        CHECK_FALSE(is_positive_definite(f));
        CHECK_FALSE(posdef_quadratic_oracle(f));
    }
}

TEST_CASE("peters elements and their structural inequalities") {
    for (int trial = 0; trial < 15; ++trial) {
        auto g = testutil::random_group(48);
        if (g.rank() == 0) continue;
        auto psi = random_positive(g, Convention::Counting);
        PetersElement p(convolve(psi, reflect(psi)));
        const auto& phi = p.fn;
        // |phi(x)| <= phi(0), phi = phi*, |phi|_1 <= phi(0) mu(supp phi)
        double mx = 0;
        std::size_t supp = 0;
        for (const auto& v : phi.table) {
            mx = std::max(mx, std::abs(v));
            if (std::abs(v) > 1e-12) ++supp;
        }
        CHECK(mx <= phi.at0().real() + 1e-9);
        CHECK(linf(phi, reflect(phi)) < 1e-9);
        CHECK(norm1(phi) <= phi.at0().real() * double(supp) + 1e-6);
    }
}

TEST_CASE("norm inequalities of positive functions") {
    FinAbGroup g({3, 6});
    SUBCASE("reverse triangle inequality") {
        for (int trial = 0; trial < 10; ++trial) {
            auto f1 = random_positive(g, Convention::Counting);
            auto f2 = random_positive(g, Convention::Counting);
            CxFunction diff = f1;
            for (std::size_t i = 0; i < diff.table.size(); ++i) diff.table[i] -= f2.table[i];
            CHECK(norm1(diff) >= norm1(f1) - norm1(f2) - 1e-9);
        }
    }
    SUBCASE("convolution is monotone in pointwise order") {
        for (int trial = 0; trial < 10; ++trial) {
            auto f1 = random_positive(g, Convention::Counting);
            auto f2 = f1;
            for (auto& v : f2.table) v += Cx(double(testutil::randint(0, 2)), 0);
            auto h = random_positive(g, Convention::Counting);
            auto c1 = convolve(f1, h);
            auto c2 = convolve(f2, h);
            for (std::size_t i = 0; i < c1.table.size(); ++i)
                CHECK(c1.table[i].real() <= c2.table[i].real() + 1e-9);
        }
    }
}

TEST_CASE("peters norms and the transform isometry") {
    SUBCASE("the unit has norm zero on both sides") {
        FinAbGroup z5({5});
        PetersElement unit(indicator(z5, Convention::Counting, {fingroup::zero(z5)}));
        CHECK(peters_norm(unit) == doctest::Approx(0.0));
        auto rep = transform_isometry_check(unit);
        CHECK(rep.pass);
        CHECK(rep.w_top_of_dft == doctest::Approx(0.0));
    }
    SUBCASE("chi_H * chi_H has norm log |H|") {
        FinAbGroup z4({4});
        auto h = fingroup::span(z4, {make_element(z4, {2})});
        auto chi = indicator_subgroup(h, Convention::Counting);
        PetersElement p(convolve(chi, chi));
        CHECK(peters_norm(p) == doctest::Approx(std::log(2.0)));
    }
    SUBCASE("w_alg(phi) = w_top(phi-hat) on random squares") {
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testutil::random_group(36);
            if (g.rank() == 0) continue;
            auto psi = random_positive(g, Convention::Counting);
            PetersElement p(convolve(psi, reflect(psi)));
            CHECK(transform_isometry_check(p).pass);
        }
    }
    SUBCASE("the double transform is the identity on peters elements") {
        for (int trial = 0; trial < 10; ++trial) {
            auto g = testutil::random_group(36);
            if (g.rank() == 0) continue;
            auto psi = random_positive(g, Convention::Counting);
            auto phi = convolve(psi, reflect(psi));
            CHECK(linf(dft(dft(phi)), phi) < 1e-9);
        }
    }
    SUBCASE("monotonicity of the peters norms") {
        FinAbGroup g({12});
        for (int trial = 0; trial < 10; ++trial) {
            auto p1 = random_positive(g, Convention::Counting);
            auto p2 = random_positive(g, Convention::Counting);
            PetersElement a(convolve(p1, reflect(p1)));
            PetersElement b(convolve(p2, reflect(p2)));
            PetersElement ab(convolve(a.fn, b.fn));
            CHECK(peters_norm(a) <= peters_norm(ab) + 1e-9);
            // compact side: w_top is monotone under pointwise products
            PetersElement ta(dft(a.fn), 1e-7);
            PetersElement tb(dft(b.fn), 1e-7);
            PetersElement tab(pointwise(ta.fn, tb.fn), 1e-7);
            CHECK(peters_norm(ta) <= peters_norm(tab) + 1e-9);
        }
    }
    SUBCASE("transform turns convolution into product") {
        FinAbGroup g({2, 4});
        auto p1 = random_positive(g, Convention::Counting);
        auto p2 = random_positive(g, Convention::Counting);
        auto lhs = dft(convolve(p1, p2));
        auto rhs = pointwise(dft(p1), dft(p2));
        CHECK(linf(lhs, rhs) < 1e-9);
    }
    SUBCASE("transform turns product into convolution") {
        FinAbGroup g({2, 4});
        auto p1 = random_positive(g, Convention::Counting);
        auto p2 = random_positive(g, Convention::Counting);
        auto lhs = dft(pointwise(p1, p2));
        auto rhs = convolve(dft(p1), dft(p2));
        CHECK(linf(lhs, rhs) < 1e-9);
    }
}

TEST_CASE("peters actions intertwine through the transform") {
    FinAbGroup z5({5});
    auto a = action::make_finab_action(monoid::AmenableMonoid::lattice(1), z5, {Hom(z5, z5, {2})});
    SUBCASE("the unit is fixed") {
        auto unit = indicator(z5, Convention::Counting, {fingroup::zero(z5)});
        auto rep = conjugacy_check(a, {unit});
        CHECK(rep.pass);
    }
    SUBCASE("random squares intertwine within 1e-9") {
        std::vector<CxFunction> samples;
        for (int i = 0; i < 5; ++i) {
            auto psi = random_positive(z5, Convention::Counting);
            samples.push_back(convolve(psi, reflect(psi)));
        }
        auto rep = conjugacy_check(a, samples);
        CHECK(rep.pass);
    }
    SUBCASE("non-invertible actions are rejected") {
        FinAbGroup z4({4});
        auto bad = action::make_finab_action(monoid::AmenableMonoid::free_comm(1), z4,
                                             {Hom(z4, z4, {2})});
        CHECK_THROWS_AS(peters_actions(bad), Error);
    }
}
