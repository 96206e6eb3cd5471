#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "entromono/action.hpp"
#include "entromono/duality.hpp"
#include "entromono/errors.hpp"
#include "entromono/fingroup.hpp"

namespace entromono::fourier {

using Cx = std::complex<double>;

// Measure conventions: counting measure on the discrete side, total mass 1 on
// the compact side. With these the double transform needs no extra scalar.
enum class Convention { Counting, Normalized };

struct CxFunction {
    fingroup::FinAbGroup group;
    Convention conv = Convention::Counting;
    std::vector<Cx> table;  // indexed by element rank

    CxFunction() = default;
    CxFunction(fingroup::FinAbGroup g, Convention c)
        : group(std::move(g)), conv(c), table(std::size_t(group.order()), Cx(0, 0)) {}

    Cx& at(const fingroup::Element& x) { return table[std::size_t(fingroup::rank_of(group, x))]; }
    Cx at(const fingroup::Element& x) const {
        return table[std::size_t(fingroup::rank_of(group, x))];
    }
    Cx at0() const { return table[0]; }
    double mass() const { return conv == Convention::Counting ? 1.0 : 1.0 / double(group.order()); }
};

inline double norm1(const CxFunction& f) {
    double s = 0;
    for (const auto& v : f.table) s += std::abs(v);
    return s * f.mass();
}

inline CxFunction convolve(const CxFunction& f, const CxFunction& g) {
    if (!(f.group == g.group) || f.conv != g.conv)
        throw AmbientMismatchError("convolution across different sides");
    CxFunction h(f.group, f.conv);
    const std::uint64_t n = f.group.order();
    for (std::uint64_t x = 0; x < n; ++x) {
        auto ex = fingroup::unrank(f.group, x);
        Cx acc(0, 0);
        for (std::uint64_t y = 0; y < n; ++y) {
            auto ey = fingroup::unrank(f.group, y);
            acc += f.table[y] * g.table[fingroup::rank_of(f.group, fingroup::sub(f.group, ex, ey))];
        }
        h.table[x] = acc * f.mass();
    }
    return h;
}

inline CxFunction pointwise(const CxFunction& f, const CxFunction& g) {
    if (!(f.group == g.group) || f.conv != g.conv)
        throw AmbientMismatchError("product across different sides");
    CxFunction h = f;
    for (std::size_t i = 0; i < h.table.size(); ++i) h.table[i] *= g.table[i];
    return h;
}

inline CxFunction reflect(const CxFunction& f) {  // f*(x) = conj(f(-x))
    CxFunction h(f.group, f.conv);
    const std::uint64_t n = f.group.order();
    for (std::uint64_t x = 0; x < n; ++x) {
        auto ex = fingroup::unrank(f.group, x);
        h.table[x] = std::conj(f.table[fingroup::rank_of(f.group, fingroup::neg(f.group, ex))]);
    }
    return h;
}

// phi-hat(c) = integral of phi(y) * conj(<c,y>-character). Counting-side
// transforms land on the normalized side and vice versa.
inline CxFunction dft(const CxFunction& f) {
    const auto& g = f.group;
    CxFunction h(duality::dual_group(g), f.conv == Convention::Counting ? Convention::Normalized
                                                                        : Convention::Counting);
    const std::uint64_t n = g.order();
    for (std::uint64_t c = 0; c < n; ++c) {
        auto ec = fingroup::unrank(g, c);
        Cx acc(0, 0);
        for (std::uint64_t y = 0; y < n; ++y) {
            auto ey = fingroup::unrank(g, y);
            Rational p = duality::pairing(g, ec, ey);
            double ang = -2.0 * std::numbers::pi * p.to_double();
            acc += f.table[y] * Cx(std::cos(ang), std::sin(ang));
        }
        h.table[c] = acc * f.mass();
    }
    return h;
}

// Exact transform of a subgroup indicator: chi_H-hat = |H| * chi_{H-perp}
// (rational character sums over a coset of a cyclic group vanish exactly, so
// no floating point is involved in the decision).
inline std::pair<std::uint64_t, fingroup::Subgroup> subgroup_indicator_dft(const fingroup::Subgroup& h) {
    return {h.order, duality::annihilator(h)};
}

inline CxFunction indicator(const fingroup::FinAbGroup& g, Convention conv,
                            const std::vector<fingroup::Element>& pts) {
    CxFunction f(g, conv);
    for (const auto& p : pts) f.at(p) = Cx(1, 0);
    return f;
}

inline CxFunction indicator_subgroup(const fingroup::Subgroup& h, Convention conv) {
    return indicator(h.ambient, conv, fingroup::subgroup_elements(h));
}

// Bochner criterion: all transform values real and nonnegative up to the
// stated relative tolerance; values in (-tol*phi(0), 0) count as zero.
inline bool is_positive_definite(const CxFunction& f, double tol = 1e-9) {
    double scale = std::abs(f.at0());
    if (scale == 0) scale = 1;
    auto fh = dft(f);
    for (const auto& v : fh.table) {
        if (std::abs(v.imag()) > tol * scale) return false;
        if (v.real() < -tol * scale) return false;
    }
    return true;
}

// Nonzero, pointwise nonnegative, positive-definite function: an element of
// the Peters monoid of its side.
struct PetersElement {
    CxFunction fn;

    explicit PetersElement(CxFunction f, double tol = 1e-9) : fn(std::move(f)) {
        bool nonzero = false;
        for (const auto& v : fn.table) {
            if (std::abs(v.imag()) > tol) throw Error("peters element must be real");
            if (v.real() < -tol) throw Error("peters element must be pointwise nonnegative");
            nonzero = nonzero || std::abs(v) > tol;
        }
        if (!nonzero) throw Error("peters element must be nonzero");
        if (!is_positive_definite(fn, tol)) throw Error("peters element must be positive-definite");
        if (fn.at0().real() <= 0) throw Error("peters element needs phi(0) > 0");
        for (const auto& v : fn.table)
            if (std::abs(v) > fn.at0().real() + tol * fn.at0().real())
                throw Error("phi(0) must dominate |phi|");
    }
};

inline double peters_norm(const PetersElement& p) {
    double ratio = norm1(p.fn) / p.fn.at0().real();
    // counting side: w_alg = log(|phi|_1/phi(0)); normalized side: w_top is the reciprocal
    return p.fn.conv == Convention::Counting ? std::log(ratio) : -std::log(ratio);
}

struct IsometryReport {
    double w_alg = 0;
    double w_top_of_dft = 0;
    double diff = 0;
    bool pass = false;
};

inline IsometryReport transform_isometry_check(const PetersElement& p, double tol = 1e-9) {
    IsometryReport r;
    r.w_alg = peters_norm(p);
    PetersElement q(dft(p.fn), 1e-7);
    r.w_top_of_dft = peters_norm(q);
    r.diff = std::abs(r.w_alg - r.w_top_of_dft);
    r.pass = r.diff <= tol;
    return r;
}

// ---------------------------------------------------------------------------
// Peters-monoid actions of a group action: (lambda_alg)_g phi = phi . g^{-1}
// on the discrete side, (rho_top)_g psi = psi . rho_g on the compact side;
// the transform intertwines the two.
// ---------------------------------------------------------------------------

inline CxFunction precompose(const CxFunction& f, const fingroup::Hom& h) {
    if (!(h.target == f.group)) throw AmbientMismatchError("precompose target mismatch");
    CxFunction out(h.source, f.conv);
    const std::uint64_t n = h.source.order();
    for (std::uint64_t x = 0; x < n; ++x)
        out.table[x] = f.table[fingroup::rank_of(f.group, fingroup::apply(h, fingroup::unrank(h.source, x)))];
    return out;
}

struct PetersActions {
    std::vector<fingroup::Hom> alg;  // lambda_g^{-1}, precomposed on the discrete side
    std::vector<fingroup::Hom> top;  // rho_g, precomposed on the compact side
};

inline PetersActions peters_actions(const action::MonoidAction<action::FinAbCarrier>& a) {
    if (a.mon.kind() != monoid::Kind::Lattice)
        throw Error("peters actions need an invertible (group) action");
    PetersActions out;
    for (std::size_t i = 0; i < a.gens.size(); ++i) {
        out.alg.push_back(a.gen_invs[i]);
        out.top.push_back(duality::dual_hom(a.gens[i]));
    }
    return out;
}

struct ConjugacyReport {
    double max_error = 0;
    bool pass = false;
};

inline ConjugacyReport conjugacy_check(const action::MonoidAction<action::FinAbCarrier>& a,
                                       const std::vector<CxFunction>& samples, double tol = 1e-9) {
    auto pa = peters_actions(a);
    ConjugacyReport rep;
    for (const auto& phi : samples) {
        auto phat = dft(phi);
        for (std::size_t i = 0; i < pa.alg.size(); ++i) {
            auto lhs = dft(precompose(phi, pa.alg[i]));
            auto rhs = precompose(phat, pa.top[i]);
            for (std::size_t r = 0; r < lhs.table.size(); ++r)
                rep.max_error = std::max(rep.max_error, std::abs(lhs.table[r] - rhs.table[r]));
        }
    }
    rep.pass = rep.max_error <= tol;
    return rep;
}

}  // namespace entromono::fourier
