#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entromono/errors.hpp"
#include "entromono/intmat.hpp"

namespace entromono::fingroup {

using intmat::Int;
using intmat::Mat;

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = (unsigned __int128)a * b;
    if (p > (unsigned __int128)INT64_MAX) throw ResourceLimitError("group order exceeds 2^63");
    return std::uint64_t(p);
}

// Finite abelian group in invariant-factor form: Z/d_1 x ... x Z/d_k with
// d_i >= 2 and d_i | d_{i+1}. The trivial group is the empty list.
struct FinAbGroup {
    std::vector<std::int64_t> factors;

    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<std::int64_t> f) : factors(std::move(f)) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i] < 2) throw Error("invariant factor < 2");
            if (i + 1 < factors.size() && factors[i + 1] % factors[i] != 0)
                throw Error("invariant factors violate divisibility chain");
        }
    }

    std::size_t rank() const { return factors.size(); }
    std::uint64_t order() const {
        std::uint64_t n = 1;
        for (auto d : factors) n = checked_mul_u64(n, std::uint64_t(d));
        return n;
    }
    std::int64_t exponent() const { return factors.empty() ? 1 : factors.back(); }
    bool trivial() const { return factors.empty(); }
    bool operator==(const FinAbGroup&) const = default;

    std::string str() const {
        std::string s = "Z";
        if (factors.empty()) return "0";
        s.clear();
        for (std::size_t i = 0; i < factors.size(); ++i)
            s += (i ? " x " : "") + std::string("Z/") + std::to_string(factors[i]);
        return s;
    }
};

// Invariant factors of Z^k / (column lattice of rel); the quotient must be
// finite, i.e. the relation lattice has full rank.
inline FinAbGroup group_from_relations(const Mat& rel) {
    auto s = intmat::smith_normal_form(rel);
    std::vector<std::int64_t> f;
    for (std::size_t i = 0; i < rel.rows; ++i) {
        if (i >= rel.cols || s.d(i, i) == 0)
            throw Error("relation matrix does not present a finite group");
        Int d = s.d(i, i);
        if (d > 1) {
            if (!d.fits_slong_p()) throw ResourceLimitError("invariant factor exceeds word size");
            f.push_back(d.get_si());
        }
    }
    return FinAbGroup(std::move(f));
}

// Direct power B^n, re-expressed in invariant-factor form.
inline FinAbGroup power_group(const FinAbGroup& b, std::size_t n) {
    std::vector<std::int64_t> f;
    f.reserve(b.rank() * n);
    for (auto d : b.factors)
        for (std::size_t i = 0; i < n; ++i) f.push_back(d);
    std::sort(f.begin(), f.end());
    return FinAbGroup(std::move(f));
}

struct Element {
    std::vector<std::int64_t> coords;
    bool operator==(const Element&) const = default;
    auto operator<=>(const Element&) const = default;
};

inline Element make_element(const FinAbGroup& g, std::vector<std::int64_t> coords) {
    if (coords.size() != g.rank()) throw AmbientMismatchError("coordinate count != group rank");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        coords[i] %= g.factors[i];
        if (coords[i] < 0) coords[i] += g.factors[i];
    }
    return Element{std::move(coords)};
}

inline Element zero(const FinAbGroup& g) { return Element{std::vector<std::int64_t>(g.rank(), 0)}; }

inline bool is_zero(const Element& x) {
    return std::all_of(x.coords.begin(), x.coords.end(), [](auto c) { return c == 0; });
}

inline Element add(const FinAbGroup& g, const Element& x, const Element& y) {
    Element z = x;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        z.coords[i] += y.coords[i];
        if (z.coords[i] >= g.factors[i]) z.coords[i] -= g.factors[i];
    }
    return z;
}

inline Element neg(const FinAbGroup& g, const Element& x) {
    Element z = x;
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (z.coords[i] != 0) z.coords[i] = g.factors[i] - z.coords[i];
    return z;
}

inline Element sub(const FinAbGroup& g, const Element& x, const Element& y) {
    return add(g, x, neg(g, y));
}

inline std::uint64_t rank_of(const FinAbGroup& g, const Element& x) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < g.rank(); ++i) r = r * std::uint64_t(g.factors[i]) + std::uint64_t(x.coords[i]);
    return r;
}

inline Element unrank(const FinAbGroup& g, std::uint64_t r) {
    std::vector<std::int64_t> c(g.rank());
    for (std::size_t i = g.rank(); i-- > 0;) {
        c[i] = std::int64_t(r % std::uint64_t(g.factors[i]));
        r /= std::uint64_t(g.factors[i]);
    }
    return Element{std::move(c)};
}

inline std::vector<Element> elements(const FinAbGroup& g, std::uint64_t budget = (1u << 20)) {
    std::uint64_t n = g.order();
    if (n > budget) throw ResourceLimitError("group too large to enumerate");
    std::vector<Element> out;
    out.reserve(std::size_t(n));
    for (std::uint64_t r = 0; r < n; ++r) out.push_back(unrank(g, r));
    return out;
}

// Homomorphism as an integer matrix (rows indexed by target factors, columns
// by source factors), entries reduced mod the target factor of their row.
// Well-definedness: e_i | a_ij * d_j for every entry.
struct Hom {
    FinAbGroup source, target;
    std::vector<std::int64_t> m;  // row-major, target.rank() x source.rank()

    Hom() = default;
    Hom(FinAbGroup src, FinAbGroup tgt, std::vector<std::int64_t> entries)
        : source(std::move(src)), target(std::move(tgt)), m(std::move(entries)) {
        if (m.size() != source.rank() * target.rank()) throw Error("hom matrix shape mismatch");
        for (std::size_t i = 0; i < target.rank(); ++i)
            for (std::size_t j = 0; j < source.rank(); ++j) {
                std::int64_t& a = at(i, j);
                a %= target.factors[i];
                if (a < 0) a += target.factors[i];
                if ((__int128(a) * source.factors[j]) % target.factors[i] != 0)
                    throw Error("hom matrix not well-defined on the given factors");
            }
    }

    std::int64_t& at(std::size_t i, std::size_t j) { return m[i * source.rank() + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return m[i * source.rank() + j]; }
    bool operator==(const Hom&) const = default;
};

inline Hom identity_hom(const FinAbGroup& g) {
    std::vector<std::int64_t> m(g.rank() * g.rank(), 0);
    for (std::size_t i = 0; i < g.rank(); ++i) m[i * g.rank() + i] = 1;
    return Hom(g, g, std::move(m));
}

inline Hom zero_hom(const FinAbGroup& s, const FinAbGroup& t) {
    return Hom(s, t, std::vector<std::int64_t>(s.rank() * t.rank(), 0));
}

inline Element apply(const Hom& f, const Element& x) {
    if (x.coords.size() != f.source.rank()) throw AmbientMismatchError("element not in hom source");
    std::vector<std::int64_t> y(f.target.rank(), 0);
    for (std::size_t i = 0; i < f.target.rank(); ++i) {
        __int128 acc = 0;
        for (std::size_t j = 0; j < f.source.rank(); ++j) acc += __int128(f.at(i, j)) * x.coords[j];
        y[i] = std::int64_t(acc % f.target.factors[i]);
    }
    return Element{std::move(y)};
}

inline Hom compose(const Hom& f, const Hom& g) {  // f after g
    if (g.target != f.source) throw AmbientMismatchError("hom composition mismatch");
    std::vector<std::int64_t> m(g.source.rank() * f.target.rank(), 0);
    for (std::size_t i = 0; i < f.target.rank(); ++i)
        for (std::size_t j = 0; j < g.source.rank(); ++j) {
            __int128 acc = 0;
            for (std::size_t k = 0; k < f.source.rank(); ++k) acc += __int128(f.at(i, k)) * g.at(k, j);
            m[i * g.source.rank() + j] = std::int64_t(acc % f.target.factors[i]);
        }
    return Hom(g.source, f.target, std::move(m));
}

inline Hom hom_power(const Hom& f, std::uint64_t e) {
    if (f.source != f.target) throw AmbientMismatchError("hom_power needs an endomorphism");
    Hom acc = identity_hom(f.source);
    Hom base = f;
    while (e) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

inline bool commute(const Hom& f, const Hom& g) { return compose(f, g) == compose(g, f); }

// ---------------------------------------------------------------------------
// Subgroups. A subgroup is identified with its preimage lattice L in Z^k,
// diag(d) <= L, stored as the row-HNF basis so equality is syntactic.
// ---------------------------------------------------------------------------

namespace detail {

inline Mat relation_diag(const FinAbGroup& g) {
    Mat r(g.rank(), g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) r(i, i) = g.factors[i];
    return r;
}

}  // namespace detail

struct Subgroup {
    FinAbGroup ambient;
    std::vector<Element> generators;
    Mat basis;  // row-HNF basis of the preimage lattice, ambient.rank() rows
    std::uint64_t order = 1;

    bool operator==(const Subgroup& o) const { return ambient == o.ambient && basis == o.basis; }
};

inline Subgroup span(const FinAbGroup& g, std::vector<Element> gens) {
    const std::size_t k = g.rank();
    Mat rows(gens.size() + k, k);
    for (std::size_t r = 0; r < gens.size(); ++r) {
        if (gens[r].coords.size() != k) throw AmbientMismatchError("generator not in ambient group");
        for (std::size_t j = 0; j < k; ++j) rows(r, j) = gens[r].coords[j];
    }
    for (std::size_t i = 0; i < k; ++i) rows(gens.size() + i, i) = g.factors[i];
    Subgroup h;
    h.ambient = g;
    h.generators = std::move(gens);
    h.basis = intmat::row_hnf(rows);
    if (h.basis.rows != k) throw Error("subgroup lattice lost full rank");
    Int det = 1;
    for (std::size_t i = 0; i < k; ++i) det *= h.basis(i, i);
    Int ord = 1;
    for (std::size_t i = 0; i < k; ++i) ord *= g.factors[i];
    ord /= det;
    if (!ord.fits_slong_p()) throw ResourceLimitError("subgroup order exceeds word size");
    h.order = std::uint64_t(ord.get_si());
    return h;
}

inline Subgroup zero_subgroup(const FinAbGroup& g) { return span(g, {}); }
inline Subgroup full_subgroup(const FinAbGroup& g) {
    std::vector<Element> gens;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        auto e = zero(g);
        e.coords[i] = 1;
        gens.push_back(e);
    }
    return span(g, std::move(gens));
}

inline bool contains(const Subgroup& h, const Element& x) {
    if (x.coords.size() != h.ambient.rank()) throw AmbientMismatchError("element not in ambient group");
    std::vector<Int> lift(x.coords.begin(), x.coords.end());
    return intmat::solve_in_row_lattice(h.basis, lift).has_value();
}

inline bool subgroup_leq(const Subgroup& a, const Subgroup& b) {
    if (a.ambient != b.ambient) throw AmbientMismatchError("subgroups of different ambients");
    for (std::size_t i = 0; i < a.basis.rows; ++i) {
        std::vector<Int> row(a.basis.cols);
        for (std::size_t j = 0; j < a.basis.cols; ++j) row[j] = a.basis(i, j);
        if (!intmat::solve_in_row_lattice(b.basis, row)) return false;
    }
    return true;
}

inline Subgroup subgroup_sum(const Subgroup& a, const Subgroup& b) {
    if (a.ambient != b.ambient) throw AmbientMismatchError("subgroup_sum ambient mismatch");
    std::vector<Element> gens = a.generators;
    gens.insert(gens.end(), b.generators.begin(), b.generators.end());
    return span(a.ambient, std::move(gens));
}

inline Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b) {
    if (a.ambient != b.ambient) throw AmbientMismatchError("subgroup_intersection ambient mismatch");
    const std::size_t k = a.ambient.rank();
    // x = y A = z B; solve A^T y - B^T z = 0 and read off x = y A.
    Mat c(k, 2 * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            c(i, j) = a.basis(j, i);
            c(i, k + j) = -b.basis(j, i);
        }
    Mat ker = intmat::kernel_basis(c);
    std::vector<Element> gens;
    for (std::size_t m = 0; m < ker.cols; ++m) {
        std::vector<std::int64_t> x(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            Int acc = 0;
            for (std::size_t y = 0; y < k; ++y) acc += ker(y, m) * a.basis(y, i);
            Int red = acc % a.ambient.factors[i];
            if (red < 0) red += a.ambient.factors[i];
            x[i] = red.get_si();
        }
        gens.push_back(Element{std::move(x)});
    }
    return span(a.ambient, std::move(gens));
}

// (Q, proj) with proj surjective and Ker(proj) = H exactly.
inline std::pair<FinAbGroup, Hom> quotient(const FinAbGroup& g, const Subgroup& h) {
    if (h.ambient != g) throw AmbientMismatchError("quotient by subgroup of another group");
    const std::size_t k = g.rank();
    auto s = intmat::smith_normal_form(transpose(h.basis));  // columns of basis^T span L
    std::vector<std::int64_t> qf;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i) {
        Int d = s.d(i, i);
        if (d > 1) {
            if (!d.fits_slong_p()) throw ResourceLimitError("quotient factor exceeds word size");
            qf.push_back(d.get_si());
            keep.push_back(i);
        }
    }
    FinAbGroup q{std::vector<std::int64_t>(qf)};
    std::vector<std::int64_t> pm(keep.size() * k, 0);
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t j = 0; j < k; ++j) {
            Int e = s.u(keep[r], j) % qf[r];
            if (e < 0) e += qf[r];
            pm[r * k + j] = e.get_si();
        }
    return {q, Hom(g, q, std::move(pm))};
}

// (H_abs, incl) with incl injective and image exactly H.
inline std::pair<FinAbGroup, Hom> subgroup_embedding(const Subgroup& h) {
    const FinAbGroup& g = h.ambient;
    const std::size_t k = g.rank();
    // M = W^{-1} diag(d) where the columns of W = basis^T span the lattice.
    Mat m(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Int> target(k, Int(0));
        target[j] = g.factors[j];
        auto y = intmat::solve_in_row_lattice(h.basis, target);
        if (!y) throw Error("relation lattice escaped subgroup lattice");
        for (std::size_t i = 0; i < k; ++i) m(i, j) = (*y)[i];
    }
    auto s = intmat::smith_normal_form(m);
    std::vector<std::int64_t> hf;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i) {
        Int d = s.d(i, i);
        if (d > 1) {
            if (!d.fits_slong_p()) throw ResourceLimitError("subgroup factor exceeds word size");
            hf.push_back(d.get_si());
            keep.push_back(i);
        }
    }
    FinAbGroup habs{std::vector<std::int64_t>(hf)};
    // incl columns: (basis^T * U^{-1}) restricted to kept indices, mod ambient factors
    Mat wu = intmat::mul(transpose(h.basis), s.u_inv);
    std::vector<std::int64_t> im(k * keep.size(), 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < keep.size(); ++c) {
            Int e = wu(i, keep[c]) % g.factors[i];
            if (e < 0) e += g.factors[i];
            im[i * keep.size() + c] = e.get_si();
        }
    return {habs, Hom(habs, g, std::move(im))};
}

inline std::vector<Element> subgroup_elements(const Subgroup& h, std::uint64_t budget = (1u << 20)) {
    if (h.order > budget) throw ResourceLimitError("subgroup too large to enumerate");
    auto [habs, incl] = subgroup_embedding(h);
    std::vector<Element> out;
    out.reserve(std::size_t(h.order));
    for (std::uint64_t r = 0; r < h.order; ++r) out.push_back(apply(incl, unrank(habs, r)));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Kernels, images, preimages.
// ---------------------------------------------------------------------------

inline Subgroup image(const Hom& f) {
    std::vector<Element> gens;
    for (std::size_t j = 0; j < f.source.rank(); ++j) {
        auto e = zero(f.source);
        e.coords[j] = 1;
        gens.push_back(apply(f, e));
    }
    return span(f.target, std::move(gens));
}

// Generators of { x : f(x) in H }, H given by its preimage lattice basis.
inline Subgroup preimage(const Hom& f, const Subgroup& h) {
    if (h.ambient != f.target) throw AmbientMismatchError("preimage subgroup not in target");
    const std::size_t k = f.source.rank();
    const std::size_t t = f.target.rank();
    // A x = W z has a solution z iff f(x) lies in the lattice; kernel of [A | -W^T...]
    Mat c(t, k + t);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < k; ++j) c(i, j) = f.at(i, j);
        for (std::size_t j = 0; j < t; ++j) c(i, k + j) = -h.basis(j, i);
    }
    Mat ker = intmat::kernel_basis(c);
    std::vector<Element> gens;
    for (std::size_t m = 0; m < ker.cols; ++m) {
        std::vector<std::int64_t> x(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            Int red = ker(i, m) % f.source.factors[i];
            if (red < 0) red += f.source.factors[i];
            x[i] = red.get_si();
        }
        gens.push_back(Element{std::move(x)});
    }
    return span(f.source, std::move(gens));
}

inline Subgroup kernel(const Hom& f) { return preimage(f, zero_subgroup(f.target)); }

inline bool is_injective(const Hom& f) { return kernel(f).order == 1; }
inline bool is_surjective(const Hom& f) { return image(f).order == f.target.order(); }

// Endomorphism induced by f on the abstract copy of an f-invariant subgroup.
inline Hom restrict_endo(const Hom& f, const Subgroup& h, const FinAbGroup& habs, const Hom& incl) {
    const std::size_t k = f.source.rank();
    const std::size_t r = habs.rank();
    // solve [incl | diag(d)] (c, t) = f(incl(e_j)) for each abstract generator
    Mat m(k, r + k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < r; ++j) m(i, j) = incl.at(i, j);
        m(i, r + i) = f.source.factors[i];
    }
    std::vector<std::int64_t> rm(r * r, 0);
    for (std::size_t j = 0; j < r; ++j) {
        auto e = zero(habs);
        e.coords[j] = 1;
        Element y = apply(f, apply(incl, e));
        if (!contains(h, y)) throw Error("restrict_endo: subgroup not invariant");
        std::vector<Int> b(y.coords.begin(), y.coords.end());
        auto sol = intmat::solve_linear(m, b);
        if (!sol) throw Error("restrict_endo: no expression in subgroup coordinates");
        for (std::size_t i = 0; i < r; ++i) {
            Int red = (*sol)[i] % habs.factors[i];
            if (red < 0) red += habs.factors[i];
            rm[i * r + j] = red.get_si();
        }
    }
    return Hom(habs, habs, std::move(rm));
}

// Map induced between two quotients by f : src(p1) -> src(p2) (requires that
// f maps Ker(p1) into Ker(p2), which callers guarantee or verify).
inline Hom induced_between_quotients(const Hom& f, const FinAbGroup& q1, const Hom& p1,
                                     const FinAbGroup& q2, const Hom& p2) {
    const std::size_t k = f.source.rank();
    const std::size_t r1 = q1.rank();
    const std::size_t r2 = q2.rank();
    Mat m(r1, k + r1);
    for (std::size_t i = 0; i < r1; ++i) {
        for (std::size_t j = 0; j < k; ++j) m(i, j) = p1.at(i, j);
        m(i, k + i) = q1.factors[i];
    }
    std::vector<std::int64_t> rm(r2 * r1, 0);
    for (std::size_t j = 0; j < r1; ++j) {
        auto e = zero(q1);
        e.coords[j] = 1;
        auto lift = intmat::solve_linear(m, std::vector<Int>(e.coords.begin(), e.coords.end()));
        if (!lift) throw Error("induced map: projection not surjective");
        Element x = zero(f.source);
        for (std::size_t i = 0; i < k; ++i) {
            Int red = (*lift)[i] % f.source.factors[i];
            if (red < 0) red += f.source.factors[i];
            x.coords[i] = red.get_si();
        }
        Element y = apply(p2, apply(f, x));
        for (std::size_t i = 0; i < r2; ++i) rm[i * r1 + j] = y.coords[i];
    }
    return Hom(q1, q2, std::move(rm));
}

// Endomorphism induced by f on a quotient presented by proj.
inline Hom induced_on_quotient(const Hom& f, const FinAbGroup& q, const Hom& proj) {
    return induced_between_quotients(f, q, proj, q, proj);
}

// Some x with f(x) = y, if any.
inline std::optional<Element> preimage_element(const Hom& f, const Element& y) {
    const std::size_t k = f.source.rank();
    const std::size_t t = f.target.rank();
    Mat m(t, k + t);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < k; ++j) m(i, j) = f.at(i, j);
        m(i, k + i) = f.target.factors[i];
    }
    auto sol = intmat::solve_linear(m, std::vector<Int>(y.coords.begin(), y.coords.end()));
    if (!sol) return std::nullopt;
    Element x = zero(f.source);
    for (std::size_t i = 0; i < k; ++i) {
        Int red = (*sol)[i] % f.source.factors[i];
        if (red < 0) red += f.source.factors[i];
        x.coords[i] = red.get_si();
    }
    return x;
}

// Inverse of a bijective endomorphism; nullopt when f is not injective.
inline std::optional<Hom> invert(const Hom& f) {
    if (f.source != f.target) return std::nullopt;
    if (!is_injective(f)) return std::nullopt;
    const std::size_t k = f.source.rank();
    Mat m(k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) m(i, j) = f.at(i, j);
        m(i, k + i) = f.target.factors[i];
    }
    std::vector<std::int64_t> inv(k * k, 0);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Int> b(k, Int(0));
        b[j] = 1;
        auto sol = intmat::solve_linear(m, b);
        if (!sol) return std::nullopt;
        for (std::size_t i = 0; i < k; ++i) {
            Int red = (*sol)[i] % f.source.factors[i];
            if (red < 0) red += f.source.factors[i];
            inv[i * k + j] = red.get_si();
        }
    }
    Hom g(f.target, f.source, std::move(inv));
    if (!(compose(f, g) == identity_hom(f.target))) return std::nullopt;
    return g;
}

}  // namespace entromono::fingroup
