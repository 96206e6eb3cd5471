#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "entromono/errors.hpp"
#include "entromono/rational.hpp"

namespace entromono::monoid {

enum class Kind { FreeComm, Lattice, Numerical };

struct MonoidElement {
    std::vector<std::int64_t> v;  // exponent vector; Numerical: single entry
    bool operator==(const MonoidElement&) const = default;
    auto operator<=>(const MonoidElement&) const = default;
};

// Finitely generated commutative cancellative monoids: N^d, Z^d, and
// numerical submonoids of N. Cancellative + commutative makes every one of
// them left Ore with an abelian group of left fractions.
class AmenableMonoid {
  public:
    static AmenableMonoid free_comm(int dim) {
        AmenableMonoid m;
        m.kind_ = Kind::FreeComm;
        m.dim_ = dim;
        if (dim < 1) throw Error("monoid dimension must be >= 1");
        return m;
    }
    static AmenableMonoid lattice(int dim) {
        AmenableMonoid m;
        m.kind_ = Kind::Lattice;
        m.dim_ = dim;
        if (dim < 1) throw Error("monoid dimension must be >= 1");
        return m;
    }
    static AmenableMonoid numerical(std::vector<std::int64_t> gens) {
        AmenableMonoid m;
        m.kind_ = Kind::Numerical;
        m.dim_ = 1;
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        if (gens.empty() || gens.front() < 1) throw Error("numerical generators must be positive");
        m.gens_ = std::move(gens);
        m.gcd_ = 0;
        for (auto g : m.gens_) m.gcd_ = std::gcd(m.gcd_, g);
        m.build_membership_table();
        return m;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::vector<std::int64_t>& generators() const { return gens_; }
    std::int64_t gcd() const { return gcd_; }
    std::size_t generator_count() const {
        return kind_ == Kind::Numerical ? gens_.size() : std::size_t(dim_);
    }
    bool operator==(const AmenableMonoid& o) const {
        return kind_ == o.kind_ && dim_ == o.dim_ && gens_ == o.gens_;
    }

    bool is_member(const std::vector<std::int64_t>& v) const {
        if (v.size() != std::size_t(dim_)) return false;
        switch (kind_) {
            case Kind::Lattice:
                return true;
            case Kind::FreeComm:
                return std::all_of(v.begin(), v.end(), [](auto x) { return x >= 0; });
            case Kind::Numerical: {
                std::int64_t n = v[0];
                if (n < 0 || n % gcd_ != 0) return false;
                std::int64_t r = n / gcd_;
                if (r >= std::int64_t(table_.size())) return true;  // past the Frobenius bound
                return table_[std::size_t(r)] != 0;
            }
        }
        return false;
    }

    MonoidElement element(std::vector<std::int64_t> v) const {
        if (!is_member(v)) throw Error("not a monoid element");
        return MonoidElement{std::move(v)};
    }
    MonoidElement zero() const { return MonoidElement{std::vector<std::int64_t>(dim_, 0)}; }
    MonoidElement generator(std::size_t i) const {
        if (kind_ == Kind::Numerical) return MonoidElement{{gens_.at(i)}};
        auto z = zero();
        z.v.at(i) = 1;
        return z;
    }

    MonoidElement add(const MonoidElement& a, const MonoidElement& b) const {
        MonoidElement c = a;
        for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] += b.v[i];
        return c;
    }

    // Nonnegative generator decomposition of a numerical element.
    std::vector<std::int64_t> numerical_decomposition(std::int64_t n) const {
        if (kind_ != Kind::Numerical) throw Error("numerical_decomposition on non-numerical monoid");
        if (!is_member({n})) throw Error("not representable");
        std::vector<std::int64_t> combo(gens_.size(), 0);
        std::int64_t rest = n;
        while (rest > 0) {
            bool step = false;
            for (std::size_t i = gens_.size(); i-- > 0;) {
                if (rest - gens_[i] >= 0 && is_member({rest - gens_[i]})) {
                    combo[i] += 1;
                    rest -= gens_[i];
                    step = true;
                    break;
                }
            }
            if (!step) throw Error("decomposition failed");
        }
        return combo;
    }

  private:
    // Dynamic programming over normalized generators (divided by the gcd),
    // extended until a full run of min-generator consecutive representables
    // certifies that everything beyond is representable.
    void build_membership_table() {
        std::vector<std::int64_t> norm;
        for (auto g : gens_) norm.push_back(g / gcd_);
        std::int64_t gmin = norm.front();
        std::size_t limit = 256;
        for (;;) {
            std::vector<char> dp(limit, 0);
            dp[0] = 1;
            for (std::size_t i = 1; i < limit; ++i)
                for (auto g : norm)
                    if (std::int64_t(i) >= g && dp[i - std::size_t(g)]) {
                        dp[i] = 1;
                        break;
                    }
            std::int64_t run = 0;
            for (std::size_t i = 0; i < limit; ++i) {
                run = dp[i] ? run + 1 : 0;
                if (run >= gmin) {
                    table_.assign(dp.begin(), dp.begin() + std::int64_t(i) + 1);
                    return;
                }
            }
            limit *= 4;
            if (limit > (1u << 24)) throw ResourceLimitError("numerical membership table blow-up");
        }
    }

    Kind kind_ = Kind::FreeComm;
    int dim_ = 1;
    std::vector<std::int64_t> gens_;
    std::int64_t gcd_ = 1;
    std::vector<char> table_;
};

// Canonical element of the group of left fractions, stored as t - s.
struct Fraction {
    std::vector<std::int64_t> v;
    bool operator==(const Fraction&) const = default;
    auto operator<=>(const Fraction&) const = default;
};

struct FractionGroup {
    int rank;            // fraction group is Z^rank
    std::int64_t scale;  // numerical case: gcd * Z inside Z
    bool operator==(const FractionGroup&) const = default;
};

inline FractionGroup fraction_group(const AmenableMonoid& m) {
    switch (m.kind()) {
        case Kind::FreeComm:
        case Kind::Lattice:
            return {m.dim(), 1};
        case Kind::Numerical:
            return {1, m.gcd()};
    }
    throw Error("unreachable");
}

inline Fraction fraction_of(const AmenableMonoid&, const MonoidElement& s, const MonoidElement& t) {
    Fraction f{t.v};
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] -= s.v[i];
    return f;
}

inline Fraction embed(const AmenableMonoid&, const MonoidElement& s) { return Fraction{s.v}; }

inline bool s_preorder_leq(const Fraction& g1, const Fraction& g2, const AmenableMonoid& m) {
    std::vector<std::int64_t> diff = g1.v;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= g2.v[i];
    return m.is_member(diff);
}

// Right divisibility on S: s <= s' iff s' - s lies in S.
inline bool divisibility_leq(const MonoidElement& s, const MonoidElement& t, const AmenableMonoid& m) {
    std::vector<std::int64_t> diff = t.v;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= s.v[i];
    return m.is_member(diff);
}

// Box Folner sets: [0,n)^d, [-n,n]^d, or [0, n*max_gen) in the numerical case.
inline std::vector<MonoidElement> folner_set(const AmenableMonoid& m, int n,
                                             std::uint64_t budget = (1u << 22)) {
    if (n < 1) throw Error("folner_set needs n >= 1");
    std::vector<MonoidElement> out;
    if (m.kind() == Kind::Numerical) {
        std::int64_t hi = std::int64_t(n) * m.generators().back();
        for (std::int64_t x = 0; x < hi; ++x)
            if (m.is_member({x})) out.push_back(MonoidElement{{x}});
        return out;
    }
    const std::int64_t lo = m.kind() == Kind::FreeComm ? 0 : -std::int64_t(n);
    const std::int64_t hi = m.kind() == Kind::FreeComm ? n - 1 : n;
    const std::int64_t width = hi - lo + 1;
    std::uint64_t total = 1;
    for (int i = 0; i < m.dim(); ++i) {
        total *= std::uint64_t(width);
        if (total > budget) throw ResourceLimitError("folner box too large");
    }
    std::vector<std::int64_t> cur(m.dim(), lo);
    for (;;) {
        out.push_back(MonoidElement{cur});
        int i = m.dim() - 1;
        while (i >= 0 && cur[i] == hi) cur[i--] = lo;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

inline Rational folner_defect(const AmenableMonoid& m, const std::vector<MonoidElement>& f,
                              const MonoidElement& s) {
    if (f.empty()) throw Error("folner_defect of empty set");
    std::set<MonoidElement> in(f.begin(), f.end());
    std::int64_t missing = 0;
    for (const auto& x : f)
        if (!in.count(m.add(x, s))) ++missing;
    return Rational(missing, std::int64_t(f.size()));
}

// Witnesses t, t_1..t_n with t_j + s_j = t + s for all j (the commutative
// realization of the left Ore condition); equations re-checked on return.
struct OreWitness {
    MonoidElement t;
    std::vector<MonoidElement> tj;
};

inline OreWitness ore_witness(const AmenableMonoid& m, const MonoidElement& s,
                              const std::vector<MonoidElement>& others) {
    OreWitness w;
    switch (m.kind()) {
        case Kind::Lattice: {
            w.t = m.zero();
            break;
        }
        case Kind::FreeComm: {
            std::vector<std::int64_t> t(m.dim(), 0);
            for (const auto& sj : others)
                for (int i = 0; i < m.dim(); ++i) t[i] = std::max(t[i], sj.v[i] - s.v[i]);
            w.t = MonoidElement{std::move(t)};
            break;
        }
        case Kind::Numerical: {
            bool found = false;
            for (std::int64_t cand = 0; !found; ++cand) {
                if (!m.is_member({cand})) continue;
                bool ok = true;
                for (const auto& sj : others)
                    if (!m.is_member({cand + s.v[0] - sj.v[0]})) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    w.t = MonoidElement{{cand}};
                    found = true;
                }
            }
            break;
        }
    }
    for (const auto& sj : others) {
        std::vector<std::int64_t> tj = w.t.v;
        for (std::size_t i = 0; i < tj.size(); ++i) tj[i] += s.v[i] - sj.v[i];
        if (!m.is_member(tj)) throw Error("ore witness construction failed");
        w.tj.push_back(MonoidElement{std::move(tj)});
    }
    for (std::size_t j = 0; j < others.size(); ++j)
        if (!(m.add(w.tj[j], others[j]) == m.add(w.t, s))) throw Error("ore witness equations violated");
    return w;
}

// A box Folner sequence, optionally decorated with a left translation n -> s_n.
struct FolnerSequence {
    AmenableMonoid mon;
    std::function<MonoidElement(int)> translation;  // may be empty

    std::vector<MonoidElement> set(int n) const {
        auto f = folner_set(mon, n);
        if (translation) {
            auto s = translation(n);
            for (auto& x : f) x = mon.add(s, x);
        }
        return f;
    }
};

}  // namespace entromono::monoid
