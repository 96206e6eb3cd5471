#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "entromono/action.hpp"
#include "entromono/errors.hpp"
#include "entromono/monoid.hpp"
#include "entromono/window.hpp"

namespace entromono::entropy {

// Norms here are logs of positive integers whenever possible; the exact count
// is carried so that per-level identities can be checked without floats.
struct NormValue {
    std::optional<std::uint64_t> count;
    double value = 0;

    static NormValue of_count(std::uint64_t c) { return {c, std::log(double(c))}; }
};

struct LevelValue {
    std::size_t box = 1;  // |F_n|
    std::optional<std::uint64_t> count;
    double raw = 0;  // log(count) when count is present
    double value() const { return raw / double(box); }
};

// Exact equality of log(a)/m and log(b)/k, i.e. a^k = b^m over the integers.
inline bool level_values_equal(std::uint64_t a, std::size_t m, std::uint64_t b, std::size_t k) {
    mpz_class lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), a, (unsigned long)k);
    mpz_ui_pow_ui(rhs.get_mpz_t(), b, (unsigned long)m);
    return lhs == rhs;
}

inline bool level_values_equal(const LevelValue& x, const LevelValue& y) {
    if (x.count && y.count) return level_values_equal(*x.count, x.box, *y.count, y.box);
    return x.value() == y.value();
}

struct TrajectoryEstimate {
    std::vector<LevelValue> levels;
    double limit = 0;       // last per-level value
    double cauchy_gap = 0;  // max oscillation over the final third of the horizon
    bool exact = false;     // per-level sequence is constant from some level on

    static TrajectoryEstimate assemble(std::vector<LevelValue> lv) {
        TrajectoryEstimate e;
        e.levels = std::move(lv);
        if (e.levels.empty()) return e;
        e.limit = e.levels.back().value();
        std::size_t tail = e.levels.size() - std::max<std::size_t>(1, e.levels.size() / 3);
        double lo = e.levels.back().value(), hi = lo;
        for (std::size_t i = tail; i < e.levels.size(); ++i) {
            lo = std::min(lo, e.levels[i].value());
            hi = std::max(hi, e.levels[i].value());
        }
        e.cauchy_gap = hi - lo;
        std::size_t j = e.levels.size() - 1;
        while (j > 0 && level_values_equal(e.levels[j - 1], e.levels.back())) --j;
        e.exact = j + 1 < e.levels.size();
        return e;
    }
};

// ---------------------------------------------------------------------------
// Generic trajectory machinery over a normed monoid carrying an action: an
// instance provides apply (the action), combine (the monoid operation) and
// norm. Instances with a cheaper exact count expose trajectory_norm.
// ---------------------------------------------------------------------------

template <class Inst>
concept HasFastCount = requires(const Inst& i, const std::vector<monoid::MonoidElement>& f,
                                const typename Inst::Element& m) {
    { i.trajectory_norm(f, m) } -> std::convertible_to<NormValue>;
};

template <class Inst>
typename Inst::Element trajectory(const Inst& inst, const std::vector<monoid::MonoidElement>& f,
                                  const typename Inst::Element& m) {
    if (f.empty()) throw Error("trajectory over an empty subset of S");
    std::optional<typename Inst::Element> acc;
    for (const auto& s : f) {
        auto y = inst.apply(s, m);
        acc = acc ? inst.combine(*acc, y) : std::move(y);
    }
    return *acc;
}

template <class Inst>
NormValue trajectory_norm(const Inst& inst, const std::vector<monoid::MonoidElement>& f,
                          const typename Inst::Element& m) {
    if constexpr (HasFastCount<Inst>) {
        return inst.trajectory_norm(f, m);
    } else {
        return inst.norm(trajectory(inst, f, m));
    }
}

template <class Inst>
TrajectoryEstimate entropy_at(const Inst& inst, const monoid::FolnerSequence& fol,
                              const typename Inst::Element& m, int horizon) {
    if (horizon < 2) throw Error("horizon must be >= 2");
    std::vector<LevelValue> lv;
    for (int n = 1; n <= horizon; ++n) {
        auto f = fol.set(n);
        auto nv = trajectory_norm(inst, f, m);
        lv.push_back(LevelValue{f.size(), nv.count, nv.value});
    }
    return TrajectoryEstimate::assemble(std::move(lv));
}

struct EntropyResult {
    double value = 0;
    bool exact = true;  // every supremum-attaining member had an exact estimate
    std::vector<TrajectoryEstimate> per_member;
};

// Supremum over the supplied generating family (the sup over the whole normed
// monoid is not computable; canonical families attain it in the cases used).
template <class Inst>
EntropyResult entropy(const Inst& inst, const monoid::FolnerSequence& fol,
                      const std::vector<typename Inst::Element>& family, int horizon) {
    EntropyResult r;
    for (const auto& m : family) {
        r.per_member.push_back(entropy_at(inst, fol, m, horizon));
        if (r.per_member.back().limit >= r.value) {
            r.value = r.per_member.back().limit;
            r.exact = r.per_member.back().exact;
        }
    }
    return r;
}

// Flag checks for a normed-monoid instance on sampled pairs.
template <class Inst>
bool verify_norm_flags(const Inst& inst, const std::vector<typename Inst::Element>& samples,
                       bool monotone, bool subadditive) {
    for (const auto& x : samples)
        for (const auto& y : samples) {
            auto xy = inst.combine(x, y);
            double vx = inst.norm(x).value, vy = inst.norm(y).value, vxy = inst.norm(xy).value;
            if (monotone && vx > vxy + 1e-12) return false;
            if (subadditive && vxy > vx + vy + 1e-12) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// The finite-subsets instance over a finite-group carrier.
// ---------------------------------------------------------------------------

struct PfFinAb {
    action::MonoidAction<action::FinAbCarrier> act;
    using Element = std::vector<fingroup::Element>;  // sorted, deduplicated

    static Element normalize(Element e) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    }
    Element apply(const monoid::MonoidElement& s, const Element& e) const {
        auto h = action::endo_of(act, s);
        Element out;
        out.reserve(e.size());
        for (const auto& x : e) out.push_back(fingroup::apply(h, x));
        return normalize(std::move(out));
    }
    Element combine(const Element& a, const Element& b) const {
        Element out;
        out.reserve(a.size() * b.size());
        for (const auto& x : a)
            for (const auto& y : b) out.push_back(fingroup::add(act.carrier.group, x, y));
        return normalize(std::move(out));
    }
    NormValue norm(const Element& e) const { return NormValue::of_count(e.size()); }
};

// ---------------------------------------------------------------------------
// The finite-subsets instance over a shift carrier. Counts go through a
// window embedding: subgroup seeds use lattice arithmetic (no enumeration),
// other seeds enumerate packed ranks, falling back to configuration sets.
// ---------------------------------------------------------------------------

struct PfShift {
    action::MonoidAction<action::ShiftCarrier> act;
    std::uint64_t cap = (1u << 24);
    std::uint64_t pack_limit = (1ull << 40);  // largest window group enumerated via ranks
    bool force_enumeration = false;           // skip the subgroup-span shortcut

    using Element = std::vector<shift::Configuration>;  // sorted, deduplicated

    Element apply(const monoid::MonoidElement& s, const Element& e) const {
        auto t = action::endo_of(act, s);
        Element out;
        out.reserve(e.size());
        for (const auto& x : e) out.push_back(shift::apply_translation(t, x));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    Element combine(const Element& a, const Element& b) const { return shift::sumset(a, b, cap); }
    NormValue norm(const Element& e) const { return NormValue::of_count(e.size()); }

    static bool is_subgroup(const Element& e) {
        if (e.empty()) return false;
        std::set<shift::Configuration> s(e.begin(), e.end());
        if (!s.count(shift::zero_config(e.front().space))) return false;
        for (const auto& x : e) {
            if (!s.count(shift::neg_config(x))) return false;
            for (const auto& y : e)
                if (!s.count(shift::add_config(x, y))) return false;
        }
        return true;
    }

    NormValue trajectory_norm(const std::vector<monoid::MonoidElement>& f, const Element& e) const {
        if (f.empty() || e.empty()) throw Error("empty trajectory data");
        // images of the seed under each s in F, plus the window they span
        std::vector<Element> images;
        std::vector<shift::Index> sites;
        for (const auto& s : f) {
            images.push_back(apply(s, e));
            for (const auto& cfg : images.back())
                for (const auto& [idx, val] : cfg.entries) sites.push_back(idx);
        }
        if (sites.empty()) return NormValue::of_count(1);  // every image is {0}
        shift::WindowEmbedding w(act.carrier.space, std::move(sites));

        if (!force_enumeration && is_subgroup(e)) {
            std::vector<fingroup::Element> gens;
            for (const auto& img : images)
                for (const auto& cfg : img) gens.push_back(w.embed(cfg));
            return NormValue::of_count(fingroup::span(w.group, std::move(gens)).order);
        }

        std::uint64_t order = 0;
        bool packable = true;
        try {
            order = w.group.order();
        } catch (const ResourceLimitError&) {
            packable = false;
        }
        if (packable && order <= pack_limit) {
            const auto& g = w.group;
            std::vector<std::uint64_t> acc;
            for (std::size_t i = 0; i < images.size(); ++i) {
                std::vector<std::uint64_t> ranks;
                ranks.reserve(images[i].size());
                for (const auto& cfg : images[i]) ranks.push_back(fingroup::rank_of(g, w.embed(cfg)));
                if (i == 0) {
                    acc = std::move(ranks);
                    std::sort(acc.begin(), acc.end());
                    continue;
                }
                if ((unsigned __int128)acc.size() * ranks.size() > (unsigned __int128)4 * cap)
                    throw ResourceLimitError("trajectory working set exceeds the configured cap");
                std::vector<std::uint64_t> next;
                next.reserve(acc.size() * ranks.size());
                for (auto r1 : acc) {
                    auto x = fingroup::unrank(g, r1);
                    for (auto r2 : ranks)
                        next.push_back(fingroup::rank_of(g, fingroup::add(g, x, fingroup::unrank(g, r2))));
                }
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                if (next.size() > cap) throw ResourceLimitError("trajectory exceeds configured cap");
                acc = std::move(next);
            }
            return NormValue::of_count(acc.size());
        }
        // generic fallback on configuration sets
        std::optional<Element> acc;
        for (const auto& img : images) acc = acc ? combine(*acc, img) : img;
        return NormValue::of_count(acc->size());
    }
};

// ---------------------------------------------------------------------------
// Product of two instances with the sum norm.
// ---------------------------------------------------------------------------

template <class I1, class I2>
struct ProductInstance {
    I1 first;
    I2 second;
    using Element = std::pair<typename I1::Element, typename I2::Element>;

    Element apply(const monoid::MonoidElement& s, const Element& e) const {
        return {first.apply(s, e.first), second.apply(s, e.second)};
    }
    Element combine(const Element& a, const Element& b) const {
        return {first.combine(a.first, b.first), second.combine(a.second, b.second)};
    }
    NormValue norm(const Element& e) const {
        auto n1 = first.norm(e.first), n2 = second.norm(e.second);
        NormValue nv;
        nv.value = n1.value + n2.value;
        if (n1.count && n2.count) nv.count = fingroup::checked_mul_u64(*n1.count, *n2.count);
        return nv;
    }
    NormValue trajectory_norm(const std::vector<monoid::MonoidElement>& f, const Element& e) const {
        auto n1 = trajectory_norm_of(first, f, e.first);
        auto n2 = trajectory_norm_of(second, f, e.second);
        NormValue nv;
        nv.value = n1.value + n2.value;
        if (n1.count && n2.count) nv.count = fingroup::checked_mul_u64(*n1.count, *n2.count);
        return nv;
    }

  private:
    template <class I>
    static NormValue trajectory_norm_of(const I& inst, const std::vector<monoid::MonoidElement>& f,
                                        const typename I::Element& m) {
        return entropy::trajectory_norm(inst, f, m);
    }
};

template <class I1, class I2>
ProductInstance<I1, I2> product_action(I1 a, I2 b) {
    if (!(a.act.mon == b.act.mon)) throw Error("product of actions of different monoids");
    return ProductInstance<I1, I2>{std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// Finite covers and the exact minimum-subcover solver.
// ---------------------------------------------------------------------------

struct FiniteCover {
    std::size_t ambient = 0;                          // points are 0..ambient-1
    std::vector<std::vector<std::uint32_t>> members;  // each sorted

    static FiniteCover of(std::size_t ambient, std::vector<std::vector<std::uint32_t>> members) {
        FiniteCover u{ambient, std::move(members)};
        std::vector<char> seen(ambient, 0);
        for (auto& m : u.members) {
            std::sort(m.begin(), m.end());
            m.erase(std::unique(m.begin(), m.end()), m.end());
            for (auto p : m) {
                if (p >= ambient) throw Error("cover member outside ambient");
                seen[p] = 1;
            }
        }
        std::sort(u.members.begin(), u.members.end());
        u.members.erase(std::unique(u.members.begin(), u.members.end()), u.members.end());
        if (!std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }))
            throw Error("members do not cover the ambient set");
        return u;
    }
};

struct CoverBudget {
    std::size_t max_ambient = (1u << 12);
    std::size_t max_members = (1u << 12);
    std::uint64_t max_nodes = (1u << 26);
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
inline void set_bit(Bits& b, std::size_t i) { b[i / 64] |= (std::uint64_t(1) << (i % 64)); }
inline bool subset_of(const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}
inline std::size_t popcount(const Bits& b) {
    std::size_t c = 0;
    for (auto w : b) c += std::size_t(__builtin_popcountll(w));
    return c;
}

struct CoverSolver {
    std::vector<Bits> members;
    Bits target;
    std::size_t best;
    std::uint64_t nodes = 0;
    std::uint64_t max_nodes;

    void run(const Bits& covered, std::size_t used) {
        if (++nodes > max_nodes) throw ResourceLimitError("set-cover search budget exhausted");
        if (used >= best) return;
        // first uncovered target point
        std::size_t pt = SIZE_MAX;
        for (std::size_t w = 0; w < target.size(); ++w) {
            std::uint64_t need = target[w] & ~covered[w];
            if (need) {
                pt = w * 64 + std::size_t(__builtin_ctzll(need));
                break;
            }
        }
        if (pt == SIZE_MAX) {
            best = used;
            return;
        }
        // lower bound: remaining points / largest member
        std::size_t remaining = 0, widest = 0;
        for (std::size_t w = 0; w < target.size(); ++w)
            remaining += std::size_t(__builtin_popcountll(target[w] & ~covered[w]));
        for (const auto& m : members) {
            std::size_t gain = 0;
            for (std::size_t w = 0; w < target.size(); ++w)
                gain += std::size_t(__builtin_popcountll(m[w] & target[w] & ~covered[w]));
            widest = std::max(widest, gain);
        }
        if (widest == 0) return;  // uncoverable from here
        if (used + (remaining + widest - 1) / widest >= best) return;
        // branch over members containing the chosen point, widest first
        std::vector<std::pair<std::size_t, std::size_t>> cands;
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (!(members[i][pt / 64] & (std::uint64_t(1) << (pt % 64)))) continue;
            std::size_t gain = 0;
            for (std::size_t w = 0; w < target.size(); ++w)
                gain += std::size_t(__builtin_popcountll(members[i][w] & target[w] & ~covered[w]));
            cands.emplace_back(gain, i);
        }
        std::sort(cands.rbegin(), cands.rend());
        for (auto [gain, i] : cands) {
            Bits next = covered;
            for (std::size_t w = 0; w < next.size(); ++w) next[w] |= members[i][w];
            run(next, used + 1);
        }
    }
};

}  // namespace detail

// Exact minimum number of members of U needed to cover B (indices into the
// ambient set). Branch and bound with a greedy upper bound.
inline std::uint32_t min_subcover(const FiniteCover& u, const std::vector<std::uint32_t>& b,
                                  const CoverBudget& budget = {}) {
    if (u.ambient > budget.max_ambient || u.members.size() > budget.max_members)
        throw ResourceLimitError("cover exceeds the exact-solver budget");
    if (b.empty()) return 0;
    detail::Bits target = detail::make_bits(u.ambient);
    for (auto p : b) {
        if (p >= u.ambient) throw Error("subset point outside ambient");
        detail::set_bit(target, p);
    }
    std::vector<detail::Bits> ms;
    ms.reserve(u.members.size());
    for (const auto& m : u.members) {
        detail::Bits bits = detail::make_bits(u.ambient);
        for (auto p : m) detail::set_bit(bits, p);
        ms.push_back(std::move(bits));
    }
    // coverage check
    {
        detail::Bits all = detail::make_bits(u.ambient);
        for (const auto& m : ms)
            for (std::size_t w = 0; w < all.size(); ++w) all[w] |= m[w];
        if (!detail::subset_of(target, all)) throw Error("cover does not cover the requested subset");
    }
    // greedy upper bound
    std::size_t ub = 0;
    {
        detail::Bits covered = detail::make_bits(u.ambient);
        while (!detail::subset_of(target, covered)) {
            std::size_t bi = SIZE_MAX, bg = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) {
                std::size_t gain = 0;
                for (std::size_t w = 0; w < covered.size(); ++w)
                    gain += std::size_t(__builtin_popcountll(ms[i][w] & target[w] & ~covered[w]));
                if (gain > bg) {
                    bg = gain;
                    bi = i;
                }
            }
            for (std::size_t w = 0; w < covered.size(); ++w) covered[w] |= ms[bi][w];
            ++ub;
        }
    }
    detail::CoverSolver solver{std::move(ms), std::move(target), ub, 0, budget.max_nodes};
    solver.run(detail::make_bits(u.ambient), 0);
    return std::uint32_t(solver.best);
}

inline std::uint32_t min_subcover_all(const FiniteCover& u, const CoverBudget& budget = {}) {
    std::vector<std::uint32_t> all(u.ambient);
    for (std::size_t i = 0; i < u.ambient; ++i) all[i] = std::uint32_t(i);
    return min_subcover(u, all, budget);
}

// ---------------------------------------------------------------------------
// Cover instance over an enumerated finite carrier with a right action.
// ---------------------------------------------------------------------------

struct CovFinAb {
    action::MonoidAction<action::FinAbCarrier> act;
    CoverBudget budget;
    using Element = FiniteCover;

    std::vector<std::uint32_t> point_map(const monoid::MonoidElement& s) const {
        auto h = action::endo_of(act, s);
        const auto& g = act.carrier.group;
        std::uint64_t n = g.order();
        std::vector<std::uint32_t> pm(n);
        for (std::uint64_t r = 0; r < n; ++r)
            pm[r] = std::uint32_t(fingroup::rank_of(g, fingroup::apply(h, fingroup::unrank(g, r))));
        return pm;
    }

    Element apply(const monoid::MonoidElement& s, const Element& u) const {
        if (u.ambient != act.carrier.group.order())
            throw AmbientMismatchError("cover ambient does not match the carrier");
        auto pm = point_map(s);
        std::vector<std::vector<std::uint32_t>> members;
        for (const auto& m : u.members) {
            std::vector<char> in(u.ambient, 0);
            for (auto p : m) in[p] = 1;
            std::vector<std::uint32_t> pre;
            for (std::uint32_t x = 0; x < u.ambient; ++x)
                if (in[pm[x]]) pre.push_back(x);
            if (!pre.empty()) members.push_back(std::move(pre));
        }
        return FiniteCover::of(u.ambient, std::move(members));
    }
    Element combine(const Element& a, const Element& b) const { return join(a, b); }
    NormValue norm(const Element& u) const { return NormValue::of_count(min_subcover_all(u, budget)); }

    static Element join(const Element& a, const Element& b) {
        if (a.ambient != b.ambient) throw AmbientMismatchError("join of covers of different sets");
        std::set<std::vector<std::uint32_t>> members;
        for (const auto& x : a.members)
            for (const auto& y : b.members) {
                std::vector<std::uint32_t> inter;
                std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                                      std::back_inserter(inter));
                if (!inter.empty()) members.insert(std::move(inter));
            }
        return FiniteCover::of(a.ambient, {members.begin(), members.end()});
    }
};

// ---------------------------------------------------------------------------
// Conditional cover counts along a surjection pi : K -> Q.
// ---------------------------------------------------------------------------

inline void require_surjective(const std::vector<std::uint32_t>& pi, std::size_t q_size) {
    std::vector<char> hit(q_size, 0);
    for (auto q : pi) {
        if (q >= q_size) throw Error("projection lands outside Q");
        hit[q] = 1;
    }
    if (!std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; }))
        throw Error("projection is not surjective");
}

// N(U|W) = max over members W of the minimal subcover of pi^{-1}(W).
inline std::uint32_t conditional_count(const FiniteCover& u, const FiniteCover& w,
                                       const std::vector<std::uint32_t>& pi,
                                       const CoverBudget& budget = {}) {
    if (pi.size() != u.ambient) throw Error("projection domain mismatch");
    require_surjective(pi, w.ambient);
    std::uint32_t best = 0;
    for (const auto& member : w.members) {
        std::vector<char> in(w.ambient, 0);
        for (auto q : member) in[q] = 1;
        std::vector<std::uint32_t> fiber;
        for (std::uint32_t x = 0; x < u.ambient; ++x)
            if (in[pi[x]]) fiber.push_back(x);
        best = std::max(best, min_subcover(u, fiber, budget));
    }
    return best;
}

// N(U|pi) = max over points q of the minimal subcover of the fiber over q.
inline std::uint32_t fiber_count(const FiniteCover& u, const std::vector<std::uint32_t>& pi,
                                 std::size_t q_size, const CoverBudget& budget = {}) {
    if (pi.size() != u.ambient) throw Error("projection domain mismatch");
    require_surjective(pi, q_size);
    std::uint32_t best = 0;
    for (std::uint32_t q = 0; q < q_size; ++q) {
        std::vector<std::uint32_t> fiber;
        for (std::uint32_t x = 0; x < u.ambient; ++x)
            if (pi[x] == q) fiber.push_back(x);
        best = std::max(best, min_subcover(u, fiber, budget));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Even covers by translates of one neighborhood of the identity.
// ---------------------------------------------------------------------------

inline FiniteCover even_cover(const fingroup::FinAbGroup& g, const std::vector<std::uint32_t>& u0) {
    if (std::find(u0.begin(), u0.end(), 0u) == u0.end())
        throw Error("even cover needs the identity in the base neighborhood");
    std::uint64_t n = g.order();
    for (auto p : u0)
        if (p >= n) throw Error("neighborhood point outside the group");
    std::set<std::vector<std::uint32_t>> members;
    for (std::uint64_t r = 0; r < n; ++r) {
        auto x = fingroup::unrank(g, r);
        std::vector<std::uint32_t> tr;
        tr.reserve(u0.size());
        for (auto p : u0)
            tr.push_back(std::uint32_t(fingroup::rank_of(g, fingroup::add(g, x, fingroup::unrank(g, p)))));
        std::sort(tr.begin(), tr.end());
        members.insert(std::move(tr));
    }
    return FiniteCover::of(std::size_t(n), {members.begin(), members.end()});
}

inline FiniteCover quotient_even_cover(const fingroup::FinAbGroup& g,
                                       const std::vector<std::uint32_t>& u0,
                                       const std::vector<std::uint32_t>& pi, std::size_t q_size) {
    if (std::find(u0.begin(), u0.end(), 0u) == u0.end())
        throw Error("even cover needs the identity in the base neighborhood");
    require_surjective(pi, q_size);
    std::uint64_t n = g.order();
    for (auto p : u0)
        if (p >= n) throw Error("neighborhood point outside the group");
    std::set<std::vector<std::uint32_t>> members;
    for (std::uint64_t r = 0; r < n; ++r) {
        auto x = fingroup::unrank(g, r);
        std::vector<std::uint32_t> tr;
        for (auto p : u0)
            tr.push_back(pi[std::size_t(fingroup::rank_of(g, fingroup::add(g, x, fingroup::unrank(g, p))))]);
        std::sort(tr.begin(), tr.end());
        tr.erase(std::unique(tr.begin(), tr.end()), tr.end());
        members.insert(std::move(tr));
    }
    return FiniteCover::of(q_size, {members.begin(), members.end()});
}

// ---------------------------------------------------------------------------
// h_top at finite scale: per-level subcover counts of joined pullbacks (the
// limits vanish on finite carriers; the per-level counts are the oracle).
// ---------------------------------------------------------------------------

inline std::vector<TrajectoryEstimate> h_top_finite(
    const action::MonoidAction<action::FinAbCarrier>& rho, const std::vector<FiniteCover>& covers,
    const monoid::FolnerSequence& fol, int horizon, const CoverBudget& budget = {}) {
    CovFinAb inst{rho, budget};
    std::vector<TrajectoryEstimate> out;
    for (const auto& u : covers) out.push_back(entropy_at(inst, fol, u, horizon));
    return out;
}

// ---------------------------------------------------------------------------
// h_top for profinite duals through the open-subgroup index formula: the
// per-level value is log |T_F(lambda, W)| / |F| for finite subgroups W of the
// discrete side, which equals log [K : C_F(rho, W-perp)] / |F| exactly.
// ---------------------------------------------------------------------------

inline EntropyResult h_top_profinite(const action::MonoidAction<action::ShiftCarrier>& lambda,
                                     const std::vector<std::vector<shift::Configuration>>& subgroups,
                                     const monoid::FolnerSequence& fol, int horizon,
                                     std::uint64_t cap = (1u << 24)) {
    PfShift inst{lambda, cap};
    for (const auto& w : subgroups)
        if (!PfShift::is_subgroup(w))
            throw Error("h_top_profinite needs finite subgroups of the discrete side");
    return entropy(inst, fol, subgroups, horizon);
}

// ---------------------------------------------------------------------------
// Domination report: v1(T_F(a1,x)) <= v2(T_F(a2,y)) over sampled F.
// ---------------------------------------------------------------------------

struct DominationReport {
    bool dominated = true;
    std::vector<std::string> violations;
};

template <class I1, class I2>
DominationReport domination_check(const I1& a1, const I2& a2,
                                  const std::vector<typename I1::Element>& xs,
                                  const std::function<typename I2::Element(std::size_t)>& witness,
                                  const std::vector<std::vector<monoid::MonoidElement>>& f_samples) {
    DominationReport rep;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto y = witness(i);
        for (std::size_t k = 0; k < f_samples.size(); ++k) {
            double v1 = trajectory_norm(a1, f_samples[k], xs[i]).value;
            double v2 = trajectory_norm(a2, f_samples[k], y).value;
            if (v1 > v2 + 1e-9) {
                rep.dominated = false;
                rep.violations.push_back("sample " + std::to_string(i) + ", F-sample " +
                                         std::to_string(k) + ": " + std::to_string(v1) + " > " +
                                         std::to_string(v2));
            }
        }
    }
    return rep;
}

}  // namespace entromono::entropy
