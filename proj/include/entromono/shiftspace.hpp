#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "entromono/errors.hpp"
#include "entromono/fingroup.hpp"

namespace entromono::shift {

enum class IndexKind { NonNeg, Full };

struct ShiftSpace {
    fingroup::FinAbGroup base;
    int dim = 1;
    IndexKind kind = IndexKind::NonNeg;

    ShiftSpace() = default;
    ShiftSpace(fingroup::FinAbGroup b, int d, IndexKind k) : base(std::move(b)), dim(d), kind(k) {
        if (d < 1) throw Error("shift space dimension must be >= 1");
        if (base.order() < 2) throw Error("shift space needs a nontrivial base group");
    }
    bool operator==(const ShiftSpace&) const = default;
};

using Index = std::vector<std::int32_t>;

inline bool index_valid(const ShiftSpace& s, const Index& i) {
    if (i.size() != std::size_t(s.dim)) return false;
    if (s.kind == IndexKind::NonNeg)
        return std::all_of(i.begin(), i.end(), [](auto c) { return c >= 0; });
    return true;
}

// Finitely supported map from the index set into the base group; zero values
// are never stored and entries are kept sorted by index.
struct Configuration {
    ShiftSpace space;
    std::vector<std::pair<Index, fingroup::Element>> entries;

    bool operator==(const Configuration& o) const { return entries == o.entries; }
    bool operator<(const Configuration& o) const { return entries < o.entries; }
};

inline Configuration zero_config(const ShiftSpace& s) { return Configuration{s, {}}; }

inline Configuration delta(const ShiftSpace& s, Index i, fingroup::Element v) {
    if (!index_valid(s, i)) throw AmbientMismatchError("index outside the shift index set");
    if (v.coords.size() != s.base.rank()) throw AmbientMismatchError("value not in base group");
    Configuration c{s, {}};
    if (!fingroup::is_zero(v)) c.entries.emplace_back(std::move(i), std::move(v));
    return c;
}

inline Configuration add_config(const Configuration& x, const Configuration& y) {
    if (!(x.space == y.space)) throw AmbientMismatchError("configurations from different spaces");
    Configuration z{x.space, {}};
    z.entries.reserve(x.entries.size() + y.entries.size());
    std::size_t i = 0, j = 0;
    while (i < x.entries.size() || j < y.entries.size()) {
        if (j == y.entries.size() || (i < x.entries.size() && x.entries[i].first < y.entries[j].first)) {
            z.entries.push_back(x.entries[i++]);
        } else if (i == x.entries.size() || y.entries[j].first < x.entries[i].first) {
            z.entries.push_back(y.entries[j++]);
        } else {
            auto v = fingroup::add(x.space.base, x.entries[i].second, y.entries[j].second);
            if (!fingroup::is_zero(v)) z.entries.emplace_back(x.entries[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return z;
}

inline Configuration neg_config(const Configuration& x) {
    Configuration z = x;
    for (auto& [i, v] : z.entries) v = fingroup::neg(x.space.base, v);
    return z;
}

// Push moves mass away from the origin ((s.x)(i) = x(i-s)), pull toward it
// ((s.x)(i) = x(i+s)); on NonNeg spaces pull discards entries clipped below 0.
enum class TranslationKind { Push, Pull };

struct TranslationEndo {
    ShiftSpace space;
    std::vector<std::int64_t> vector;
    TranslationKind kind = TranslationKind::Push;

    TranslationEndo() = default;
    TranslationEndo(ShiftSpace s, std::vector<std::int64_t> v, TranslationKind k)
        : space(std::move(s)), vector(std::move(v)), kind(k) {
        if (vector.size() != std::size_t(space.dim)) throw Error("translation vector dimension mismatch");
        if (space.kind == IndexKind::NonNeg)
            for (auto c : vector)
                if (c < 0) throw Error("translation by a negative vector on a one-sided space");
    }
    bool operator==(const TranslationEndo&) const = default;
};

inline Configuration translate(const Configuration& x, const std::vector<std::int64_t>& by,
                               bool clip_nonneg) {
    Configuration z{x.space, {}};
    z.entries.reserve(x.entries.size());
    for (const auto& [idx, val] : x.entries) {
        Index ni = idx;
        bool keep = true;
        for (std::size_t k = 0; k < ni.size(); ++k) {
            std::int64_t c = std::int64_t(ni[k]) + by[k];
            if (clip_nonneg && c < 0) {
                keep = false;
                break;
            }
            if (c > INT32_MAX || c < INT32_MIN) throw ResourceLimitError("index overflow");
            ni[k] = std::int32_t(c);
        }
        if (keep) z.entries.emplace_back(std::move(ni), val);
    }
    std::sort(z.entries.begin(), z.entries.end());
    return z;
}

inline Configuration apply_translation(const TranslationEndo& e, const Configuration& x) {
    if (!(x.space == e.space)) throw AmbientMismatchError("configuration not in endo space");
    std::vector<std::int64_t> by = e.vector;
    if (e.kind == TranslationKind::Pull)
        for (auto& c : by) c = -c;
    return translate(x, by, x.space.kind == IndexKind::NonNeg);
}

// Elementwise sums {a+b}, deduplicated; fails loudly past the cap instead of
// truncating.
inline std::vector<Configuration> sumset(const std::vector<Configuration>& a,
                                         const std::vector<Configuration>& b,
                                         std::uint64_t cap = (1u << 24)) {
    if (a.empty() || b.empty()) throw Error("sumset of an empty set");
    if (!(a.front().space == b.front().space))
        throw AmbientMismatchError("sumset over different spaces");
    std::set<Configuration> out;
    for (const auto& x : a)
        for (const auto& y : b) {
            out.insert(add_config(x, y));
            if (out.size() > cap) throw ResourceLimitError("sumset exceeds configured cap");
        }
    return {out.begin(), out.end()};
}

}  // namespace entromono::shift
