#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "entromono/errors.hpp"
#include "entromono/fingroup.hpp"
#include "entromono/shiftspace.hpp"

namespace entromono::shift {

// Identifies the configurations supported inside a finite window of sites
// with the finite group base^|window|, so lattice arithmetic and annihilator
// calculus apply to them. Slot layout: coordinate i of the base at site t
// lands in slot i*|window| + t, matching the invariant-factor order of the
// power group (base factors ascending, each repeated per site).
struct WindowEmbedding {
    ShiftSpace space;
    std::vector<Index> sites;  // sorted, unique
    fingroup::FinAbGroup group;

    // An empty window is the zero subgroup; its group is trivial.
    WindowEmbedding(ShiftSpace sp, std::vector<Index> window_sites)
        : space(std::move(sp)), sites(std::move(window_sites)) {
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        for (const auto& s : sites)
            if (!index_valid(space, s)) throw AmbientMismatchError("window site outside index set");
        group = fingroup::power_group(space.base, sites.size());
    }

    std::size_t site_slot(const Index& i) const {
        auto it = std::lower_bound(sites.begin(), sites.end(), i);
        if (it == sites.end() || *it != i) throw AmbientMismatchError("site outside window");
        return std::size_t(it - sites.begin());
    }

    fingroup::Element embed(const Configuration& x) const {
        const std::size_t n = sites.size();
        auto e = fingroup::zero(group);
        for (const auto& [idx, val] : x.entries) {
            std::size_t t = site_slot(idx);
            for (std::size_t i = 0; i < space.base.rank(); ++i) e.coords[i * n + t] = val.coords[i];
        }
        return e;
    }

    Configuration extract(const fingroup::Element& e) const {
        const std::size_t n = sites.size();
        Configuration c{space, {}};
        for (std::size_t t = 0; t < n; ++t) {
            std::vector<std::int64_t> v(space.base.rank());
            bool nz = false;
            for (std::size_t i = 0; i < space.base.rank(); ++i) {
                v[i] = e.coords[i * n + t];
                nz = nz || v[i] != 0;
            }
            if (nz) c.entries.emplace_back(sites[t], fingroup::Element{std::move(v)});
        }
        return c;
    }

    // 0/1 matrix of the clipped translation by `by` (entries leaving the
    // window are dropped), as an endomorphism of the window group.
    fingroup::Hom clipped_translation(const std::vector<std::int64_t>& by) const {
        const std::size_t n = sites.size();
        const std::size_t k = group.rank();
        std::vector<std::int64_t> m(k * k, 0);
        for (std::size_t t = 0; t < n; ++t) {
            Index moved = sites[t];
            bool ok = true;
            for (std::size_t c = 0; c < moved.size(); ++c) {
                std::int64_t nc = std::int64_t(moved[c]) + by[c];
                if (nc > INT32_MAX || nc < INT32_MIN) {
                    ok = false;
                    break;
                }
                moved[c] = std::int32_t(nc);
            }
            if (!ok || !index_valid(space, moved)) continue;
            auto it = std::lower_bound(sites.begin(), sites.end(), moved);
            if (it == sites.end() || *it != moved) continue;
            std::size_t tt = std::size_t(it - sites.begin());
            for (std::size_t i = 0; i < space.base.rank(); ++i) m[(i * n + tt) * k + (i * n + t)] = 1;
        }
        return fingroup::Hom(group, group, std::move(m));
    }
};

}  // namespace entromono::shift
