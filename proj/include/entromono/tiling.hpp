#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "entromono/errors.hpp"

namespace entromono::tiling {

using Point = std::vector<std::int32_t>;

struct TileSystem {
    int dim = 1;
    std::vector<std::vector<Point>> shapes;  // ordered by increasing nominal size
    double epsilon = 0.1;

    TileSystem(int d, std::vector<std::vector<Point>> s, double eps)
        : dim(d), shapes(std::move(s)), epsilon(eps) {
        if (epsilon <= 0 || epsilon >= 0.5) throw Error("epsilon must lie in (0, 1/2)");
        if (shapes.empty()) throw Error("tile system needs at least one shape");
        for (auto& shape : shapes) {
            if (shape.empty()) throw Error("empty shape");
            for (const auto& p : shape)
                if (p.size() != std::size_t(dim)) throw Error("shape point dimension mismatch");
            std::sort(shape.begin(), shape.end());
            shape.erase(std::unique(shape.begin(), shape.end()), shape.end());
        }
    }
};

struct QuasiTiling {
    std::vector<Point> target;
    std::vector<std::vector<Point>> shapes;
    std::vector<std::vector<Point>> centers;  // centers[t] tiles with shapes[t]
};

struct TilingFailure {
    double leftover_ratio = 1.0;
};

inline Point translate(const Point& c, const Point& p) {
    Point q = c;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += p[i];
    return q;
}

// Greedy realization: largest shape first, candidate centers scanned in
// lexicographic order, a center accepted only when its full translate fits in
// the still-uncovered region. Tiles are therefore exactly disjoint; success
// is decided by the leftover bound alone.
inline std::variant<QuasiTiling, TilingFailure> quasi_tile(const TileSystem& sys,
                                                           const std::vector<Point>& f) {
    if (f.empty()) throw Error("cannot tile an empty set");
    std::set<Point> uncovered(f.begin(), f.end());
    const std::size_t total = uncovered.size();

    Point lo(f.front().size(), INT32_MAX), hi(f.front().size(), INT32_MIN);
    for (const auto& p : f)
        for (std::size_t i = 0; i < p.size(); ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }

    QuasiTiling out;
    out.target = f;
    out.shapes = sys.shapes;
    out.centers.resize(sys.shapes.size());

    std::vector<std::size_t> order(sys.shapes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sys.shapes[a].size() > sys.shapes[b].size();
    });

    for (std::size_t t : order) {
        const auto& shape = sys.shapes[t];
        Point smin(shape.front().size(), INT32_MAX), smax(shape.front().size(), INT32_MIN);
        for (const auto& p : shape)
            for (std::size_t i = 0; i < p.size(); ++i) {
                smin[i] = std::min(smin[i], p[i]);
                smax[i] = std::max(smax[i], p[i]);
            }
        Point c(lo.size()), from(lo.size()), to(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            from[i] = lo[i] - smax[i];
            to[i] = hi[i] - smin[i];
        }
        c = from;
        for (;;) {
            bool fits = true;
            for (const auto& p : shape)
                if (!uncovered.count(translate(c, p))) {
                    fits = false;
                    break;
                }
            if (fits) {
                out.centers[t].push_back(c);
                for (const auto& p : shape) uncovered.erase(translate(c, p));
            }
            std::size_t i = c.size();
            while (i-- > 0) {
                if (c[i] < to[i]) {
                    ++c[i];
                    break;
                }
                c[i] = from[i];
                if (i == 0) goto stage_done;
            }
        }
    stage_done:;
    }

    double leftover = double(uncovered.size()) / double(total);
    if (leftover > sys.epsilon) return TilingFailure{leftover};
    return out;
}

struct VerifyResult {
    bool ok = true;
    std::string violated_clause;  // "QT.1" / "QT.2" / "QT.3"
    std::string witness;
};

inline std::string point_str(const Point& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

// Independent certification of the three quasi-tiling clauses.
inline VerifyResult verify_quasi_tiling(const QuasiTiling& qt, double epsilon) {
    VerifyResult res;
    std::set<Point> target(qt.target.begin(), qt.target.end());
    std::vector<std::set<Point>> tiles;
    for (std::size_t t = 0; t < qt.shapes.size(); ++t) {
        std::set<Point> block;
        for (const auto& c : (t < qt.centers.size() ? qt.centers[t] : std::vector<Point>{})) {
            for (const auto& p : qt.shapes[t]) {
                Point q = translate(c, p);
                if (!target.count(q)) {
                    res.ok = false;
                    res.violated_clause = "QT.1";
                    res.witness = "translate " + point_str(q) + " escapes the target";
                    return res;
                }
                block.insert(q);
            }
        }
        std::size_t nominal =
            (t < qt.centers.size() ? qt.centers[t].size() : 0) * qt.shapes[t].size();
        if (double(block.size()) + 1e-12 < (1.0 - epsilon) * double(nominal)) {
            res.ok = false;
            res.violated_clause = "QT.1";
            res.witness = "shape " + std::to_string(t) + " covers " + std::to_string(block.size()) +
                          " of nominal " + std::to_string(nominal);
            return res;
        }
        tiles.push_back(std::move(block));
    }
    for (std::size_t a = 0; a < tiles.size(); ++a)
        for (std::size_t b = a + 1; b < tiles.size(); ++b)
            for (const auto& p : tiles[a])
                if (tiles[b].count(p)) {
                    res.ok = false;
                    res.violated_clause = "QT.2";
                    res.witness = "point " + point_str(p) + " lies in blocks " + std::to_string(a) +
                                  " and " + std::to_string(b);
                    return res;
                }
    std::set<Point> covered;
    for (const auto& block : tiles) covered.insert(block.begin(), block.end());
    std::size_t leftover = target.size() - covered.size();
    if (double(leftover) > epsilon * double(target.size())) {
        res.ok = false;
        res.violated_clause = "QT.3";
        res.witness = std::to_string(leftover) + " of " + std::to_string(target.size()) +
                      " points uncovered";
        return res;
    }
    return res;
}

// Lattice boxes as point sets: the product of [lo_i, hi_i) ranges.
inline std::vector<Point> box(const std::vector<std::pair<std::int32_t, std::int32_t>>& ranges) {
    std::vector<Point> out;
    Point cur(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (ranges[i].first >= ranges[i].second) throw Error("empty box range");
        cur[i] = ranges[i].first;
    }
    for (;;) {
        out.push_back(cur);
        std::size_t i = cur.size();
        bool done = true;
        while (i-- > 0) {
            if (cur[i] + 1 < ranges[i].second) {
                ++cur[i];
                done = false;
                break;
            }
            cur[i] = ranges[i].first;
        }
        if (done) break;
    }
    return out;
}

}  // namespace entromono::tiling
