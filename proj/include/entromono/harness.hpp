#pragma once

#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "entromono/action.hpp"
#include "entromono/duality.hpp"
#include "entromono/entropy.hpp"
#include "entromono/errors.hpp"
#include "entromono/fourier.hpp"
#include "entromono/monoid.hpp"
#include "entromono/tiling.hpp"

namespace entromono::harness {

using nlohmann::json;

inline constexpr const char* kScenarioSchema = "entromono.scenario/1";
inline constexpr const char* kReportSchema = "entromono.report/1";

struct Options {
    int horizon_override = 0;
    std::string cache_dir;  // empty: use ENTROMONO_CACHE_DIR; still empty: caching off
    int jobs = 1;
};

struct RunReport {
    json machine;
    std::string human;
    bool pass = false;
};

// ---------------------------------------------------------------------------
// Scenario parsing. All numbers in scenario files are exact: integers stay
// integers, tolerances and epsilons are strings like "1e-9" or "1/10".
// ---------------------------------------------------------------------------

inline const json& require_field(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(std::string("missing field '") + key + "' in " + where);
    return *it;
}

inline double parse_exact_number(const json& j, const char* where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            double num = std::stod(s.substr(0, slash));
            double den = std::stod(s.substr(slash + 1));
            if (den == 0) throw SchemaError(std::string("zero denominator in ") + where);
            return num / den;
        }
        return std::stod(s);
    }
    throw SchemaError(std::string("expected a number or rational string in ") + where);
}

inline monoid::AmenableMonoid parse_monoid(const json& j) {
    std::string kind = require_field(j, "kind", "monoid").get<std::string>();
    if (kind == "free_comm") return monoid::AmenableMonoid::free_comm(require_field(j, "dim", "monoid").get<int>());
    if (kind == "lattice") return monoid::AmenableMonoid::lattice(require_field(j, "dim", "monoid").get<int>());
    if (kind == "numerical")
        return monoid::AmenableMonoid::numerical(
            require_field(j, "generators", "monoid").get<std::vector<std::int64_t>>());
    throw SchemaError("unknown monoid kind '" + kind + "'");
}

struct ShiftScenario {
    action::MonoidAction<action::ShiftCarrier> act;
    std::vector<std::vector<shift::Configuration>> family;
};

struct FinAbScenario {
    action::MonoidAction<action::FinAbCarrier> act;
    std::vector<std::vector<fingroup::Element>> family;
};

using Loaded = std::variant<ShiftScenario, FinAbScenario>;

inline ShiftScenario parse_shift_scenario(const json& j, const monoid::AmenableMonoid& mon,
                                          action::Side side) {
    const json& carrier = require_field(j, "carrier", "scenario");
    fingroup::FinAbGroup base(require_field(carrier, "base", "carrier").get<std::vector<std::int64_t>>());
    int dim = require_field(carrier, "dim", "carrier").get<int>();
    std::string idx = require_field(carrier, "index", "carrier").get<std::string>();
    shift::ShiftSpace space(base, dim,
                            idx == "nonneg" ? shift::IndexKind::NonNeg : shift::IndexKind::Full);

    const json& act_j = require_field(j, "action", "scenario");
    if (require_field(act_j, "kind", "action").get<std::string>() != "translation")
        throw SchemaError("shift carriers take translation actions");
    std::vector<shift::TranslationEndo> gens;
    for (const auto& g : require_field(act_j, "generators", "action")) {
        std::string kind = require_field(g, "kind", "generator").get<std::string>();
        auto vec = require_field(g, "vector", "generator").get<std::vector<std::int64_t>>();
        gens.emplace_back(space, vec,
                          kind == "push" ? shift::TranslationKind::Push : shift::TranslationKind::Pull);
    }
    ShiftScenario out{action::make_shift_action(mon, space, std::move(gens), side), {}};

    if (j.contains("family")) {
        const json& fam = j["family"];
        std::string kind = require_field(fam, "kind", "family").get<std::string>();
        if (kind == "single_site") {
            std::vector<shift::Configuration> e{shift::zero_config(space)};
            shift::Index origin(std::size_t(dim), 0);
            for (std::uint64_t r = 1; r < base.order(); ++r)
                e.push_back(shift::delta(space, origin, fingroup::unrank(base, r)));
            std::sort(e.begin(), e.end());
            out.family.push_back(std::move(e));
        } else if (kind == "custom") {
            for (const auto& member : require_field(fam, "members", "family")) {
                std::vector<shift::Configuration> e{shift::zero_config(space)};
                for (const auto& pt : require_field(member, "points", "family member")) {
                    auto at = require_field(pt, "at", "point").get<std::vector<std::int32_t>>();
                    auto val = require_field(pt, "value", "point").get<std::vector<std::int64_t>>();
                    e.push_back(shift::delta(space, at, fingroup::make_element(base, val)));
                }
                std::sort(e.begin(), e.end());
                e.erase(std::unique(e.begin(), e.end()), e.end());
                out.family.push_back(std::move(e));
            }
        } else {
            throw SchemaError("unknown shift family kind '" + kind + "'");
        }
    }
    return out;
}

inline FinAbScenario parse_finab_scenario(const json& j, const monoid::AmenableMonoid& mon,
                                          action::Side side) {
    const json& carrier = require_field(j, "carrier", "scenario");
    fingroup::FinAbGroup group(
        require_field(carrier, "factors", "carrier").get<std::vector<std::int64_t>>());
    const json& act_j = require_field(j, "action", "scenario");
    if (require_field(act_j, "kind", "action").get<std::string>() != "matrix")
        throw SchemaError("finite carriers take matrix actions");
    std::vector<fingroup::Hom> gens;
    for (const auto& g : require_field(act_j, "generators", "action")) {
        std::vector<std::int64_t> flat;
        for (const auto& row : g)
            for (const auto& v : row) flat.push_back(v.get<std::int64_t>());
        gens.emplace_back(group, group, std::move(flat));
    }
    FinAbScenario out{mon.kind() == monoid::Kind::Numerical
                          ? action::make_numerical_finab_action(mon, group, gens.at(0), side)
                          : action::make_finab_action(mon, group, std::move(gens), side),
                      {}};

    if (j.contains("family")) {
        const json& fam = j["family"];
        std::string kind = require_field(fam, "kind", "family").get<std::string>();
        if (kind == "cyclic_subgroups") {
            for (const auto& x : fingroup::elements(group)) {
                if (fingroup::is_zero(x)) continue;
                auto h = fingroup::span(group, {x});
                out.family.push_back(fingroup::subgroup_elements(h));
            }
            std::sort(out.family.begin(), out.family.end());
            out.family.erase(std::unique(out.family.begin(), out.family.end()), out.family.end());
        } else if (kind == "full_group") {
            out.family.push_back(fingroup::elements(group));
        } else if (kind == "custom") {
            for (const auto& member : require_field(fam, "members", "family")) {
                std::vector<fingroup::Element> e{fingroup::zero(group)};
                for (const auto& coords : member)
                    e.push_back(fingroup::make_element(group, coords.get<std::vector<std::int64_t>>()));
                std::sort(e.begin(), e.end());
                e.erase(std::unique(e.begin(), e.end()), e.end());
                out.family.push_back(std::move(e));
            }
        } else {
            throw SchemaError("unknown finab family kind '" + kind + "'");
        }
    }
    return out;
}

inline Loaded parse_scenario(const json& j, action::Side side = action::Side::Left) {
    if (j.value("schema", kScenarioSchema) != std::string(kScenarioSchema))
        throw SchemaError("unsupported scenario schema version");
    auto mon = parse_monoid(require_field(j, "monoid", "scenario"));
    std::string kind =
        require_field(require_field(j, "carrier", "scenario"), "kind", "carrier").get<std::string>();
    if (kind == "shift") return parse_shift_scenario(j, mon, side);
    if (kind == "finab") return parse_finab_scenario(j, mon, side);
    throw SchemaError("unknown carrier kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Content-addressed cache of per-level trajectory counts.
// ---------------------------------------------------------------------------

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

struct Cache {
    std::string dir;
    std::uint64_t hits = 0, misses = 0;
    std::vector<std::string> warnings;

    bool enabled() const { return !dir.empty(); }

    std::optional<json> get(const std::string& key) {
        if (!enabled()) return std::nullopt;
        auto path = std::filesystem::path(dir) / (fnv1a_hex(key) + ".json");
        std::ifstream in(path);
        if (!in) {
            ++misses;
            return std::nullopt;
        }
        try {
            json rec = json::parse(in);
            if (rec.at("key").get<std::string>() != key || !rec.contains("value"))
                throw SchemaError("cache record mismatch");
            ++hits;
            return rec["value"];
        } catch (const std::exception&) {
            warnings.push_back("corrupt cache record " + path.string() + " recomputed");
            std::error_code ec;
            std::filesystem::remove(path, ec);
            ++misses;
            return std::nullopt;
        }
    }

    void put(const std::string& key, const json& value) {
        if (!enabled()) return;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        auto path = std::filesystem::path(dir) / (fnv1a_hex(key) + ".json");
        auto tmp = path;
        tmp += ".tmp" + std::to_string(std::uint64_t(::getpid()));
        {
            std::ofstream out(tmp);
            out << json{{"key", key}, {"value", value}}.dump();
        }
        std::filesystem::rename(tmp, path, ec);  // atomic publish
        if (ec) std::filesystem::remove(tmp, ec);
    }
};

struct LevelData {
    std::size_t box = 1;
    std::uint64_t count = 1;
    double value() const { return std::log(double(count)) / double(box); }
};

template <class Inst>
std::vector<LevelData> levels_for(const Inst& inst, const monoid::FolnerSequence& fol,
                                  const typename Inst::Element& member, int horizon, Cache& cache,
                                  const std::string& keybase, int jobs) {
    std::vector<std::optional<LevelData>> got(static_cast<std::size_t>(horizon));
    std::vector<int> missing;
    for (int n = 1; n <= horizon; ++n) {
        auto key = keybase + "|n=" + std::to_string(n);
        if (auto rec = cache.get(key)) {
            got[std::size_t(n - 1)] =
                LevelData{rec->at("box").get<std::size_t>(), rec->at("count").get<std::uint64_t>()};
        } else {
            missing.push_back(n);
        }
    }
    auto compute = [&](int n) {
        auto f = fol.set(n);
        auto nv = entropy::trajectory_norm(inst, f, member);
        if (!nv.count) throw Error("level count unavailable");
        return LevelData{f.size(), *nv.count};
    };
    if (jobs > 1 && missing.size() > 1) {
        std::vector<std::future<LevelData>> futs;
        for (int n : missing)
            futs.push_back(std::async(std::launch::async, [&, n] { return compute(n); }));
        for (std::size_t i = 0; i < missing.size(); ++i) got[std::size_t(missing[i] - 1)] = futs[i].get();
    } else {
        for (int n : missing) got[std::size_t(n - 1)] = compute(n);
    }
    std::vector<LevelData> out;
    for (int n = 1; n <= horizon; ++n) {
        const auto& ld = *got[std::size_t(n - 1)];
        cache.put(keybase + "|n=" + std::to_string(n),
                  json{{"box", ld.box}, {"count", ld.count}});
        out.push_back(ld);
    }
    return out;
}

inline entropy::TrajectoryEstimate estimate_from(const std::vector<LevelData>& lv) {
    std::vector<entropy::LevelValue> out;
    for (const auto& l : lv)
        out.push_back(entropy::LevelValue{l.box, l.count, std::log(double(l.count))});
    return entropy::TrajectoryEstimate::assemble(std::move(out));
}

inline json levels_json(const std::vector<LevelData>& lv) {
    json arr = json::array();
    for (std::size_t n = 0; n < lv.size(); ++n)
        arr.push_back(json{{"n", n + 1},
                           {"box", lv[n].box},
                           {"count", lv[n].count},
                           {"value", lv[n].value()}});
    return arr;
}

inline bool counts_are_log_of(const std::vector<LevelData>& lv, std::uint64_t base) {
    for (const auto& l : lv) {
        std::uint64_t expect = 1;
        for (std::size_t i = 0; i < l.box; ++i) expect = fingroup::checked_mul_u64(expect, base);
        if (l.count != expect) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Command implementations.
// ---------------------------------------------------------------------------

namespace detail {

struct Ctx {
    const json& scenario;
    Cache cache;
    int horizon;
    double tolerance;
    int jobs;
    std::string scenario_key;  // canonical digest input for cache keys
};

inline std::string member_tag(const json& scenario, const std::string& side, std::size_t idx) {
    return scenario.dump() + "|side=" + side + "|member=" + std::to_string(idx);
}

inline void require_family(std::size_t n) {
    if (n == 0) throw SchemaError("this command needs a non-empty family in the scenario");
}

inline json entropy_alg(Ctx& c, const Loaded& loaded) {
    json result;
    json members = json::array();
    bool pass = true;
    double sup = 0;
    std::optional<std::uint64_t> expect_log_of;
    if (c.scenario.contains("expect") && c.scenario["expect"].contains("per_level_log_of"))
        expect_log_of = c.scenario["expect"]["per_level_log_of"].get<std::uint64_t>();

    auto run_family = [&](const auto& inst, const auto& family, const monoid::FolnerSequence& fol) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            auto lv = levels_for(inst, fol, family[i], c.horizon, c.cache,
                                 member_tag(c.scenario, "alg", i), c.jobs);
            auto est = estimate_from(lv);
            bool member_pass = expect_log_of ? counts_are_log_of(lv, *expect_log_of)
                                             : (est.exact || est.cauchy_gap <= c.tolerance);
            pass = pass && member_pass;
            sup = std::max(sup, est.limit);
            members.push_back(json{{"member", i},
                                   {"levels", levels_json(lv)},
                                   {"limit", est.limit},
                                   {"cauchy_gap", est.cauchy_gap},
                                   {"exact", est.exact},
                                   {"pass", member_pass}});
        }
    };

    if (const auto* s = std::get_if<ShiftScenario>(&loaded)) {
        require_family(s->family.size());
        entropy::PfShift inst{s->act};
        run_family(inst, s->family, monoid::FolnerSequence{s->act.mon, {}});
    } else {
        const auto& f = std::get<FinAbScenario>(loaded);
        require_family(f.family.size());
        entropy::PfFinAb inst{f.act};
        run_family(inst, f.family, monoid::FolnerSequence{f.act.mon, {}});
    }
    result["members"] = members;
    result["value"] = sup;
    result["pass"] = pass;
    return result;
}

inline entropy::FiniteCover cover_pullback(const entropy::FiniteCover& u, const fingroup::Hom& h) {
    const auto& g = h.source;
    std::uint64_t n = g.order();
    std::vector<std::uint32_t> pm(static_cast<std::size_t>(n));
    for (std::uint64_t r = 0; r < n; ++r)
        pm[std::size_t(r)] =
            std::uint32_t(fingroup::rank_of(h.target, fingroup::apply(h, fingroup::unrank(g, r))));
    std::vector<std::vector<std::uint32_t>> members;
    for (const auto& m : u.members) {
        std::vector<char> in(u.ambient, 0);
        for (auto p : m) in[p] = 1;
        std::vector<std::uint32_t> pre;
        for (std::uint32_t x = 0; x < n; ++x)
            if (in[pm[x]]) pre.push_back(x);
        if (!pre.empty()) members.push_back(std::move(pre));
    }
    return entropy::FiniteCover::of(std::size_t(n), std::move(members));
}

inline json bridge_shift(Ctx& c, const ShiftScenario& s) {
    json result;
    require_family(s.family.size());
    bool pass = true;
    json members = json::array();
    for (std::size_t i = 0; i < s.family.size(); ++i) {
        if (!entropy::PfShift::is_subgroup(s.family[i]))
            throw Error("bridge members must be finite subgroups of the discrete side");
        entropy::PfShift alg{s.act};
        alg.force_enumeration = true;  // the algebraic side counts points
        entropy::PfShift top{s.act};   // the profinite side uses the subgroup calculus
        monoid::FolnerSequence fol{s.act.mon, {}};
        auto lv_alg = levels_for(alg, fol, s.family[i], c.horizon, c.cache,
                                 member_tag(c.scenario, "alg", i), c.jobs);
        auto lv_top = levels_for(top, fol, s.family[i], c.horizon, c.cache,
                                 member_tag(c.scenario, "top", i), c.jobs);
        json table = json::array();
        bool member_pass = true;
        for (int n = 0; n < c.horizon; ++n) {
            bool eq = lv_alg[std::size_t(n)].count == lv_top[std::size_t(n)].count &&
                      lv_alg[std::size_t(n)].box == lv_top[std::size_t(n)].box;
            member_pass = member_pass && eq;
            table.push_back(json{{"n", n + 1},
                                 {"alg_count", lv_alg[std::size_t(n)].count},
                                 {"top_count", lv_top[std::size_t(n)].count},
                                 {"equal", eq}});
        }
        // windowed finite-cover oracle on the first few levels
        json oracle = json::array();
        int oracle_levels = 0;
        if (c.scenario.contains("window_oracle"))
            oracle_levels = c.scenario["window_oracle"].value("levels", 0);
        for (int n = 1; n <= oracle_levels; ++n) {
            auto f = fol.set(n);
            std::vector<shift::Index> sites;
            for (const auto& el : f) {
                auto t = action::endo_of(s.act, el);
                for (const auto& cfg : s.family[i])
                    for (const auto& [idx, val] : shift::apply_translation(t, cfg).entries)
                        sites.push_back(idx);
            }
            if (sites.empty()) continue;
            auto wq = duality::windowed_quotient(duality::ProfiniteDual{s.act}, sites, f);
            std::vector<fingroup::Element> w_gens;
            for (const auto& cfg : s.family[i]) w_gens.push_back(wq.window.embed(cfg));
            auto wperp = duality::annihilator(fingroup::span(wq.window.group, w_gens));
            std::vector<std::uint32_t> perp_pts;
            for (const auto& x : fingroup::subgroup_elements(wperp))
                perp_pts.push_back(std::uint32_t(fingroup::rank_of(wq.k_w, x)));
            auto u = entropy::even_cover(wq.k_w, perp_pts);
            std::optional<entropy::FiniteCover> joined;
            for (const auto& rho : wq.action_on_kw) {
                auto pulled = cover_pullback(u, rho);
                joined = joined ? entropy::CovFinAb::join(*joined, pulled) : pulled;
            }
            std::uint64_t count = entropy::min_subcover_all(*joined);
            bool eq = count == lv_alg[std::size_t(n - 1)].count;
            member_pass = member_pass && eq;
            oracle.push_back(json{{"n", n}, {"cover_count", count}, {"equal", eq}});
        }
        pass = pass && member_pass;
        members.push_back(json{{"member", i},
                               {"levels", table},
                               {"window_oracle", oracle},
                               {"pass", member_pass}});
    }
    result["members"] = members;
    result["pass"] = pass;
    return result;
}

inline json bridge_finab(Ctx&, const FinAbScenario& f) {
    auto rep = duality::bridge_pair_check(f.act);
    return json{{"kernel_order", rep.kernel.order},
                {"kernel_perp_order", rep.kernel_perp.order},
                {"core_order", rep.core.order},
                {"annihilator_match", rep.annihilator_match},
                {"conjugate_match", rep.conjugate_match},
                {"pass", rep.pass()}};
}

inline json addition_cmd(Ctx& c, const Loaded& loaded) {
    const json& sub = require_field(c.scenario, "subgroup", "scenario");
    json result;
    bool pass = true;
    std::vector<LevelData> lv_x, lv_y, lv_q;
    if (const auto* s = std::get_if<ShiftScenario>(&loaded)) {
        const auto& base = s->act.carrier.space.base;
        std::vector<fingroup::Element> gens;
        for (const auto& g : require_field(sub, "base_generators", "subgroup"))
            gens.push_back(fingroup::make_element(base, g.get<std::vector<std::int64_t>>()));
        auto y = fingroup::span(base, std::move(gens));
        auto rq = action::invariant_restriction_and_quotient(s->act, y);
        require_family(s->family.size());
        const auto& e = s->family.at(0);
        // restrict the seed to the invariant part, expressed in sub-base coordinates
        std::vector<shift::Configuration> e_sub;
        for (const auto& cfg : e) {
            shift::Configuration mapped{rq.on_subgroup.carrier.space, {}};
            bool inside = true;
            for (const auto& [idx, val] : cfg.entries) {
                auto pre = fingroup::preimage_element(rq.base_inclusion, val);
                if (!pre) {
                    inside = false;
                    break;
                }
                if (!fingroup::is_zero(*pre)) mapped.entries.emplace_back(idx, *pre);
            }
            if (inside) e_sub.push_back(std::move(mapped));
        }
        std::sort(e_sub.begin(), e_sub.end());
        e_sub.erase(std::unique(e_sub.begin(), e_sub.end()), e_sub.end());
        std::vector<shift::Configuration> e_quo;
        for (const auto& cfg : e) e_quo.push_back(rq.project_config(cfg));
        std::sort(e_quo.begin(), e_quo.end());
        e_quo.erase(std::unique(e_quo.begin(), e_quo.end()), e_quo.end());

        monoid::FolnerSequence fol{s->act.mon, {}};
        lv_x = levels_for(entropy::PfShift{s->act}, fol, e, c.horizon, c.cache,
                          member_tag(c.scenario, "whole", 0), c.jobs);
        lv_y = levels_for(entropy::PfShift{rq.on_subgroup}, fol, e_sub, c.horizon, c.cache,
                          member_tag(c.scenario, "sub", 0), c.jobs);
        lv_q = levels_for(entropy::PfShift{rq.on_quotient}, fol, e_quo, c.horizon, c.cache,
                          member_tag(c.scenario, "quo", 0), c.jobs);
    } else {
        const auto& f = std::get<FinAbScenario>(loaded);
        const auto& group = f.act.carrier.group;
        std::vector<fingroup::Element> gens;
        for (const auto& g : require_field(sub, "generators", "subgroup"))
            gens.push_back(fingroup::make_element(group, g.get<std::vector<std::int64_t>>()));
        auto y = fingroup::span(group, std::move(gens));
        auto rq = action::invariant_restriction_and_quotient(f.act, y);
        require_family(f.family.size());
        const auto& e = f.family.at(0);
        std::vector<fingroup::Element> e_sub;
        for (const auto& x : e)
            if (fingroup::contains(y, x)) e_sub.push_back(*fingroup::preimage_element(rq.inclusion, x));
        std::vector<fingroup::Element> e_quo;
        for (const auto& x : e) e_quo.push_back(fingroup::apply(rq.projection, x));
        auto norm = [](std::vector<fingroup::Element> v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        monoid::FolnerSequence fol{f.act.mon, {}};
        lv_x = levels_for(entropy::PfFinAb{f.act}, fol, e, c.horizon, c.cache,
                          member_tag(c.scenario, "whole", 0), c.jobs);
        lv_y = levels_for(entropy::PfFinAb{rq.on_subgroup}, fol, norm(e_sub), c.horizon, c.cache,
                          member_tag(c.scenario, "sub", 0), c.jobs);
        lv_q = levels_for(entropy::PfFinAb{rq.on_quotient}, fol, norm(e_quo), c.horizon, c.cache,
                          member_tag(c.scenario, "quo", 0), c.jobs);
    }
    json table = json::array();
    for (int n = 0; n < c.horizon; ++n) {
        auto prod = fingroup::checked_mul_u64(lv_y[std::size_t(n)].count, lv_q[std::size_t(n)].count);
        bool eq = lv_x[std::size_t(n)].count == prod;
        pass = pass && eq;
        table.push_back(json{{"n", n + 1},
                             {"whole", lv_x[std::size_t(n)].count},
                             {"sub", lv_y[std::size_t(n)].count},
                             {"quotient", lv_q[std::size_t(n)].count},
                             {"equal", eq}});
    }
    result["levels"] = table;
    result["limit_whole"] = estimate_from(lv_x).limit;
    result["limit_sub"] = estimate_from(lv_y).limit;
    result["limit_quotient"] = estimate_from(lv_q).limit;
    result["pass"] = pass;
    return result;
}

inline json localize_cmd(Ctx& c, const Loaded& loaded) {
    json result;
    if (const auto* s = std::get_if<ShiftScenario>(&loaded)) {
        auto cert = action::kernel_of_action(s->act);
        result["kernel"] = json{{"trivial", cert.trivial},
                                {"whole", cert.whole},
                                {"description", cert.description}};
        if (cert.whole) {
            // degenerate direction: bounded trajectories, vanishing values
            require_family(s->family.size());
            entropy::PfShift inst{s->act};
            monoid::FolnerSequence fol{s->act.mon, {}};
            auto lv = levels_for(inst, fol, s->family.at(0), c.horizon, c.cache,
                                 member_tag(c.scenario, "pull", 0), c.jobs);
            auto est = estimate_from(lv);
            bool bounded = true;
            for (const auto& l : lv) bounded = bounded && l.count <= lv.back().count;
            bool stabilized = lv.size() >= 2 && lv[lv.size() - 2].count == lv.back().count;
            bool pass = bounded && stabilized && est.cauchy_gap <= c.tolerance;
            result["levels"] = levels_json(lv);
            result["cauchy_gap"] = est.cauchy_gap;
            result["limit"] = est.limit;
            result["pass"] = pass;
            return result;
        }
        auto loc = action::ore_localize(s->act);
        entropy::PfShift one_sided{s->act};
        entropy::PfShift two_sided{loc.action};
        monoid::FolnerSequence fol_s{s->act.mon, {}};
        monoid::FolnerSequence fol_g{loc.action.mon, {}};
        json table = json::array();
        bool pass = true;
        for (std::size_t i = 0; i < s->family.size(); ++i) {
            std::vector<shift::Configuration> mapped;
            for (const auto& cfg : s->family[i]) mapped.push_back(loc.eps1(cfg));
            std::sort(mapped.begin(), mapped.end());
            auto lv1 = levels_for(one_sided, fol_s, s->family[i], c.horizon, c.cache,
                                  member_tag(c.scenario, "one_sided", i), c.jobs);
            auto lv2 = levels_for(two_sided, fol_g, mapped, c.horizon, c.cache,
                                  member_tag(c.scenario, "localized", i), c.jobs);
            for (int n = 0; n < c.horizon; ++n) {
                bool eq = entropy::level_values_equal(lv1[std::size_t(n)].count, lv1[std::size_t(n)].box,
                                                      lv2[std::size_t(n)].count, lv2[std::size_t(n)].box);
                pass = pass && eq;
                table.push_back(json{{"member", i},
                                     {"n", n + 1},
                                     {"one_sided_count", lv1[std::size_t(n)].count},
                                     {"localized_count", lv2[std::size_t(n)].count},
                                     {"values_equal", eq}});
            }
        }
        result["levels"] = table;
        result["pass"] = pass;
        return result;
    }
    const auto& f = std::get<FinAbScenario>(loaded);
    auto loc = action::ore_localize(f.act);
    result["kernel_order"] = action::kernel_of_action(f.act).subgroup->order;
    result["localized_order"] = loc.action.carrier.group.order();
    result["fraction_group"] = json{{"rank", loc.group.rank}, {"scale", loc.group.scale}};
    result["pass"] = true;  // construction verifies equivariance and invertibility
    return result;
}

inline std::vector<entropy::FiniteCover> parse_covers(const json& j, const fingroup::FinAbGroup& g) {
    std::vector<entropy::FiniteCover> covers;
    const json& spec = require_field(j, "covers", "scenario");
    std::string kind = require_field(spec, "kind", "covers").get<std::string>();
    if (kind == "even") {
        for (const auto& nb : require_field(spec, "neighborhoods", "covers"))
            covers.push_back(entropy::even_cover(g, nb.get<std::vector<std::uint32_t>>()));
    } else if (kind == "random_even") {
        std::mt19937_64 gen(spec.value("seed", 0u));
        int count = spec.value("count", 4);
        for (int i = 0; i < count; ++i) {
            std::vector<std::uint32_t> nb{0};
            for (std::uint32_t p = 1; p < g.order(); ++p)
                if (gen() % 3 == 0) nb.push_back(p);
            covers.push_back(entropy::even_cover(g, nb));
        }
    } else {
        throw SchemaError("unknown covers kind '" + kind + "'");
    }
    return covers;
}

inline json entropy_top_cmd(Ctx& c, const Loaded& loaded) {
    json result;
    if (const auto* s = std::get_if<ShiftScenario>(&loaded)) {
        require_family(s->family.size());
        for (const auto& w : s->family)
            if (!entropy::PfShift::is_subgroup(w))
                throw Error("entropy-top members must be finite subgroups of the discrete side");
        entropy::PfShift inst{s->act};
        monoid::FolnerSequence fol{s->act.mon, {}};
        json members = json::array();
        bool pass = true;
        double sup = 0;
        std::optional<std::uint64_t> expect_log_of;
        if (c.scenario.contains("expect") && c.scenario["expect"].contains("per_level_log_of"))
            expect_log_of = c.scenario["expect"]["per_level_log_of"].get<std::uint64_t>();
        for (std::size_t i = 0; i < s->family.size(); ++i) {
            auto lv = levels_for(inst, fol, s->family[i], c.horizon, c.cache,
                                 member_tag(c.scenario, "top", i), c.jobs);
            auto est = estimate_from(lv);
            bool member_pass = expect_log_of ? counts_are_log_of(lv, *expect_log_of)
                                             : (est.exact || est.cauchy_gap <= c.tolerance);
            pass = pass && member_pass;
            sup = std::max(sup, est.limit);
            members.push_back(json{{"member", i},
                                   {"levels", levels_json(lv)},
                                   {"limit", est.limit},
                                   {"exact", est.exact},
                                   {"pass", member_pass}});
        }
        result["members"] = members;
        result["value"] = sup;
        result["pass"] = pass;
        return result;
    }
    const auto& f = std::get<FinAbScenario>(loaded);
    auto covers = parse_covers(c.scenario, f.act.carrier.group);
    auto ests = entropy::h_top_finite(f.act, covers, monoid::FolnerSequence{f.act.mon, {}},
                                      c.horizon);
    json members = json::array();
    bool pass = true;
    for (std::size_t i = 0; i < ests.size(); ++i) {
        json lv = json::array();
        for (std::size_t n = 0; n < ests[i].levels.size(); ++n)
            lv.push_back(json{{"n", n + 1},
                              {"box", ests[i].levels[n].box},
                              {"count", *ests[i].levels[n].count},
                              {"value", ests[i].levels[n].value()}});
        // on a finite carrier the counts are bounded by |K|
        for (const auto& l : ests[i].levels) pass = pass && *l.count <= f.act.carrier.group.order();
        members.push_back(json{{"cover", i}, {"levels", lv}, {"limit", ests[i].limit}});
    }
    result["members"] = members;
    result["pass"] = pass;
    return result;
}

inline json core_cmd(Ctx& c, const Loaded& loaded) {
    const auto* f = std::get_if<FinAbScenario>(&loaded);
    if (!f) throw SchemaError("core runs on finite carriers");
    auto core = action::surjective_core(f->act);
    auto covers = parse_covers(c.scenario, f->act.carrier.group);
    int max_box = c.scenario.value("max_box", 6);
    entropy::CovFinAb inst{f->act, {}};
    const auto& k = f->act.carrier.group;
    std::vector<std::uint32_t> core_pts;
    for (const auto& x : fingroup::subgroup_elements(core.core))
        core_pts.push_back(std::uint32_t(fingroup::rank_of(k, x)));

    json checks = json::array();
    bool pass = true;
    monoid::FolnerSequence fol{f->act.mon, {}};
    for (std::size_t ci = 0; ci < covers.size(); ++ci) {
        for (int n = 1; n <= max_box; ++n) {
            auto box = fol.set(n);
            auto joined = entropy::trajectory(inst, box, covers[ci]);
            std::uint32_t target = entropy::min_subcover(joined, core_pts);
            // scan the image chain for a witness of the minimum
            std::int64_t s_star = -1;
            for (std::int64_t s = 0; s <= 2 * max_box + 2 && s_star < 0; ++s) {
                auto img = fingroup::image(action::endo_of(f->act, f->act.mon.element({s})));
                std::vector<std::uint32_t> pts;
                for (const auto& x : fingroup::subgroup_elements(img))
                    pts.push_back(std::uint32_t(fingroup::rank_of(k, x)));
                if (entropy::min_subcover(joined, pts) == target) s_star = s;
            }
            bool found = s_star >= 0;
            bool identity = false;
            if (found) {
                std::vector<monoid::MonoidElement> translated;
                for (const auto& el : box)
                    translated.push_back(f->act.mon.add(f->act.mon.element({s_star}), el));
                identity = entropy::min_subcover_all(entropy::trajectory(inst, translated, covers[ci])) ==
                           target;
            }
            pass = pass && found && identity;
            checks.push_back(json{{"cover", ci},
                                  {"box", n},
                                  {"core_count", target},
                                  {"witness", s_star},
                                  {"translated_equal", identity}});
        }
    }
    return json{{"core_order", core.core.order},
                {"witness", core.witness.v},
                {"checks", checks},
                {"pass", pass}};
}

inline json tile_cmd(Ctx& c) {
    const json& t = require_field(c.scenario, "tile", "scenario");
    int dim = require_field(t, "dim", "tile").get<int>();
    double eps = parse_exact_number(require_field(t, "epsilon", "tile"), "tile.epsilon");
    auto parse_box = [&](const json& ranges) {
        std::vector<std::pair<std::int32_t, std::int32_t>> rs;
        for (const auto& r : ranges) rs.emplace_back(r.at(0).get<std::int32_t>(), r.at(1).get<std::int32_t>());
        return tiling::box(rs);
    };
    auto target = parse_box(require_field(t, "target", "tile"));
    std::vector<std::vector<tiling::Point>> shapes;
    for (const auto& sh : require_field(t, "shapes", "tile")) shapes.push_back(parse_box(sh));
    tiling::TileSystem sys(dim, shapes, eps);
    auto outcome = tiling::quasi_tile(sys, target);
    json result;
    if (const auto* qt = std::get_if<tiling::QuasiTiling>(&outcome)) {
        auto v = tiling::verify_quasi_tiling(*qt, eps);
        std::size_t covered = 0;
        json centers = json::array();
        for (std::size_t i = 0; i < qt->centers.size(); ++i) {
            covered += qt->centers[i].size() * qt->shapes[i].size();
            centers.push_back(qt->centers[i].size());
        }
        result["success"] = true;
        result["verified"] = v.ok;
        result["centers_per_shape"] = centers;
        result["leftover"] = double(target.size() - covered) / double(target.size());
        result["pass"] = v.ok;
    } else {
        result["success"] = false;
        result["leftover"] = std::get<tiling::TilingFailure>(outcome).leftover_ratio;
        result["pass"] = false;
    }
    return result;
}

inline json fourier_cmd(Ctx& c) {
    const json& fj = require_field(c.scenario, "fourier", "scenario");
    fingroup::FinAbGroup g(require_field(fj, "factors", "fourier").get<std::vector<std::int64_t>>());
    int count = fj.value("count", 50);
    std::mt19937_64 gen(fj.value("seed", 1u));
    double tol = 1e-9;
    double max_hathat = 0, max_isometry = 0, max_norm_mult = 0;
    bool pass = true;
    for (int i = 0; i < count; ++i) {
        fourier::CxFunction psi(g, fourier::Convention::Counting);
        for (auto& v : psi.table) v = fourier::Cx(double(gen() % 5), 0);
        psi.table[0] += fourier::Cx(1, 0);
        auto phi = fourier::convolve(psi, fourier::reflect(psi));
        auto back = fourier::dft(fourier::dft(phi));
        for (std::size_t r = 0; r < phi.table.size(); ++r)
            max_hathat = std::max(max_hathat, std::abs(back.table[r] - phi.table[r]));
        fourier::PetersElement p(phi, 1e-6);
        auto iso = fourier::transform_isometry_check(p, tol);
        max_isometry = std::max(max_isometry, iso.diff);
        pass = pass && iso.pass;
        // norm multiplicativity against a second random positive function
        fourier::CxFunction xi(g, fourier::Convention::Counting);
        for (auto& v : xi.table) v = fourier::Cx(double(gen() % 4), 0);
        xi.table[0] += fourier::Cx(1, 0);
        double lhs = fourier::norm1(fourier::convolve(phi, xi));
        double rhs = fourier::norm1(phi) * fourier::norm1(xi);
        max_norm_mult = std::max(max_norm_mult, std::abs(lhs - rhs) / rhs);
    }
    pass = pass && max_hathat <= tol && max_norm_mult <= 1e-12;
    // exact subgroup transforms
    bool chi_exact = true;
    for (const auto& x : fingroup::elements(g)) {
        if (fingroup::is_zero(x)) continue;
        auto h = fingroup::span(g, {x});
        auto [scale, perp] = fourier::subgroup_indicator_dft(h);
        auto hat = fourier::dft(fourier::indicator_subgroup(h, fourier::Convention::Counting));
        for (const auto& y : fingroup::elements(g)) {
            double expect = fingroup::contains(perp, y) ? double(scale) : 0.0;
            if (std::abs(hat.at(y) - fourier::Cx(expect, 0)) > 1e-8) chi_exact = false;
        }
        break;  // one representative subgroup per run keeps this cheap
    }
    pass = pass && chi_exact;
    // intertwining of the peters actions for the canonical invertible action
    fingroup::FinAbGroup z5({5});
    auto a = action::make_finab_action(monoid::AmenableMonoid::lattice(1), z5,
                                       {fingroup::Hom(z5, z5, {2})});
    std::vector<fourier::CxFunction> samples;
    for (int i = 0; i < 5; ++i) {
        fourier::CxFunction psi(z5, fourier::Convention::Counting);
        for (auto& v : psi.table) v = fourier::Cx(double(gen() % 4), 0);
        psi.table[0] += fourier::Cx(1, 0);
        samples.push_back(fourier::convolve(psi, fourier::reflect(psi)));
    }
    auto conj = fourier::conjugacy_check(a, samples, tol);
    pass = pass && conj.pass;
    return json{{"runs", count},
                {"max_double_transform_error", max_hathat},
                {"max_isometry_error", max_isometry},
                {"max_norm_mult_relative_error", max_norm_mult},
                {"subgroup_indicator_exact", chi_exact},
                {"intertwining_error", conj.max_error},
                {"pass", pass}};
}

inline json folner_cmd(Ctx& c) {
    auto mon = parse_monoid(require_field(c.scenario, "monoid", "scenario"));
    json table = json::array();
    bool pass = true;
    for (int n = 1; n <= c.horizon; ++n) {
        auto f = monoid::folner_set(mon, n);
        json row{{"n", n}, {"size", f.size()}};
        json defects = json::array();
        for (std::size_t i = 0; i < mon.generator_count(); ++i) {
            auto d = monoid::folner_defect(mon, f, mon.generator(i));
            defects.push_back(d.str());
            if (mon.kind() == monoid::Kind::FreeComm) pass = pass && d == Rational(1, n);
            if (mon.kind() == monoid::Kind::Lattice) pass = pass && d == Rational(1, 2 * n + 1);
            if (mon.kind() != monoid::Kind::Numerical) pass = pass && (d <= Rational(2, n));
        }
        // translated boxes have identical defects
        auto s_n = mon.kind() == monoid::Kind::Numerical
                       ? mon.element({n * mon.generators().front()})
                       : mon.element(std::vector<std::int64_t>(std::size_t(mon.dim()), n));
        std::vector<monoid::MonoidElement> moved;
        for (const auto& x : f) moved.push_back(mon.add(s_n, x));
        for (std::size_t i = 0; i < mon.generator_count(); ++i)
            pass = pass &&
                   monoid::folner_defect(mon, f, mon.generator(i)) ==
                       monoid::folner_defect(mon, moved, mon.generator(i));
        row["defects"] = defects;
        table.push_back(row);
    }
    return json{{"levels", table}, {"pass", pass}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry points.
// ---------------------------------------------------------------------------

inline std::string render_human(const std::string& command, const json& machine) {
    std::ostringstream out;
    out << "entromono " << command << " | scenario: " << machine.value("scenario", "?") << "\n";
    const json& results = machine["results"];
    if (results.contains("members")) {
        for (const auto& m : results["members"]) {
            out << "  member " << (m.contains("member") ? m["member"].dump() : m.value("cover", json(0)).dump());
            if (m.contains("limit")) out << "  limit=" << m["limit"].dump();
            if (m.contains("exact")) out << "  exact=" << m["exact"].dump();
            if (m.contains("pass")) out << "  pass=" << m["pass"].dump();
            out << "\n";
            if (m.contains("levels"))
                for (const auto& l : m["levels"]) {
                    out << "    ";
                    for (auto it = l.begin(); it != l.end(); ++it)
                        out << it.key() << "=" << it.value().dump() << " ";
                    out << "\n";
                }
        }
    } else if (results.contains("levels")) {
        for (const auto& l : results["levels"]) {
            out << "  ";
            for (auto it = l.begin(); it != l.end(); ++it)
                out << it.key() << "=" << it.value().dump() << " ";
            out << "\n";
        }
    }
    for (auto it = results.begin(); it != results.end(); ++it)
        if (it.key() != "members" && it.key() != "levels" && it.key() != "checks")
            out << "  " << it.key() << " = " << it.value().dump() << "\n";
    out << (machine["pass"].get<bool>() ? "PASS" : "FAIL") << " (tolerance "
        << machine["tolerance"].dump() << ")\n";
    return out.str();
}

inline RunReport run(const std::string& command, const json& scenario, Options opts = {}) {
    auto started = std::chrono::steady_clock::now();
    detail::Ctx ctx{scenario, Cache{}, 0, 0.0, opts.jobs, scenario.dump()};
    ctx.horizon = opts.horizon_override > 0 ? opts.horizon_override : scenario.value("horizon", 8);
    ctx.tolerance = scenario.contains("tolerance")
                        ? parse_exact_number(scenario["tolerance"], "tolerance")
                        : 1e-9;
    if (!opts.cache_dir.empty()) {
        ctx.cache.dir = opts.cache_dir;
    } else if (const char* env = std::getenv("ENTROMONO_CACHE_DIR")) {
        ctx.cache.dir = env;
    }

    json results;
    if (command == "entropy-alg") {
        results = detail::entropy_alg(ctx, parse_scenario(scenario, action::Side::Left));
    } else if (command == "entropy-top") {
        results = detail::entropy_top_cmd(ctx, parse_scenario(scenario, action::Side::Right));
    } else if (command == "bridge") {
        auto loaded = parse_scenario(scenario, action::Side::Left);
        results = std::holds_alternative<ShiftScenario>(loaded)
                      ? detail::bridge_shift(ctx, std::get<ShiftScenario>(loaded))
                      : detail::bridge_finab(ctx, std::get<FinAbScenario>(loaded));
    } else if (command == "addition") {
        results = detail::addition_cmd(ctx, parse_scenario(scenario, action::Side::Left));
    } else if (command == "localize") {
        results = detail::localize_cmd(ctx, parse_scenario(scenario, action::Side::Left));
    } else if (command == "core") {
        results = detail::core_cmd(ctx, parse_scenario(scenario, action::Side::Right));
    } else if (command == "tile") {
        results = detail::tile_cmd(ctx);
    } else if (command == "fourier-check") {
        results = detail::fourier_cmd(ctx);
    } else if (command == "folner-report") {
        results = detail::folner_cmd(ctx);
    } else {
        throw SchemaError("unknown command '" + command + "'");
    }

    RunReport rep;
    rep.pass = results.value("pass", false);
    rep.machine = json{{"schema", kReportSchema},
                       {"command", command},
                       {"scenario", scenario.value("name", "unnamed")},
                       {"tolerance", ctx.tolerance},
                       {"horizon", ctx.horizon},
                       {"results", results},
                       {"pass", rep.pass},
                       {"cache", json{{"hits", ctx.cache.hits},
                                      {"misses", ctx.cache.misses},
                                      {"warnings", ctx.cache.warnings}}}};
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    rep.machine["timing"] = json{{"wall_ms", ms}};
    rep.human = render_human(command, rep.machine);
    return rep;
}

inline RunReport run_file(const std::string& command, const std::string& path, Options opts = {}) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file " + path);
    json scenario;
    try {
        scenario = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("scenario parse error in " + path + ": " + e.what());
    }
    return run(command, scenario, opts);
}

}  // namespace entromono::harness
