#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "entromono/harness.hpp"

using namespace entromono;
using namespace entromono::harness;
using nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) {
#ifdef SCENARIO_DIR
    return std::string(SCENARIO_DIR) + "/" + name;
#else
    return "scenarios/" + name;
#endif
}

json bernoulli_scenario(int p, int horizon) {
    return json{{"schema", kScenarioSchema},
                {"name", "bernoulli"},
                {"monoid", {{"kind", "free_comm"}, {"dim", 1}}},
                {"carrier", {{"kind", "shift"}, {"base", {p}}, {"dim", 1}, {"index", "nonneg"}}},
                {"action",
                 {{"kind", "translation"},
                  {"generators", json::array({{{"kind", "push"}, {"vector", {1}}}})}}},
                {"family", {{"kind", "single_site"}}},
                {"expect", {{"per_level_log_of", p}}},
                {"horizon", horizon},
                {"tolerance", "1e-9"}};
}

// runtime metadata (timing, cache statistics) is excluded from the
// determinism contract
json strip_runtime(json j) {
    j.erase("timing");
    j.erase("cache");
    return j;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("entromono-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("entropy-alg on the Bernoulli scenario") {
    auto rep = run("entropy-alg", bernoulli_scenario(2, 8));
    CHECK(rep.pass);
    CHECK(rep.machine["results"]["value"].get<double>() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    auto& levels = rep.machine["results"]["members"][0]["levels"];
    CHECK(levels.size() == 8);
    CHECK(levels[7]["count"].get<std::uint64_t>() == 256);
}

TEST_CASE("bridge on the Bernoulli scenario") {
    auto scenario = bernoulli_scenario(2, 6);
    scenario["window_oracle"] = json{{"levels", 4}};
    auto rep = run("bridge", scenario);
    CHECK(rep.pass);
    auto& member = rep.machine["results"]["members"][0];
    for (const auto& row : member["levels"]) CHECK(row["equal"].get<bool>());
    CHECK(member["window_oracle"].size() == 4);
    for (const auto& row : member["window_oracle"]) CHECK(row["equal"].get<bool>());
}

TEST_CASE("schema errors carry field diagnostics") {
    json broken = bernoulli_scenario(2, 4);
    broken.erase("carrier");
    CHECK_THROWS_WITH_AS(run("entropy-alg", broken), "missing field 'carrier' in scenario",
                         SchemaError);
    json bad_cover = bernoulli_scenario(2, 4);
    bad_cover["monoid"] = json{{"kind", "galactic"}};
    CHECK_THROWS_AS(run("entropy-alg", bad_cover), SchemaError);
    CHECK_THROWS_AS(run("warp", bernoulli_scenario(2, 4)), SchemaError);
    json no_family = bernoulli_scenario(2, 4);
    no_family.erase("family");
    CHECK_THROWS_AS(run("entropy-alg", no_family), SchemaError);
}

TEST_CASE("reports are deterministic modulo timing") {
    auto a = run("entropy-alg", bernoulli_scenario(3, 6));
    auto b = run("entropy-alg", bernoulli_scenario(3, 6));
    CHECK(strip_runtime(a.machine).dump() == strip_runtime(b.machine).dump());
}

TEST_CASE("the cache serves repeated runs and survives corruption") {
    TempDir tmp;
    Options opts;
    opts.cache_dir = tmp.path.string();
    auto scenario = bernoulli_scenario(2, 6);

    auto first = run("entropy-alg", scenario, opts);
    CHECK(first.machine["cache"]["hits"].get<int>() == 0);
    CHECK(first.machine["cache"]["misses"].get<int>() == 6);

    auto second = run("entropy-alg", scenario, opts);
    CHECK(second.machine["cache"]["hits"].get<int>() == 6);
    CHECK(second.machine["cache"]["misses"].get<int>() == 0);
    CHECK(strip_runtime(first.machine).dump() == strip_runtime(second.machine).dump());

    SUBCASE("a longer horizon hits the shared levels") {
        Options o2 = opts;
        o2.horizon_override = 8;
        auto third = run("entropy-alg", scenario, o2);
        CHECK(third.machine["cache"]["hits"].get<int>() == 6);
        CHECK(third.machine["cache"]["misses"].get<int>() == 2);
    }
    SUBCASE("corrupt records are recomputed with a warning") {
        for (const auto& entry : std::filesystem::directory_iterator(tmp.path)) {
            std::ofstream out(entry.path());
            out << "{not json";
        }
        auto third = run("entropy-alg", scenario, opts);
        CHECK(third.pass);
        CHECK(third.machine["cache"]["misses"].get<int>() == 6);
        CHECK_FALSE(third.machine["cache"]["warnings"].empty());
    }
    SUBCASE("a cleared cache directory recomputes everything") {
        std::filesystem::remove_all(tmp.path);
        std::filesystem::create_directories(tmp.path);
        auto third = run("entropy-alg", scenario, opts);
        CHECK(third.machine["cache"]["hits"].get<int>() == 0);
        CHECK(third.pass);
    }
}

TEST_CASE("ENTROMONO_CACHE_DIR supplies the default cache location") {
    TempDir tmp;
    ::setenv("ENTROMONO_CACHE_DIR", tmp.path.c_str(), 1);
    auto scenario = bernoulli_scenario(2, 5);
    auto first = run("entropy-alg", scenario);
    auto second = run("entropy-alg", scenario);
    ::unsetenv("ENTROMONO_CACHE_DIR");
    CHECK(first.machine["cache"]["misses"].get<int>() == 5);
    CHECK(second.machine["cache"]["hits"].get<int>() == 5);
}

TEST_CASE("parallel level evaluation matches the sequential report") {
    Options par;
    par.jobs = 4;
    auto seq = run("entropy-alg", bernoulli_scenario(3, 8));
    auto parallel = run("entropy-alg", bernoulli_scenario(3, 8), par);
    CHECK(strip_runtime(seq.machine).dump() == strip_runtime(parallel.machine).dump());
}

TEST_CASE("addition command on the bilateral Z/4 scenario") {
    auto rep = run_file("addition", scenario_path("addition_z4.json"), Options{.horizon_override = 6});
    CHECK(rep.pass);
    const auto& results = rep.machine["results"];
    CHECK(results["limit_whole"].get<double>() == doctest::Approx(std::log(4.0)).epsilon(1e-9));
    CHECK(results["limit_sub"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(results["limit_quotient"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("localize command on both shift scenarios") {
    auto push = run_file("localize", scenario_path("localize_push.json"), Options{.horizon_override = 8});
    CHECK(push.pass);
    auto pull = run_file("localize", scenario_path("localize_pull.json"));
    CHECK(pull.pass);
    CHECK(pull.machine["results"]["kernel"]["whole"].get<bool>());
}

TEST_CASE("core, tile, fourier and folner commands") {
    CHECK(run_file("core", scenario_path("core_z4.json")).pass);
    CHECK(run_file("tile", scenario_path("tile_boxes.json")).pass);
    CHECK(run_file("fourier-check", scenario_path("fourier_z12.json")).pass);
    CHECK(run_file("folner-report", scenario_path("folner_n1.json")).pass);
    CHECK(run_file("folner-report", scenario_path("folner_z2d.json")).pass);
}

TEST_CASE("entropy-top profinite matches the algebraic values") {
    auto scenario = bernoulli_scenario(2, 8);
    auto top = run("entropy-top", scenario);
    CHECK(top.pass);
    CHECK(top.machine["results"]["value"].get<double>() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("entropy-alg on a finite carrier decays within the scenario tolerance") {
    json scenario{{"schema", kScenarioSchema},
                  {"name", "alg-finite"},
                  {"monoid", {{"kind", "free_comm"}, {"dim", 1}}},
                  {"carrier", {{"kind", "finab"}, {"factors", {5}}}},
                  {"action", {{"kind", "matrix"}, {"generators", json::array({{{2}}})}}},
                  {"family", {{"kind", "cyclic_subgroups"}}},
                  {"horizon", 10},
                  {"tolerance", "1/4"}};
    auto rep = run("entropy-alg", scenario);
    CHECK(rep.pass);
    // trajectories of subgroups of a finite group are bounded by the order
    for (const auto& m : rep.machine["results"]["members"])
        for (const auto& lv : m["levels"]) CHECK(lv["count"].get<std::uint64_t>() <= 5);
}

TEST_CASE("folner-report on a numerical monoid") {
    json scenario{{"schema", kScenarioSchema},
                  {"name", "folner-numerical"},
                  {"monoid", {{"kind", "numerical"}, {"generators", {2, 3}}}},
                  {"horizon", 8},
                  {"tolerance", "1e-9"}};
    auto rep = run("folner-report", scenario);
    CHECK(rep.pass);
}

TEST_CASE("entropy-top on a finite carrier reports bounded cover counts") {
    json scenario{{"schema", kScenarioSchema},
                  {"name", "top-finite"},
                  {"monoid", {{"kind", "free_comm"}, {"dim", 1}}},
                  {"carrier", {{"kind", "finab"}, {"factors", {4}}}},
                  {"action", {{"kind", "matrix"}, {"generators", json::array({{{2}}})}}},
                  {"covers", {{"kind", "even"}, {"neighborhoods", json::array({{0, 1}})}}},
                  {"horizon", 5},
                  {"tolerance", "1e-9"}};
    auto rep = run("entropy-top", scenario);
    CHECK(rep.pass);
    for (const auto& lv : rep.machine["results"]["members"][0]["levels"])
        CHECK(lv["count"].get<std::uint64_t>() <= 4);
}

TEST_CASE("exit contract: failing identities fail the run") {
    // an impossible expectation must flip the status
    auto scenario = bernoulli_scenario(2, 5);
    scenario["expect"]["per_level_log_of"] = 3;
    auto rep = run("entropy-alg", scenario);
    CHECK_FALSE(rep.pass);
}
