#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "entromono/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"entromono: exact entropy computations for monoid actions on abelian groups"};
    app.require_subcommand(1);

    std::string scenario_path, report_path, cache_dir;
    int horizon = 0, jobs = 1;

    const std::vector<std::string> commands = {"entropy-alg", "entropy-top", "bridge",
                                               "addition",    "localize",    "core",
                                               "tile",        "fourier-check", "folner-report"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
        sub->add_option("--horizon", horizon, "override the scenario horizon");
        sub->add_option("--report", report_path, "write the machine-readable report here");
        sub->add_option("--cache-dir", cache_dir, "per-level trajectory cache directory");
        sub->add_option("--jobs", jobs, "parallel workers for independent levels");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        entromono::harness::Options opts;
        opts.horizon_override = horizon;
        opts.cache_dir = cache_dir;
        opts.jobs = jobs;
        auto rep = entromono::harness::run_file(command, scenario_path, opts);
        std::cout << rep.human;
        if (!report_path.empty()) {
            std::ofstream out(report_path);
            out << rep.machine.dump(2) << "\n";
        }
        return rep.pass ? 0 : 1;
    } catch (const entromono::SchemaError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const entromono::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
