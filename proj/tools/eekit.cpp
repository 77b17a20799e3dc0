// eekit command line: run a named experiment into an output directory, or
// describe one.
//
//   eekit <experiment> [--config file] [--out dir] [--seed u64] [--samples n]
//                      [--set key=value ...] [--threads k]
//   eekit describe <experiment>
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "eekit/eekit.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Two-dimension resource-block energy-efficiency toolkit"};
    app.footer("Experiments: fig1 fig4 fig6 fig7 fig8 fig9 table1 sweep\n"
               "Use 'eekit describe <name>' for parameters and output schemas.");

    std::string name;
    std::string describe_target;
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::vector<std::string> sets;
    int threads = 1;

    app.add_option("experiment", name, "Experiment name, or 'describe'")->required();
    app.add_option("target", describe_target, "Experiment to describe");
    app.add_option("--config", config_path, "Config file (key = value lines)");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed override");
    app.add_option("--samples", samples, "Monte Carlo sample count override");
    app.add_option("--set", sets, "Config override key=value (repeatable)");
    app.add_option("--threads", threads, "Worker threads; results do not depend on this")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (name == "describe") {
        if (describe_target.empty()) {
            std::cerr << "describe: missing experiment name\n";
            return 2;
        }
        std::cout << eekit::describe(describe_target);
        return 0;
    }
    if (!describe_target.empty()) {
        std::cerr << "unexpected positional argument: " << describe_target << "\n";
        return 2;
    }
    if (threads < 1) {
        std::cerr << "--threads must be >= 1\n";
        return 2;
    }

    eekit::ExperimentSpec spec;
    spec.name = name;
    spec.out_dir = out_dir;
    spec.threads = threads;
    if (!config_path.empty()) spec.config = eekit::load_config_file(config_path);
    if (seed) spec.overrides.emplace_back("seed", std::to_string(*seed));
    if (samples) spec.overrides.emplace_back("samples", std::to_string(*samples));
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::cerr << "--set expects key=value, got: " << s << "\n";
            return 2;
        }
        spec.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }

    const auto result = eekit::run_experiment(spec);
    std::cout << "wrote " << result.manifest.string() << "\n";
    for (const auto& f : result.outputs) std::cout << "wrote " << f.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const eekit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
