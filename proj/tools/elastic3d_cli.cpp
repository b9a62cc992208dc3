#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "elastic3d/commands.hpp"

using namespace elastic3d;

namespace {

void add_scenario_flags(CLI::App* cmd, ScenarioOverrides& o, std::string& backend) {
    cmd->add_option("--scenario", o.scenario, "preset name or scenario JSON file")->capture_default_str();
    cmd->add_option("--level", o.level, "level of detail 0..10");
    cmd->add_option("--backend", backend, "cpu-serial | cpu-parallel | gpu");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--steps", o.steps, "number of time steps");
    cmd->add_option("--threads", o.threads, "cpu-parallel worker count");
    cmd->add_flag("--strict-frequency", o.strict_frequency, "reject a source peak frequency above f_max");
}

std::vector<int> parse_levels(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto dots = tok.find("..");
        if (dots != std::string::npos) {
            const int a = std::stoi(tok.substr(0, dots));
            const int b = std::stoi(tok.substr(dots + 2));
            for (int l = a; l <= b; ++l) out.push_back(l);
        } else if (!tok.empty()) {
            out.push_back(std::stoi(tok));
        }
    }
    if (out.empty()) throw ConfigError("--levels is empty");
    for (int l : out) (void)level_preset(l);
    return out;
}

std::vector<Backend> parse_backends(const std::string& s) {
    std::vector<Backend> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(backend_from_name(tok));
    }
    if (out.empty()) throw ConfigError("--backends is empty");
    return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D elastic wave propagation on a staggered finite-difference grid"};
    app.require_subcommand(1);

    ScenarioOverrides run_o;
    std::string run_backend;
    auto* run = app.add_subcommand("run", "run a scenario and write station traces");
    add_scenario_flags(run, run_o, run_backend);

    BenchOptions bench_o;
    std::string bench_backend, bench_levels = "0..3", bench_backends = "cpu-serial,cpu-parallel";
    std::optional<int> bench_steps;
    auto* bench = app.add_subcommand("bench", "time steps per level and backend");
    bench->add_option("--scenario", bench_o.base.scenario, "preset name or scenario JSON file")->capture_default_str();
    bench->add_option("--levels,--level", bench_levels, "levels, e.g. 0..3 or 0,2,4")->capture_default_str();
    bench->add_option("--backends,--backend", bench_backends, "comma-separated backends")->capture_default_str();
    bench->add_option("--steps", bench_steps, "timed steps per measurement (default 20)");
    bench->add_option("--warmup", bench_o.warmup_steps, "warm-up steps")->capture_default_str();
    bench->add_option("--threads", bench_o.base.threads, "cpu-parallel worker count");
    bench->add_option("--out", bench_o.base.out, "write the JSON report to this file");

    CompareOptions cmp_o;
    std::string band = "0.02:0.06";
    std::optional<std::string> cmp_out;
    auto* compare = app.add_subcommand("compare", "band-passed misfit between two trace directories");
    compare->add_option("sim", cmp_o.sim_dir, "simulated traces directory")->required();
    compare->add_option("ref", cmp_o.ref_dir, "reference traces directory")->required();
    compare->add_option("--band", band, "f_lo:f_hi in Hz")->capture_default_str();
    compare->add_option("--scenario", cmp_o.scenario, "centroid source when no manifest.json is present");
    compare->add_option("--out", cmp_out, "directory for report.json and overlay series");

    EstimateOptions est_o;
    std::string est_backend;
    auto* estimate = app.add_subcommand("estimate", "project wall time for many simulations");
    add_scenario_flags(estimate, est_o.base, est_backend);
    estimate->add_option("--simulations", est_o.n_simulations, "simulations per iteration")->capture_default_str();
    estimate->add_option("--iterations", est_o.n_iterations, "iterations")->capture_default_str();
    estimate->add_option("--step-time", est_o.step_time, "measured seconds per step");
    estimate->add_option("--bench-report", est_o.bench_report, "bench JSON report to read the step time from");

    std::optional<std::string> export_path;
    std::string preset_name = "cuba-2016";
    std::optional<int> preset_level;
    auto* presets = app.add_subcommand("presets", "list bundled scenarios or export one as JSON");
    presets->add_option("--export", export_path, "write the preset scenario to this file");
    presets->add_option("--scenario", preset_name, "preset to export")->capture_default_str();
    presets->add_option("--level", preset_level, "level for the exported preset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code::validation;
    }

    try {
        if (*run) {
            if (!run_backend.empty()) run_o.backend = backend_from_name(run_backend);
            return cmd_run(run_o, std::cout, std::cerr);
        }
        if (*bench) {
            bench_o.levels = parse_levels(bench_levels);
            bench_o.backends = parse_backends(bench_backends);
            if (bench_steps) bench_o.timed_steps = *bench_steps;
            const BenchmarkReport rep = cmd_bench(bench_o, std::cerr);
            print_bench_table(rep, std::cout);
            if (bench_o.base.out) write_json(*bench_o.base.out, to_json(rep));
            else std::cout << to_json(rep).dump(2) << '\n';
            return rep.rows.empty() ? exit_code::backend_unavailable : exit_code::ok;
        }
        if (*compare) {
            std::tie(cmp_o.f_lo, cmp_o.f_hi) = parse_band(band);
            if (cmp_out) cmp_o.out = *cmp_out;
            const CompareReport rep = cmd_compare(cmp_o);
            print_compare_table(rep, std::cout);
            if (cmp_o.out) write_json(*cmp_o.out / "report.json", to_json(rep));
            return exit_code::ok;
        }
        if (*estimate) {
            if (!est_backend.empty()) est_o.base.backend = backend_from_name(est_backend);
            const Estimate e = cmd_estimate(est_o);
            std::cout << "step time " << e.step_time << " s (" << e.source << ") x " << e.n_steps << " steps x "
                      << e.n_simulations << " simulations x " << e.n_iterations << " iterations = " << e.formatted()
                      << " (dd:hh:mm:ss)\n";
            return exit_code::ok;
        }
        if (*presets) {
            if (export_path) {
                if (preset_name != "cuba-2016") throw ConfigError("unknown preset '" + preset_name + "'");
                write_json(*export_path, to_json(cuba_2016(preset_level.value_or(0))));
                std::cout << "wrote " << *export_path << '\n';
            } else {
                print_presets(std::cout);
            }
            return exit_code::ok;
        }
    } catch (const BackendUnavailable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::backend_unavailable;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::validation;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::validation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code::ok;
}
