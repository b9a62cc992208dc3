#pragma once

// Command implementations behind the CLI verbs. Each returns a process exit
// code or a structured report; the CLI only parses flags and maps exceptions.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <omp.h>

#include "scenario.hpp"
#include "signal.hpp"
#include "trace_io.hpp"

namespace elastic3d {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 2;
inline constexpr int divergence = 3;
inline constexpr int backend_unavailable = 4;
}  // namespace exit_code

/// Flags shared by the scenario-driven verbs; unset fields keep the scenario value.
struct ScenarioOverrides {
    std::string scenario = "cuba-2016";
    std::optional<int> level;
    std::optional<Backend> backend;
    std::optional<int> steps;
    std::optional<int> threads;
    std::optional<std::string> out;
    bool strict_frequency = false;
};

inline Scenario apply_overrides(Scenario s, const ScenarioOverrides& o) {
    if (o.level) s.set_level(*o.level);
    if (o.backend) s.solver.backend = *o.backend;
    if (o.threads) s.solver.threads = *o.threads;
    if (o.steps) {
        if (*o.steps < 1) throw ConfigError("--steps must be >= 1");
        s.domain.n_steps = *o.steps;
    }
    if (o.out) s.output_dir = *o.out;
    if (o.strict_frequency) s.frequency_check = FrequencyCheck::error;
    return s;
}

inline Scenario load_resolved(const ScenarioOverrides& o) { return resolve(apply_overrides(load_scenario(o.scenario), o)); }

// ---------------------------------------------------------------------------
// run

struct RunSummary {
    Scenario resolved;
    ValidationReport validation;
    double init_time = 0.0;
    double step_time_total = 0.0;
    double wall_time = 0.0;
    int completed_steps = 0;
    bool diverged = false;
    std::vector<std::filesystem::path> files;
};

namespace detail {

template <class Real>
void execute(RunSummary& sum) {
    const auto t0 = std::chrono::steady_clock::now();
    Simulation<Real> sim = make_simulation<Real>(sum.resolved);
    const auto t1 = std::chrono::steady_clock::now();
    const RunResult res = sim.run();
    sum.init_time = std::chrono::duration<double>(t1 - t0).count();
    for (const StepReport& r : res.reports) sum.step_time_total += r.wall_time;
    sum.completed_steps = static_cast<int>(res.reports.size());
    sum.diverged = res.diverged;
    sum.files = export_traces(sum.resolved.output_dir, res.traces, sim.receivers(), sim.domain());
    sum.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline json manifest_json(const RunSummary& s) {
    json run;
    run["dt_max"] = s.validation.limits.dt_max;
    run["f_max"] = s.validation.limits.f_max;
    run["vel_max"] = s.validation.limits.vel_max;
    run["vel_min"] = s.validation.limits.vel_min;
    run["init_time_s"] = s.init_time;
    run["step_time_total_s"] = s.step_time_total;
    run["mean_step_time_s"] = s.completed_steps > 0 ? s.step_time_total / s.completed_steps : 0.0;
    run["wall_time_s"] = s.wall_time;
    run["completed_steps"] = s.completed_steps;
    run["diverged"] = s.diverged;
    run["partial_traces"] = s.diverged;
    run["warnings"] = s.validation.warnings;
    json files = json::array();
    for (const auto& f : s.files) files.push_back(f.filename().string());
    run["trace_files"] = files;
    return {{"scenario", to_json(s.resolved)}, {"run", run}};
}

/// Validates, runs and writes `<station>_<component>.txt` plus manifest.json.
inline int cmd_run(const ScenarioOverrides& o, std::ostream& out, std::ostream& err) {
    RunSummary sum;
    sum.resolved = load_resolved(o);
    sum.validation = validate(sum.resolved);
    for (const auto& w : sum.validation.warnings) err << "warning: " << w << '\n';
    require_backend(sum.resolved.solver.backend);

    const SimulationDomain d = make_domain(sum.resolved);
    out << "scenario " << sum.resolved.name << ": grid " << d.grid.nx << "x" << d.grid.ny << "x" << d.grid.nz
        << ", " << d.n_steps << " steps of " << d.dt << " s, backend " << backend_name(sum.resolved.solver.backend)
        << " (dt_max " << sum.validation.limits.dt_max << " s, f_max " << sum.validation.limits.f_max << " Hz)\n";

    if (sum.resolved.precision == Precision::float32) detail::execute<float>(sum);
    else detail::execute<double>(sum);

    const std::filesystem::path manifest = std::filesystem::path(sum.resolved.output_dir) / "manifest.json";
    std::ofstream(manifest) << manifest_json(sum).dump(2) << '\n';
    out << "wrote " << sum.files.size() << " trace files and " << manifest.string() << " (" << sum.completed_steps
        << " steps, " << sum.wall_time << " s)\n";
    if (sum.diverged) {
        err << "error: simulation diverged at step " << sum.completed_steps - 1
            << "; traces are partial and flagged in the manifest\n";
        return exit_code::divergence;
    }
    return exit_code::ok;
}

// ---------------------------------------------------------------------------
// bench

struct BenchRow {
    int level = 0;
    std::string backend;
    long long cells = 0;
    int n_steps = 0;
    int timed_steps = 0;
    double init_time = 0.0;
    double mean_step_time = 0.0;
    double timed_wall_time = 0.0;
    double total_time = 0.0;  // init + mean step * n_steps
    std::optional<double> speedup;
};

struct BenchmarkReport {
    std::string machine;
    std::string scenario;
    int warmup_steps = 10;
    std::vector<BenchRow> rows;
    std::vector<std::string> notices;
};

inline std::string machine_descriptor() {
    std::string model = "unknown cpu";
    std::ifstream cpu("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpu, line)) {
        if (line.rfind("model name", 0) == 0) {
            model = line.substr(line.find(':') + 2);
            break;
        }
    }
    return model + ", " + std::to_string(std::thread::hardware_concurrency()) + " hw threads, OpenMP max " +
           std::to_string(omp_get_max_threads());
}

struct BenchOptions {
    ScenarioOverrides base;
    std::vector<int> levels{0, 1, 2, 3};
    std::vector<Backend> backends{Backend::cpu_serial, Backend::cpu_parallel};
    int warmup_steps = 10;
    int timed_steps = 20;  // --steps overrides
};

namespace detail {

template <class Real>
BenchRow bench_one(const Scenario& resolved, int warmup, int timed) {
    BenchRow row;
    const auto t0 = std::chrono::steady_clock::now();
    Simulation<Real> sim = make_simulation<Real>(resolved);
    row.init_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sim.set_recording(false);
    int t = 0;
    for (; t < warmup; ++t) sim.step(t);
    const auto t1 = std::chrono::steady_clock::now();
    for (int i = 0; i < timed; ++i, ++t) sim.step(t);
    row.timed_wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    row.timed_steps = timed;
    row.mean_step_time = row.timed_wall_time / timed;
    row.cells = sim.domain().grid.cells();
    row.n_steps = sim.domain().n_steps;
    row.total_time = row.init_time + row.mean_step_time * row.n_steps;
    return row;
}

}  // namespace detail

inline BenchmarkReport cmd_bench(const BenchOptions& opt, std::ostream& err) {
    BenchmarkReport rep;
    rep.machine = machine_descriptor();
    rep.warmup_steps = opt.warmup_steps;
    if (opt.timed_steps < 1) throw ConfigError("bench needs at least one timed step");
    ScenarioOverrides base = opt.base;
    base.steps.reset();
    base.level.reset();
    const Scenario scenario = apply_overrides(load_scenario(base.scenario), base);
    rep.scenario = scenario.name;

    for (Backend b : opt.backends) {
        try {
            require_backend(b);
        } catch (const BackendUnavailable& e) {
            rep.notices.push_back(std::string("skipping ") + std::string(backend_name(b)) + ": " + e.what());
            err << "notice: " << rep.notices.back() << '\n';
        }
    }
    for (int level : opt.levels) {
        std::optional<double> serial_time;
        for (Backend b : opt.backends) {
            if (b == Backend::gpu) continue;  // reported unavailable above
            Scenario s = scenario;
            s.set_level(level);
            s.solver.backend = b;
            const Scenario r = resolve(s);
            (void)validate(r);
            BenchRow row = r.precision == Precision::float32
                               ? detail::bench_one<float>(r, opt.warmup_steps, opt.timed_steps)
                               : detail::bench_one<double>(r, opt.warmup_steps, opt.timed_steps);
            row.level = level;
            row.backend = std::string(backend_name(b));
            if (b == Backend::cpu_serial) serial_time = row.mean_step_time;
            rep.rows.push_back(row);
        }
        if (serial_time) {
            for (BenchRow& row : rep.rows) {
                if (row.level == level) row.speedup = *serial_time / row.mean_step_time;
            }
        }
    }
    return rep;
}

inline json to_json(const BenchmarkReport& rep) {
    json rows = json::array();
    for (const BenchRow& r : rep.rows) {
        json j = {{"level", r.level},
                  {"backend", r.backend},
                  {"cells", r.cells},
                  {"n_steps", r.n_steps},
                  {"timed_steps", r.timed_steps},
                  {"init_time_s", r.init_time},
                  {"mean_step_time_s", r.mean_step_time},
                  {"timed_wall_time_s", r.timed_wall_time},
                  {"total_time_s", r.total_time}};
        j["speedup_vs_cpu_serial"] = r.speedup ? json(*r.speedup) : json(nullptr);
        rows.push_back(j);
    }
    return {{"machine", rep.machine},
            {"scenario", rep.scenario},
            {"warmup_steps", rep.warmup_steps},
            {"rows", rows},
            {"notices", rep.notices}};
}

inline std::string format_duration(double seconds);

inline void print_bench_table(const BenchmarkReport& rep, std::ostream& out) {
    out << "machine: " << rep.machine << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf, "%5s  %-13s %10s %14s %10s %14s %8s\n", "level", "backend", "cells", "step time [s]",
                  "init [s]", "total (proj.)", "speedup");
    out << buf;
    for (const BenchRow& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%5d  %-13s %10lld %14.6f %10.3f %14s %8s\n", r.level, r.backend.c_str(),
                      r.cells, r.mean_step_time, r.init_time, format_duration(r.total_time).c_str(),
                      r.speedup ? std::to_string(*r.speedup).substr(0, 5).c_str() : "-");
        out << buf;
    }
}

// ---------------------------------------------------------------------------
// compare

struct StationError {
    std::string station;
    std::optional<double> distance_km;
    std::map<std::string, double> rms;
    std::map<std::string, double> relative;
    double mean_rms = 0.0;
    double mean_relative = 0.0;
};

struct CompareReport {
    double f_lo = 0.02;
    double f_hi = 0.06;
    std::vector<StationError> stations;
    double mean_rms = 0.0;
    double mean_relative = 0.0;
};

struct CompareOptions {
    std::filesystem::path sim_dir;
    std::filesystem::path ref_dir;
    double f_lo = 0.02;
    double f_hi = 0.06;
    std::optional<std::string> scenario;       // source of the centroid when no manifest exists
    std::optional<std::filesystem::path> out;  // overlay series + report
};

/// Parses "f_lo:f_hi".
inline std::pair<double, double> parse_band(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("--band expects f_lo:f_hi, got '" + s + "'");
    try {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("--band expects numeric f_lo:f_hi, got '" + s + "'");
    }
}

inline std::optional<GeographicPoint> find_centroid(const CompareOptions& o) {
    for (const auto& dir : {o.sim_dir, o.ref_dir}) {
        const auto m = dir / "manifest.json";
        if (std::filesystem::exists(m)) return load_scenario_file(m).source.location;
    }
    if (o.scenario) return load_scenario(*o.scenario).source.location;
    return std::nullopt;
}

namespace detail {

struct AlignedPair {
    double t0 = 0.0;  // seconds after the sim trace start
    double dt = 0.0;
    std::vector<double> sim;
    std::vector<double> ref;
};

// Both traces band-passed on their own sampling, then put on the sim axis over the common window.
inline AlignedPair align(const Trace& sim, const Trace& ref, double f_lo, double f_hi) {
    if (sim.samples.empty() || ref.samples.empty()) throw DomainError("empty trace for " + sim.header.station);
    const auto fs = bandpass(sim.samples, sim.header.dt, f_lo, f_hi);
    const auto fr = bandpass(ref.samples, ref.header.dt, f_lo, f_hi);
    const double ref_offset = seconds_between(sim.header.start_time, ref.header.start_time);
    const double sim_end = (sim.samples.size() - 1) * sim.header.dt;
    const double ref_end = ref_offset + (ref.samples.size() - 1) * ref.header.dt;
    const double start = std::max(0.0, ref_offset);
    const double end = std::min(sim_end, ref_end);
    if (end < start) throw DomainError("traces for " + sim.header.station + " do not overlap in time");
    AlignedPair p;
    p.dt = sim.header.dt;
    const auto n = static_cast<std::size_t>(std::floor((end - start) / p.dt + 1e-9)) + 1;
    p.t0 = start;
    p.sim = resample_linear(fs, 0.0, sim.header.dt, start, p.dt, n);
    p.ref = resample_linear(fr, ref_offset, ref.header.dt, start, p.dt, n);
    return p;
}

}  // namespace detail

inline CompareReport cmd_compare(const CompareOptions& o) {
    CompareReport rep;
    rep.f_lo = o.f_lo;
    rep.f_hi = o.f_hi;
    const auto sim_files = list_trace_files(o.sim_dir);
    const auto ref_files = list_trace_files(o.ref_dir);
    const auto centroid = find_centroid(o);
    if (o.out) std::filesystem::create_directories(*o.out);

    for (const auto& [station, comps] : sim_files) {
        const auto it = ref_files.find(station);
        if (it == ref_files.end()) continue;
        StationError se;
        se.station = station;
        for (const auto& [comp, path] : comps) {
            const auto rit = it->second.find(comp);
            if (rit == it->second.end()) continue;
            const Trace sim = read_trace(path);
            const Trace ref = read_trace(rit->second);
            if (centroid && !se.distance_km) {
                se.distance_km = surface_distance(sim.header.lat, sim.header.lon, centroid->lat, centroid->lon) / 1000.0;
            }
            const auto p = detail::align(sim, ref, o.f_lo, o.f_hi);
            const double e = rms_error(p.sim, p.ref);
            const double r = rms(p.ref);
            se.rms[comp] = e;
            se.relative[comp] = e == 0.0 ? 0.0 : (r == 0.0 ? std::numeric_limits<double>::infinity() : e / r);
            if (o.out) {
                std::ofstream ov(*o.out / (station + "_" + comp + "_overlay.txt"));
                ov << "# station: " << station << "\n# component: " << comp << "\n# band_hz: " << o.f_lo << ":"
                   << o.f_hi << "\n# columns: time_s sim ref\n";
                for (std::size_t i = 0; i < p.sim.size(); ++i) {
                    ov << format_double(p.t0 + i * p.dt) << ' ' << format_double(p.sim[i]) << ' '
                       << format_double(p.ref[i]) << '\n';
                }
            }
        }
        if (se.rms.empty()) continue;
        for (const auto& [c, v] : se.rms) se.mean_rms += v / se.rms.size();
        for (const auto& [c, v] : se.relative) se.mean_relative += v / se.relative.size();
        rep.stations.push_back(se);
    }
    if (rep.stations.empty()) {
        throw ConfigError("no common station/component traces between " + o.sim_dir.string() + " and " +
                          o.ref_dir.string());
    }
    std::stable_sort(rep.stations.begin(), rep.stations.end(), [](const StationError& a, const StationError& b) {
        return a.distance_km.value_or(0.0) < b.distance_km.value_or(0.0);
    });
    for (const auto& s : rep.stations) {
        rep.mean_rms += s.mean_rms / rep.stations.size();
        rep.mean_relative += s.mean_relative / rep.stations.size();
    }
    return rep;
}

inline json to_json(const CompareReport& rep) {
    json st = json::array();
    for (const auto& s : rep.stations) {
        json j = {{"station", s.station}};
        j["distance_km"] = s.distance_km ? json(*s.distance_km) : json(nullptr);
        j["rms_error"] = s.rms;
        json rel = json::object();
        for (const auto& [c, v] : s.relative) rel[c] = std::isfinite(v) ? json(v) : json("inf");
        j["relative_error"] = rel;
        j["mean_rms_error"] = s.mean_rms;
        j["mean_relative_error"] = std::isfinite(s.mean_relative) ? json(s.mean_relative) : json("inf");
        st.push_back(j);
    }
    return {{"band_hz", {rep.f_lo, rep.f_hi}},
            {"stations", st},
            {"mean_rms_error", rep.mean_rms},
            {"mean_relative_error", std::isfinite(rep.mean_relative) ? json(rep.mean_relative) : json("inf")}};
}

inline void print_compare_table(const CompareReport& rep, std::ostream& out) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "band %.4g-%.4g Hz\n%-8s %10s %12s %12s %12s %10s\n", rep.f_lo, rep.f_hi, "station",
                  "dist [km]", "rms vx", "rms vy", "rms vz", "rel (mean)");
    out << buf;
    for (const auto& s : rep.stations) {
        auto get = [&](const char* c) {
            const auto it = s.rms.find(c);
            return it == s.rms.end() ? std::nan("") : it->second;
        };
        std::snprintf(buf, sizeof buf, "%-8s %10.1f %12.4e %12.4e %12.4e %10.4f\n", s.station.c_str(),
                      s.distance_km.value_or(std::nan("")), get("vx"), get("vy"), get("vz"), s.mean_relative);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%-8s %10s %38.4e %10.4f\n", "mean", "", rep.mean_rms, rep.mean_relative);
    out << buf;
}

// ---------------------------------------------------------------------------
// estimate

/// dd:hh:mm:ss, rounded to whole seconds.
inline std::string format_duration(double seconds) {
    if (!(seconds >= 0.0)) seconds = 0.0;
    auto total = static_cast<long long>(std::llround(seconds));
    const long long s = total % 60;
    total /= 60;
    const long long m = total % 60;
    total /= 60;
    const long long h = total % 24;
    const long long d = total / 24;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld:%02lld", d, h, m, s);
    return buf;
}

struct EstimateOptions {
    ScenarioOverrides base;
    long long n_simulations = 1000;
    long long n_iterations = 10;
    std::optional<double> step_time;                   // measured seconds per step
    std::optional<std::filesystem::path> bench_report;  // bench JSON to look the step time up in
    int probe_steps = 10;
};

struct Estimate {
    double step_time = 0.0;
    int n_steps = 0;
    long long n_simulations = 0;
    long long n_iterations = 0;
    double total_seconds = 0.0;
    std::string source;  // where step_time came from
    [[nodiscard]] std::string formatted() const { return format_duration(total_seconds); }
};

inline Estimate estimate_total(double step_time, int n_steps, long long n_sims, long long n_iters) {
    if (step_time < 0.0 || n_steps < 0 || n_sims < 0 || n_iters < 0) throw ConfigError("estimate inputs must be >= 0");
    Estimate e;
    e.step_time = step_time;
    e.n_steps = n_steps;
    e.n_simulations = n_sims;
    e.n_iterations = n_iters;
    e.total_seconds = step_time * n_steps * static_cast<double>(n_sims) * static_cast<double>(n_iters);
    return e;
}

inline Estimate cmd_estimate(const EstimateOptions& o) {
    const Scenario r = load_resolved(o.base);
    const int n_steps = r.domain.n_steps.value();
    std::optional<double> st = o.step_time;
    std::string source = "given";
    if (!st && o.bench_report) {
        std::ifstream in(*o.bench_report);
        if (!in) throw ConfigError("cannot open bench report " + o.bench_report->string());
        const json rep = json::parse(in);
        const std::string want = std::string(backend_name(r.solver.backend));
        for (const auto& row : rep.at("rows")) {
            if (row.value("backend", "") == want && r.domain.level && row.value("level", -1) == *r.domain.level) {
                st = row.at("mean_step_time_s").get<double>();
            }
        }
        if (!st) throw ConfigError("bench report has no row for this level and backend");
        source = "bench report";
    }
    if (!st) {
        (void)validate(r);
        require_backend(r.solver.backend);
        const BenchRow row = r.precision == Precision::float32 ? detail::bench_one<float>(r, 2, o.probe_steps)
                                                               : detail::bench_one<double>(r, 2, o.probe_steps);
        st = row.mean_step_time;
        source = "probe";
    }
    Estimate e = estimate_total(*st, n_steps, o.n_simulations, o.n_iterations);
    e.source = source;
    return e;
}

// ---------------------------------------------------------------------------
// presets

inline void print_presets(std::ostream& out) {
    for (const auto& name : preset_names()) {
        const Scenario s = load_scenario(name);
        out << name << ": " << s.receivers.size() << " stations, " << s.medium.model.layers.size()
            << " layers, source at " << s.source.location.lat << ", " << s.source.location.lon << ", "
            << s.source.location.depth_km << " km\n";
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%5s %16s %7s %6s %11s %11s\n", "level", "grid", "steps", "dt", "dt_max", "f_max");
    out << buf;
    for (const LevelOfDetail& l : level_presets()) {
        const Scenario r = resolve(cuba_2016(l.level));
        const SimulationDomain d = make_domain(r);
        const ScenarioLimits lim = scenario_limits(r, d);
        const std::string grid = std::to_string(l.grid.nx) + "x" + std::to_string(l.grid.ny) + "x" +
                                 std::to_string(l.grid.nz);
        std::snprintf(buf, sizeof buf, "%5d %16s %7d %6.3g %11.4f %11.4f\n", l.level, grid.c_str(), l.n_steps, l.dt,
                      lim.dt_max, lim.f_max);
        out << buf;
    }
}

}  // namespace elastic3d
