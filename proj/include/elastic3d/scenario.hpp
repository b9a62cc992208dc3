#pragma once

// Scenario configuration: JSON (de)serialization, resolution of level presets
// and derived defaults, validation, and construction of a ready Simulation.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "medium.hpp"
#include "receivers.hpp"
#include "solver.hpp"
#include "source.hpp"
#include "sponge.hpp"
#include "utc_time.hpp"

namespace elastic3d {

using json = nlohmann::ordered_json;

enum class FrequencyCheck { warn, error };
enum class Precision { float64, float32 };

struct DomainConfig {
    GeographicBounds bounds;
    std::optional<int> level;
    std::optional<GridDims> grid;
    std::optional<double> dt;
    std::optional<int> n_steps;
    UtcTime start_time{};
    std::optional<UtcTime> end_time;  // informational; n_steps * dt sets the run length
};

struct MediumConfig {
    LayeredModel model;
    std::optional<GridDims> parameter_grid;
    std::array<int, 3> parameter_divisor{4, 4, 4};
};

struct SourceConfig {
    MomentTensor moment;
    GeographicPoint location;
    std::optional<UtcTime> centroid_time;
    WaveletKind kind = WaveletKind::ricker;
    std::optional<double> peak_frequency;
    std::optional<double> onset_delay;  // seconds after start_time of the wavelet center
    double injection_sign = -1.0;
};

struct StationConfig {
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    double altitude_m = 0.0;
};

struct Scenario {
    std::string name = "scenario";
    DomainConfig domain;
    MediumConfig medium;
    SourceConfig source;
    std::vector<StationConfig> receivers;
    SpongeProfile sponge;
    SolverOptions solver;
    Precision precision = Precision::float64;
    FrequencyCheck frequency_check = FrequencyCheck::warn;
    std::string output_dir = "out";

    /// Selects a level preset, dropping any explicit grid / dt / steps / parameter grid.
    void set_level(int level) {
        (void)level_preset(level);
        domain.level = level;
        domain.grid.reset();
        domain.dt.reset();
        domain.n_steps.reset();
        medium.parameter_grid.reset();
    }
};

// ---------------------------------------------------------------------------
// JSON

namespace detail {

template <class T>
T required(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return required<T>(j, key, where);
}

inline json grid_json(GridDims g) { return json::array({g.nx, g.ny, g.nz}); }

inline GridDims grid_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected [nx, ny, nz]");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

inline UtcTime time_from(const json& j, const char* key, const std::string& where) {
    try {
        return parse_utc(required<std::string>(j, key, where));
    } catch (const DomainError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace detail

inline json to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;

    json d;
    const auto& b = s.domain.bounds;
    d["lat_min"] = b.lat_min;
    d["lat_max"] = b.lat_max;
    d["lon_min"] = b.lon_min;
    d["lon_max"] = b.lon_max;
    d["depth_min_km"] = b.depth_min_km;
    d["depth_max_km"] = b.depth_max_km;
    if (s.domain.level) d["level"] = *s.domain.level;
    if (s.domain.grid) d["grid"] = detail::grid_json(*s.domain.grid);
    if (s.domain.dt) d["dt"] = *s.domain.dt;
    if (s.domain.n_steps) d["n_steps"] = *s.domain.n_steps;
    d["start_time"] = format_utc(s.domain.start_time);
    if (s.domain.end_time) d["end_time"] = format_utc(*s.domain.end_time);
    j["domain"] = d;

    json m;
    if (s.medium.model.surface_depth_km) m["surface_depth_km"] = *s.medium.model.surface_depth_km;
    else m["surface_depth_km"] = nullptr;
    json layers = json::array();
    for (const Layer& l : s.medium.model.layers) {
        layers.push_back(json::array({l.top_depth_km, l.vp_km_s, l.vs_km_s, l.rho_g_cm3}));
    }
    m["layers"] = layers;
    if (s.medium.parameter_grid) m["parameter_grid"] = detail::grid_json(*s.medium.parameter_grid);
    m["parameter_divisor"] = json::array({s.medium.parameter_divisor[0], s.medium.parameter_divisor[1],
                                          s.medium.parameter_divisor[2]});
    j["medium"] = m;

    json src;
    const MomentTensor& mt = s.source.moment;
    src["moment_tensor"] = {{"xx", mt.xx}, {"yy", mt.yy}, {"zz", mt.zz}, {"xy", mt.xy}, {"xz", mt.xz}, {"yz", mt.yz}};
    src["latitude"] = s.source.location.lat;
    src["longitude"] = s.source.location.lon;
    src["depth_km"] = s.source.location.depth_km;
    if (s.source.centroid_time) src["centroid_time"] = format_utc(*s.source.centroid_time);
    src["stf"] = std::string(wavelet_name(s.source.kind));
    if (s.source.peak_frequency) src["peak_frequency"] = *s.source.peak_frequency;
    if (s.source.onset_delay) src["onset_delay"] = *s.source.onset_delay;
    src["injection_sign"] = s.source.injection_sign;
    j["source"] = src;

    json rec = json::array();
    for (const StationConfig& st : s.receivers) {
        rec.push_back({{"name", st.name}, {"latitude", st.lat}, {"longitude", st.lon}, {"altitude_m", st.altitude_m}});
    }
    j["receivers"] = rec;

    const auto& f = s.sponge.faces;
    j["sponge"] = {{"width", s.sponge.width},
                   {"strength", s.sponge.strength},
                   {"faces",
                    {{"x_lo", f.x_lo}, {"x_hi", f.x_hi}, {"y_lo", f.y_lo}, {"y_hi", f.y_hi}, {"z_lo", f.z_lo},
                     {"z_hi", f.z_hi}}}};

    j["solver"] = {{"backend", std::string(backend_name(s.solver.backend))},
                   {"threads", s.solver.threads},
                   {"medium_cache", s.solver.medium_cache},
                   {"divergence_check_interval", s.solver.divergence_check_interval},
                   {"precision", s.precision == Precision::float32 ? "float32" : "float64"}};
    j["frequency_check"] = s.frequency_check == FrequencyCheck::error ? "error" : "warn";
    j["output_dir"] = s.output_dir;
    return j;
}

/// Accepts a scenario object or a run manifest (which embeds one under "scenario").
inline Scenario scenario_from_json(const json& root) {
    const json& j = root.contains("scenario") && root.at("scenario").is_object() ? root.at("scenario") : root;
    Scenario s;
    s.name = j.value("name", s.name);

    if (!j.contains("domain")) throw ConfigError("scenario: missing 'domain'");
    const json& d = j.at("domain");
    const std::string dw = "domain";
    s.domain.bounds = {detail::required<double>(d, "lat_min", dw),      detail::required<double>(d, "lat_max", dw),
                       detail::required<double>(d, "lon_min", dw),      detail::required<double>(d, "lon_max", dw),
                       detail::required<double>(d, "depth_min_km", dw), detail::required<double>(d, "depth_max_km", dw)};
    s.domain.level = detail::optional_field<int>(d, "level", dw);
    if (d.contains("grid")) s.domain.grid = detail::grid_from(d.at("grid"), "domain.grid");
    s.domain.dt = detail::optional_field<double>(d, "dt", dw);
    s.domain.n_steps = detail::optional_field<int>(d, "n_steps", dw);
    s.domain.start_time = detail::time_from(d, "start_time", dw);
    if (d.contains("end_time")) s.domain.end_time = detail::time_from(d, "end_time", dw);

    if (!j.contains("medium")) throw ConfigError("scenario: missing 'medium'");
    const json& m = j.at("medium");
    if (m.contains("surface_depth_km")) {
        s.medium.model.surface_depth_km = m.at("surface_depth_km").is_null()
                                              ? std::nullopt
                                              : std::optional<double>(m.at("surface_depth_km").get<double>());
    }
    if (!m.contains("layers") || !m.at("layers").is_array()) throw ConfigError("medium: missing 'layers' table");
    for (const json& row : m.at("layers")) {
        if (!row.is_array() || row.size() != 4) {
            throw ConfigError("medium.layers: each row is [top_km, vp_km_s, vs_km_s, rho_g_cm3]");
        }
        s.medium.model.layers.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                                         row[3].get<double>()});
    }
    if (m.contains("parameter_grid")) s.medium.parameter_grid = detail::grid_from(m.at("parameter_grid"), "medium.parameter_grid");
    if (m.contains("parameter_divisor")) {
        const GridDims g = detail::grid_from(m.at("parameter_divisor"), "medium.parameter_divisor");
        s.medium.parameter_divisor = {g.nx, g.ny, g.nz};
    }

    if (!j.contains("source")) throw ConfigError("scenario: missing 'source'");
    const json& src = j.at("source");
    const std::string sw = "source";
    if (!src.contains("moment_tensor")) throw ConfigError("source: missing 'moment_tensor'");
    const json& mt = src.at("moment_tensor");
    const std::string mw = "source.moment_tensor";
    s.source.moment = {detail::required<double>(mt, "xx", mw), detail::required<double>(mt, "yy", mw),
                       detail::required<double>(mt, "zz", mw), detail::required<double>(mt, "xy", mw),
                       detail::required<double>(mt, "xz", mw), detail::required<double>(mt, "yz", mw)};
    s.source.location = {detail::required<double>(src, "latitude", sw), detail::required<double>(src, "longitude", sw),
                         detail::required<double>(src, "depth_km", sw)};
    if (src.contains("centroid_time")) s.source.centroid_time = detail::time_from(src, "centroid_time", sw);
    s.source.kind = wavelet_from_name(src.value("stf", std::string("ricker")));
    s.source.peak_frequency = detail::optional_field<double>(src, "peak_frequency", sw);
    s.source.onset_delay = detail::optional_field<double>(src, "onset_delay", sw);
    s.source.injection_sign = src.value("injection_sign", -1.0);

    if (j.contains("receivers")) {
        for (const json& r : j.at("receivers")) {
            const std::string rw = "receivers";
            s.receivers.push_back({detail::required<std::string>(r, "name", rw), detail::required<double>(r, "latitude", rw),
                                   detail::required<double>(r, "longitude", rw), r.value("altitude_m", 0.0)});
        }
    }

    if (j.contains("sponge")) {
        const json& sp = j.at("sponge");
        s.sponge.width = sp.value("width", s.sponge.width);
        s.sponge.strength = sp.value("strength", s.sponge.strength);
        if (sp.contains("faces")) {
            const json& f = sp.at("faces");
            auto& faces = s.sponge.faces;
            faces.x_lo = f.value("x_lo", faces.x_lo);
            faces.x_hi = f.value("x_hi", faces.x_hi);
            faces.y_lo = f.value("y_lo", faces.y_lo);
            faces.y_hi = f.value("y_hi", faces.y_hi);
            faces.z_lo = f.value("z_lo", faces.z_lo);
            faces.z_hi = f.value("z_hi", faces.z_hi);
        }
    }

    if (j.contains("solver")) {
        const json& so = j.at("solver");
        s.solver.backend = backend_from_name(so.value("backend", std::string("cpu-serial")));
        s.solver.threads = so.value("threads", 0);
        s.solver.medium_cache = so.value("medium_cache", false);
        s.solver.divergence_check_interval = so.value("divergence_check_interval", 10);
        const std::string prec = so.value("precision", std::string("float64"));
        if (prec == "float64") s.precision = Precision::float64;
        else if (prec == "float32") s.precision = Precision::float32;
        else throw ConfigError("solver.precision must be float64 or float32");
    }
    const std::string fc = j.value("frequency_check", std::string("warn"));
    if (fc == "warn") s.frequency_check = FrequencyCheck::warn;
    else if (fc == "error") s.frequency_check = FrequencyCheck::error;
    else throw ConfigError("frequency_check must be 'warn' or 'error'");
    s.output_dir = j.value("output_dir", s.output_dir);
    return s;
}

inline Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    try {
        return scenario_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file " + path.string() + " is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Resolution and validation

/// Stability and bandwidth limits of a (resolved) scenario.
struct ScenarioLimits {
    double dt_max = 0.0;
    double f_max = 0.0;
    double vel_max = 0.0;
    double vel_min = 0.0;
};

inline SimulationDomain make_domain(const Scenario& s) {
    if (!s.domain.grid || !s.domain.dt || !s.domain.n_steps) {
        throw ConfigError("domain: grid, dt and n_steps must be set (give a level or explicit values)");
    }
    try {
        return SimulationDomain::make(s.domain.bounds, *s.domain.grid, *s.domain.dt, *s.domain.n_steps,
                                      s.domain.start_time);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
}

inline ScenarioLimits scenario_limits(const Scenario& s, const SimulationDomain& d) {
    ScenarioLimits l;
    l.vel_max = s.medium.model.max_velocity();
    l.vel_min = s.medium.model.min_velocity();
    l.dt_max = max_time_step(d.min_spacing(), l.vel_max);
    l.f_max = max_source_frequency(d.max_spacing(), l.vel_min);
    return l;
}

/// Fills every derived field: level preset values, parameter grid, wavelet
/// peak frequency (half the grid limit) and onset (centroid offset, else 1.5/f).
inline Scenario resolve(Scenario s) {
    if (s.domain.level) {
        const LevelOfDetail& lod = level_preset(*s.domain.level);
        if (!s.domain.grid) s.domain.grid = lod.grid;
        if (!s.domain.dt) s.domain.dt = lod.dt;
        if (!s.domain.n_steps) s.domain.n_steps = lod.n_steps;
    }
    try {
        s.medium.model.validate();
    } catch (const ModelError& e) {
        throw ConfigError(std::string("medium: ") + e.what());
    }
    const SimulationDomain d = make_domain(s);
    if (!s.medium.parameter_grid) s.medium.parameter_grid = parameter_grid_for(*s.domain.grid, s.medium.parameter_divisor);
    if (!s.source.peak_frequency) s.source.peak_frequency = 0.5 * scenario_limits(s, d).f_max;
    if (!(*s.source.peak_frequency > 0.0)) throw ConfigError("source: peak_frequency must be positive");
    if (!s.source.onset_delay) {
        s.source.onset_delay = s.source.centroid_time ? seconds_between(s.domain.start_time, *s.source.centroid_time)
                                                      : SourceTimeFunction::default_delay(*s.source.peak_frequency);
    }
    return s;
}

inline bool same_resolved(const Scenario& a, const Scenario& b) { return to_json(resolve(a)) == to_json(resolve(b)); }

/// Receiver depth: at its altitude, but never above the free surface, and at
/// least on the first grid node below the surface level.
inline Receiver place_receiver(const StationConfig& st, const SimulationDomain& d, const LayeredModel& model) {
    double depth_km = -st.altitude_m / 1000.0;
    if (model.surface_depth_km) depth_km = std::max(depth_km, *model.surface_depth_km);
    depth_km = std::clamp(depth_km, d.bounds.depth_min_km, d.bounds.depth_max_km);
    Receiver r{st.name, st.lat, st.lon, st.altitude_m, {}};
    try {
        r.position = d.grid_position({st.lat, st.lon, depth_km});
    } catch (const DomainError& e) {
        throw ConfigError("receiver " + st.name + ": " + e.what());
    }
    if (model.surface_depth_km) {
        const double zs = (*model.surface_depth_km - d.bounds.depth_min_km) * 1000.0 / d.dz - 0.5;
        r.position.z = std::max(r.position.z, std::floor(zs) + 1.0);
    }
    r.position.x = std::clamp(r.position.x, 0.0, d.grid.nx - 1.0);
    r.position.y = std::clamp(r.position.y, 0.0, d.grid.ny - 1.0);
    r.position.z = std::clamp(r.position.z, 0.0, d.grid.nz - 1.0);
    return r;
}

inline MomentTensorSource make_source(const Scenario& s) {
    MomentTensorSource src;
    src.moment = s.source.moment;
    src.location = s.source.location;
    if (s.source.centroid_time) src.centroid_time = *s.source.centroid_time;
    src.stf = {s.source.kind, s.source.peak_frequency.value(), s.source.onset_delay.value()};
    src.injection_sign = s.source.injection_sign;
    return src;
}

struct ValidationReport {
    ScenarioLimits limits;
    std::vector<std::string> warnings;
};

/// Rejects (ConfigError) what must not run; returns warnings for what may.
inline ValidationReport validate(const Scenario& resolved) {
    ValidationReport rep;
    const SimulationDomain d = make_domain(resolved);
    rep.limits = scenario_limits(resolved, d);
    if (d.dt > rep.limits.dt_max) {
        throw ConfigError("domain.dt " + std::to_string(d.dt) + " s exceeds the stability limit " +
                          std::to_string(rep.limits.dt_max) + " s");
    }
    const double fp = resolved.source.peak_frequency.value();
    if (fp > rep.limits.f_max) {
        const std::string msg = "source.peak_frequency " + std::to_string(fp) + " Hz exceeds the grid limit " +
                                std::to_string(rep.limits.f_max) + " Hz";
        if (resolved.frequency_check == FrequencyCheck::error) throw ConfigError(msg);
        rep.warnings.push_back(msg);
    }
    if (resolved.source.onset_delay.value() < SourceTimeFunction::default_delay(fp)) {
        rep.warnings.push_back("source onset " + std::to_string(*resolved.source.onset_delay) +
                               " s truncates the wavelet (needs >= " +
                               std::to_string(SourceTimeFunction::default_delay(fp)) + " s)");
    }
    try {
        resolved.sponge.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("sponge: ") + e.what());
    }
    if (resolved.solver.divergence_check_interval < 0) throw ConfigError("solver.divergence_check_interval must be >= 0");
    const GridDims pg = resolved.medium.parameter_grid.value();
    if (pg.nx < 2 || pg.ny < 2 || pg.nz < 2) throw ConfigError("medium.parameter_grid needs >= 2 samples per axis");
    (void)PlacedSource::place(make_source(resolved), d);

    const SpongeTable<double> sponge(resolved.sponge, d.grid);
    for (const StationConfig& st : resolved.receivers) {
        const Receiver r = place_receiver(st, d, resolved.medium.model);
        const int i = static_cast<int>(std::lround(r.position.x));
        const int j = static_cast<int>(std::lround(r.position.y));
        const int k = static_cast<int>(std::lround(r.position.z));
        if (!sponge.interior(i, j, k)) rep.warnings.push_back("receiver " + st.name + " lies inside the sponge layer");
    }
    return rep;
}

template <class Real>
Simulation<Real> make_simulation(const Scenario& resolved) {
    const SimulationDomain d = make_domain(resolved);
    auto volume = build_parameter_volume<Real>(resolved.medium.model, d, resolved.medium.parameter_grid.value());
    std::vector<PlacedSource> sources{PlacedSource::place(make_source(resolved), d)};
    std::vector<Receiver> receivers;
    for (const StationConfig& st : resolved.receivers) receivers.push_back(place_receiver(st, d, resolved.medium.model));
    return Simulation<Real>(d, std::move(volume), resolved.sponge, std::move(sources), std::move(receivers),
                            resolved.solver);
}

// ---------------------------------------------------------------------------
// Bundled presets

/// The 2016-01-17 Cuba event: station table, earthquake centroid, moment
/// tensor, layered model and domain. Wavelet peak is fixed at 0.025 Hz so all
/// levels share the same source and stay inside the 0.02-0.06 Hz comparison band.
inline Scenario cuba_2016(int level = 0) {
    Scenario s;
    s.name = "cuba-2016";
    s.domain.bounds = {17.78, 21.63, -78.27, -71.86, -30.0, 90.0};
    s.domain.start_time = parse_utc("2016-01-17 08:29:25.0");
    s.domain.end_time = parse_utc("2016-01-17 08:32:24.91");
    s.medium.model.surface_depth_km = 0.0;
    s.medium.model.layers = {
        {0.0, 4.90, 2.816, 2.50}, {3.0, 5.40, 3.103, 2.60},  {5.0, 6.00, 3.448, 2.70},  {7.0, 6.90, 3.966, 2.80},
        {20.0, 7.60, 4.368, 3.10}, {26.0, 7.80, 4.483, 3.26}, {34.0, 8.00, 4.598, 3.30},
    };
    // Laterally homogeneous model: coarse in x/y, full resolution in depth.
    s.medium.parameter_divisor = {4, 4, 1};
    s.source.moment = {-2.37e14, -4.31e16, 4.33e16, -3.39e15, -7.79e14, 4.60e15};
    s.source.location = {19.749, -76.09, 7.0};
    s.source.centroid_time = parse_utc("2016-01-17 08:30:25.08");
    s.source.peak_frequency = 0.025;
    s.receivers = {
        {"CHIV", 19.9763, -76.4147, 20.0},   {"RCC", 19.9942, -75.6958, 100.0},   {"LMGC", 20.064, -77.005, 167.0},
        {"GTBY", 19.92681, -75.11081, 79.2}, {"MASC", 20.175, -74.231, 350.0},    {"CCCC", 21.1934, -77.4173, 89.55},
        {"MTDJ", 18.22606, -77.53453, 925.0}, {"LGNH", 18.511, -72.6058, 62.0},
    };
    s.sponge.width = 6;
    s.sponge.strength = 0.08;
    s.sponge.faces.z_lo = false;  // free surface side
    s.set_level(level);
    return s;
}

inline std::vector<std::string> preset_names() { return {"cuba-2016"}; }

/// A preset name or a scenario file path.
inline Scenario load_scenario(const std::string& name_or_path) {
    if (name_or_path == "cuba-2016") return cuba_2016(0);
    return load_scenario_file(name_or_path);
}

}  // namespace elastic3d
