#pragma once

// Columnar text trace files, one per station and component:
// `<station>_<component>.txt` with '#'-prefixed "key: value" header lines
// followed by "time value" rows (time in seconds since start_time).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "receivers.hpp"
#include "utc_time.hpp"

namespace elastic3d {

struct TraceHeader {
    std::string station;
    std::string component;  // vx, vy or vz
    double lat = 0.0;
    double lon = 0.0;
    double altitude_m = 0.0;
    UtcTime start_time{};
    double dt = 0.0;
};

struct Trace {
    TraceHeader header;
    std::vector<double> samples;
};

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::filesystem::path trace_file_name(const std::string& station, const std::string& component) {
    return station + "_" + component + ".txt";
}

inline void write_trace(const std::filesystem::path& path, const Trace& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path.string());
    const TraceHeader& h = t.header;
    out << "# station: " << h.station << '\n'
        << "# component: " << h.component << '\n'
        << "# components: vx vy vz\n"
        << "# latitude: " << format_double(h.lat) << '\n'
        << "# longitude: " << format_double(h.lon) << '\n'
        << "# altitude_m: " << format_double(h.altitude_m) << '\n'
        << "# start_time: " << format_utc(h.start_time) << '\n'
        << "# dt: " << format_double(h.dt) << '\n'
        << "# units: m/s\n"
        << "# columns: time_s value\n";
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        out << format_double(static_cast<double>(i) * h.dt) << ' ' << format_double(t.samples[i]) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing trace file " + path.string());
}

/// Reads a trace file. Header lines are optional: station and component fall
/// back to the `<station>_<component>` file stem and dt to the time column.
inline Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read trace file " + path.string());
    Trace t;
    std::optional<double> dt;
    std::vector<double> times;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
            };
            trim(key);
            trim(value);
            if (key == "station") t.header.station = value;
            else if (key == "component") t.header.component = value;
            else if (key == "latitude") t.header.lat = std::stod(value);
            else if (key == "longitude") t.header.lon = std::stod(value);
            else if (key == "altitude_m") t.header.altitude_m = std::stod(value);
            else if (key == "start_time") t.header.start_time = parse_utc(value);
            else if (key == "dt") dt = std::stod(value);
            continue;
        }
        std::istringstream row(line);
        double time = 0.0, value = 0.0;
        if (!(row >> time >> value)) throw std::runtime_error("malformed trace row in " + path.string() + ": " + line);
        times.push_back(time);
        t.samples.push_back(value);
    }
    const std::string stem = path.stem().string();
    const auto us = stem.rfind('_');
    if (t.header.station.empty()) t.header.station = us == std::string::npos ? stem : stem.substr(0, us);
    if (t.header.component.empty() && us != std::string::npos) t.header.component = stem.substr(us + 1);
    if (dt) {
        t.header.dt = *dt;
    } else if (times.size() >= 2) {
        t.header.dt = times[1] - times[0];
    } else {
        throw std::runtime_error("trace file " + path.string() + " has no dt");
    }
    return t;
}

/// Writes every receiver's three components into `dir`; returns the paths.
inline std::vector<std::filesystem::path> export_traces(const std::filesystem::path& dir, const TraceSet& traces,
                                                        std::span<const Receiver> receivers,
                                                        const SimulationDomain& domain) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (std::size_t r = 0; r < receivers.size(); ++r) {
        for (int c = 0; c < 3; ++c) {
            Trace t;
            t.header = {receivers[r].name,
                        std::string(component_name(kVelocityComponents[static_cast<std::size_t>(c)])),
                        receivers[r].lat,
                        receivers[r].lon,
                        receivers[r].altitude_m,
                        domain.start_time,
                        domain.dt};
            const auto row = traces.trace(r, c);
            t.samples.assign(row.begin(), row.end());
            const auto path = dir / trace_file_name(t.header.station, t.header.component);
            write_trace(path, t);
            written.push_back(path);
        }
    }
    return written;
}

/// station -> component -> file, for every `*_v[xyz].txt` in `dir`.
inline std::map<std::string, std::map<std::string, std::filesystem::path>> list_trace_files(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::map<std::string, std::map<std::string, std::filesystem::path>> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        const std::string stem = entry.path().stem().string();
        const auto us = stem.rfind('_');
        if (us == std::string::npos) continue;
        const std::string comp = stem.substr(us + 1);
        if (comp != "vx" && comp != "vy" && comp != "vz") continue;
        out[stem.substr(0, us)][comp] = entry.path();
    }
    return out;
}

}  // namespace elastic3d
