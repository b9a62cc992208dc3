#include <gtest/gtest.h>

#include "elastic3d/scenario.hpp"

using namespace elastic3d;

TEST(Scenario, CubaPresetContents) {
    const Scenario s = cuba_2016();
    EXPECT_EQ(s.receivers.size(), 8u);
    EXPECT_EQ(s.receivers.front().name, "CHIV");
    EXPECT_EQ(s.medium.model.layers.size(), 7u);
    EXPECT_DOUBLE_EQ(s.domain.bounds.lon_max, -71.86);
    EXPECT_DOUBLE_EQ(s.source.moment.yy, -4.31e16);
    EXPECT_DOUBLE_EQ(s.source.location.depth_km, 7.0);
    EXPECT_EQ(s.domain.level, 0);
}

TEST(Scenario, PresetsMatchLevelTable) {
    for (const LevelOfDetail& l : level_presets()) {
        const Scenario r = resolve(cuba_2016(l.level));
        EXPECT_EQ(*r.domain.grid, l.grid);
        EXPECT_EQ(*r.domain.n_steps, l.n_steps);
        EXPECT_DOUBLE_EQ(*r.domain.dt, l.dt);
        const ValidationReport v = validate(r);
        EXPECT_LE(l.dt, v.limits.dt_max) << "level " << l.level;
    }
}

TEST(Scenario, ResolveFillsDerivedValues) {
    const Scenario r = resolve(cuba_2016(1));
    EXPECT_NEAR(*r.source.onset_delay, 60.08, 1e-9);
    EXPECT_EQ(*r.medium.parameter_grid, (GridDims{16, 16, 64}));
    Scenario s = cuba_2016(0);
    s.source.peak_frequency.reset();
    s.source.centroid_time.reset();
    const Scenario r2 = resolve(s);
    const auto lim = scenario_limits(r2, make_domain(r2));
    EXPECT_DOUBLE_EQ(*r2.source.peak_frequency, 0.5 * lim.f_max);
    EXPECT_DOUBLE_EQ(*r2.source.onset_delay, 1.5 / *r2.source.peak_frequency);
}

TEST(Scenario, JsonRoundTrip) {
    const Scenario r = resolve(cuba_2016(2));
    const json j = to_json(r);
    const Scenario back = scenario_from_json(json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(to_json(resolve(back)), j);
}

TEST(Scenario, ManifestReingestion) {
    const Scenario r = resolve(cuba_2016(0));
    const json manifest = {{"scenario", to_json(r)}, {"run", {{"dt_max", 0.2}}}};
    EXPECT_EQ(to_json(resolve(scenario_from_json(manifest))), to_json(r));
}

TEST(Scenario, ExplicitValuesOverrideLevel) {
    Scenario s = cuba_2016(0);
    s.domain.n_steps = 17;
    s.domain.dt = 0.05;
    const Scenario r = resolve(s);
    EXPECT_EQ(*r.domain.n_steps, 17);
    EXPECT_DOUBLE_EQ(*r.domain.dt, 0.05);
    s.set_level(1);
    EXPECT_EQ(*resolve(s).domain.n_steps, 1700);
}

TEST(Scenario, ValidationRejectsUnstableDt) {
    Scenario s = cuba_2016(1);
    s.domain.dt = 0.2;
    try {
        validate(resolve(s));
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("domain.dt"), std::string::npos);
    }
}

TEST(Scenario, FrequencyCheckModes) {
    Scenario s = cuba_2016(0);
    s.source.peak_frequency = 0.2;
    const ValidationReport w = validate(resolve(s));
    ASSERT_FALSE(w.warnings.empty());
    EXPECT_NE(w.warnings.front().find("peak_frequency"), std::string::npos);
    s.frequency_check = FrequencyCheck::error;
    EXPECT_THROW(validate(resolve(s)), ConfigError);
}

TEST(Scenario, ReceiverAndSourceOutsideDomain) {
    Scenario s = cuba_2016(0);
    s.receivers.push_back({"FAR", 25.0, -76.0, 0.0});
    EXPECT_THROW(validate(resolve(s)), ConfigError);
    s = cuba_2016(0);
    s.source.location.lon = -60.0;
    EXPECT_THROW(validate(resolve(s)), ConfigError);
}

TEST(Scenario, ReceiversSitBelowFreeSurface) {
    const Scenario r = resolve(cuba_2016(0));
    const SimulationDomain d = make_domain(r);
    const double zs = 30000.0 / d.dz - 0.5;
    for (const auto& st : r.receivers) {
        const Receiver rec = place_receiver(st, d, r.medium.model);
        EXPECT_GT(rec.position.z, zs) << st.name;
        EXPECT_LT(rec.position.z, zs + 1.0) << st.name;
    }
}

TEST(Scenario, MalformedJsonNamesField) {
    json j = to_json(cuba_2016(0));
    j["domain"].erase("lat_min");
    try {
        scenario_from_json(j);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("lat_min"), std::string::npos);
    }
    j = to_json(cuba_2016(0));
    j["solver"]["backend"] = "quantum";
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j = to_json(cuba_2016(0));
    j["medium"]["layers"][1][0] = -5.0;
    EXPECT_THROW(resolve(scenario_from_json(j)), ConfigError);
}

TEST(Scenario, BuildsSimulation) {
    Scenario s = cuba_2016(0);
    s.domain.n_steps = 3;
    auto sim = make_simulation<float>(resolve(s));
    EXPECT_EQ(sim.receivers().size(), 8u);
    const RunResult r = sim.run();
    EXPECT_FALSE(r.diverged);
    EXPECT_EQ(r.traces.length(), 3u);
}
