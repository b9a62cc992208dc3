#include <gtest/gtest.h>

#include <complex>
#include <numeric>

#include "elastic3d/fields.hpp"
#include "elastic3d/source.hpp"

using namespace elastic3d;

TEST(Wavelet, RickerShape) {
    const SourceTimeFunction stf{WaveletKind::ricker, 2.0, 1.0};
    EXPECT_DOUBLE_EQ(evaluate_stf(stf, 1.0), 1.0);
    // Zero crossings at t0 +- 1/(sqrt(2) pi f).
    const double tz = 1.0 / (std::sqrt(2.0) * std::numbers::pi * 2.0);
    EXPECT_NEAR(evaluate_stf(stf, 1.0 + tz), 0.0, 1e-12);
    EXPECT_NEAR(evaluate_stf(stf, 1.0 - tz), 0.0, 1e-12);
    EXPECT_NEAR(evaluate_stf(stf, 0.0), 0.0, 1e-6);
    EXPECT_DOUBLE_EQ(SourceTimeFunction::default_delay(0.5), 3.0);
}

TEST(Wavelet, RickerSpectrumPeaksAtPeakFrequency) {
    const double fp = 2.0, dt = 0.005;
    const SourceTimeFunction stf{WaveletKind::ricker, fp, 1.0};
    std::vector<double> x(800);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = evaluate_stf(stf, n * dt);
    double best_f = 0.0, best = -1.0;
    for (double f = 0.5; f <= 5.0; f += 0.01) {
        std::complex<double> s = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n) s += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * n * dt);
        if (std::abs(s) > best) {
            best = std::abs(s);
            best_f = f;
        }
    }
    EXPECT_NEAR(best_f, fp, 0.011);
}

TEST(Wavelet, GaussianDerivativeIsOddAndUnitPeak) {
    const SourceTimeFunction stf{WaveletKind::gaussian_derivative, 1.0, 2.0};
    EXPECT_DOUBLE_EQ(evaluate_stf(stf, 2.0), 0.0);
    EXPECT_NEAR(evaluate_stf(stf, 2.3), -evaluate_stf(stf, 1.7), 1e-15);
    const double tpk = 2.0 + 1.0 / (std::sqrt(2.0) * std::numbers::pi);
    EXPECT_NEAR(std::abs(evaluate_stf(stf, tpk)), 1.0, 1e-12);
    EXPECT_EQ(wavelet_from_name("gaussian-derivative"), WaveletKind::gaussian_derivative);
    EXPECT_THROW(wavelet_from_name("boxcar"), ConfigError);
}

TEST(MomentTensor, Components) {
    const MomentTensor m = MomentTensor::from_matrix({{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}});
    EXPECT_DOUBLE_EQ(m[Component::sxx], 1);
    EXPECT_DOUBLE_EQ(m[Component::syy], 5);
    EXPECT_DOUBLE_EQ(m[Component::szz], 9);
    EXPECT_DOUBLE_EQ(m[Component::sxy], 3);
    EXPECT_DOUBLE_EQ(m[Component::sxz], 5);
    EXPECT_DOUBLE_EQ(m[Component::syz], 7);
    const MomentTensor iso = MomentTensor::isotropic(2.0);
    EXPECT_DOUBLE_EQ(iso[Component::sxy], 0.0);
    EXPECT_DOUBLE_EQ((iso + iso)[Component::szz], 4.0);
}

TEST(Injection, FootprintWeightsSumToOne) {
    const GridDims g{8, 8, 8};
    const NodeFootprint f = node_footprint(g, {3.25, 4.5, 2.75});
    EXPECT_NEAR(std::accumulate(f.weight.begin(), f.weight.end(), 0.0), 1.0, 1e-15);
    const NodeFootprint on = node_footprint(g, {3.0, 4.0, 2.0});
    EXPECT_DOUBLE_EQ(on.weight[0], 1.0);
}

TEST(Injection, AddsScaledMomentRate) {
    auto d = SimulationDomain::make({0, 1, 0, 1, 0, 10}, {8, 8, 8}, 0.01, 10, {});
    MomentTensorSource src;
    src.moment = {1e15, 2e15, 3e15, 4e15, 5e15, 6e15};
    src.stf = {WaveletKind::ricker, 1.0, 0.5};
    const PlacedSource ps = PlacedSource::place(src, d, {3.3, 4.1, 4.6});
    FieldSet<double> f(d.grid);
    inject_source(f, ps, d, 0.5, d.dt);
    const double scale = -1.0 * d.dt / (d.dx * d.dy * d.dz);
    for (Component c : kStressComponents) {
        double sum = 0.0;
        for (double v : f[c].values()) sum += v;
        EXPECT_NEAR(sum / (src.moment[c] * scale), 1.0, 1e-12) << component_name(c);
    }
    for (double v : f.vx.values()) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(PlacedSource::place(src, d, {9.0, 1.0, 1.0}), ConfigError);
}

TEST(Injection, StaggeredFootprintsDiffer) {
    auto d = SimulationDomain::make({0, 1, 0, 1, 0, 10}, {8, 8, 8}, 0.01, 10, {});
    MomentTensorSource src;
    src.moment = MomentTensor::isotropic(1.0);
    const PlacedSource ps = PlacedSource::place(src, d, {4.0, 4.0, 4.0});
    // sxx sits on the node, sxy half a cell off in x and y.
    EXPECT_DOUBLE_EQ(ps.footprint[0].weight[0], 1.0);
    EXPECT_DOUBLE_EQ(ps.footprint[3].weight[0], 0.25);
}
