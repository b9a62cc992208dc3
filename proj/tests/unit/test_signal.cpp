#include <gtest/gtest.h>

#include "elastic3d/signal.hpp"

using namespace elastic3d;

// Reference values computed with scipy.signal.sosfiltfilt(butter(4, band, 'bandpass', output='sos'), x).
TEST(Bandpass, MatchesReferenceZeroPhaseFilter) {
    const double dt = 0.1;
    std::vector<double> x(400);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double t = n * dt;
        x[n] = std::sin(2 * std::numbers::pi * 0.04 * t) + 0.5 * std::sin(2 * std::numbers::pi * 0.5 * t) + 0.01 * t;
    }
    const auto y = bandpass(x, dt, 0.02, 0.06);
    ASSERT_EQ(y.size(), x.size());
    const std::vector<std::pair<std::size_t, double>> ref = {
        {0, 0.13286338879274284},   {50, 1.0570153348841005},   {123, 0.1700913488247851},
        {200, -0.7307426552788092}, {311, 0.2088497615907591}, {399, 0.0008521519016230473}};
    for (const auto& [i, v] : ref) EXPECT_NEAR(y[i], v, 1e-9) << "sample " << i;
}

TEST(Bandpass, ShortTraceClampsPadding) {
    std::vector<double> x(30);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(0.7 * n);
    const auto y = bandpass(x, 0.05, 0.5, 2.0);
    EXPECT_NEAR(y[0], -0.04418799, 1e-7);
    EXPECT_NEAR(y[7], -0.17039921, 1e-7);
    EXPECT_NEAR(y[29], 0.0414469, 1e-7);
    const std::vector<double> tiny{1.0, 2.0, 3.0};
    EXPECT_EQ(bandpass(tiny, 0.05, 0.5, 2.0).size(), 3u);
}

TEST(Bandpass, MagnitudeResponse) {
    const auto sos = butterworth_bandpass(4, 0.02, 0.06, 10.0);
    ASSERT_EQ(sos.size(), 4u);
    EXPECT_NEAR(sos_magnitude(sos, 0.01, 10.0), 0.01748467, 1e-7);
    EXPECT_NEAR(sos_magnitude(sos, 0.04, 10.0), 0.99999238, 1e-7);
    EXPECT_NEAR(sos_magnitude(sos, 0.1, 10.0), 0.04261039, 1e-7);
    // -3 dB at both corners.
    EXPECT_NEAR(sos_magnitude(sos, 0.02, 10.0), std::sqrt(0.5), 1e-9);
    EXPECT_NEAR(sos_magnitude(sos, 0.06, 10.0), std::sqrt(0.5), 1e-9);
}

TEST(Bandpass, RejectsBadCorners) {
    const std::vector<double> x(100, 1.0);
    EXPECT_THROW(bandpass(x, 0.1, 0.06, 0.02), ConfigError);
    EXPECT_THROW(bandpass(x, 0.1, 0.0, 0.02), ConfigError);
    EXPECT_THROW(bandpass(x, 0.1, 1.0, 6.0), ConfigError);
}

TEST(Bandpass, ZeroPhaseKeepsPulseCentered) {
    const std::size_t n = 6001, mid = 3000;
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - mid) * 0.1;
        x[i] = std::exp(-t * t / 200.0);
    }
    const auto y = bandpass(x, 0.1, 0.02, 0.06);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(y[i]) > std::abs(y[peak])) peak = i;
    EXPECT_EQ(peak, mid);
    for (std::size_t k = 1; k < 600; ++k) EXPECT_NEAR(y[mid + k], y[mid - k], 1e-5 * std::abs(y[mid]));
}

TEST(Metrics, RmsAndRelative) {
    const std::vector<double> a{1.0, -1.0, 1.0, -1.0};
    const std::vector<double> b{0.0, 0.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(rms(a), 1.0);
    EXPECT_DOUBLE_EQ(rms_error(a, b), 1.0);
    EXPECT_DOUBLE_EQ(rms_error(a, a), 0.0);
    EXPECT_DOUBLE_EQ(relative_error(b, a), 1.0);
    EXPECT_THROW(relative_error(a, b), DomainError);
    EXPECT_THROW(rms_error(a, std::vector<double>{1.0}), DomainError);
}

TEST(Metrics, ResampleLinear) {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const auto y = resample_linear(x, 0.0, 1.0, 0.5, 0.5, 6);
    const std::vector<double> want{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(y[i], want[i]);
    EXPECT_DOUBLE_EQ(resample_linear(x, 0.0, 1.0, -3.0, 1.0, 1)[0], 0.0);
}
