#include <gtest/gtest.h>

#include <random>

#include "elastic3d/field3d.hpp"
#include "elastic3d/stencil.hpp"

using namespace elastic3d;

namespace {

// Walks |i| unit steps from 0, bouncing off both edges with the edge sample repeated.
int reflection_walk(long long i, int n) {
    int pos = 0;
    int dir = i >= 0 ? 1 : -1;
    for (long long s = 0; s < (i >= 0 ? i : -i); ++s) {
        int next = pos + dir;
        if (next == n) {
            dir = -1;
            next = n - 1;
        } else if (next == -1) {
            dir = 1;
            next = 0;
        }
        pos = next;
    }
    return pos;
}

}  // namespace

TEST(MirroredIndex, MatchesReflectionWalk) {
    for (int n : {1, 5, 8, 64}) {
        for (long long i = -4LL * n; i <= 4LL * n; ++i) {
            ASSERT_EQ(mirrored_index(i, n), reflection_walk(i, n)) << "i=" << i << " n=" << n;
        }
    }
}

TEST(MirroredIndex, EdgeRepeat) {
    EXPECT_EQ(mirrored_index(-1, 5), 0);
    EXPECT_EQ(mirrored_index(-2, 5), 1);
    EXPECT_EQ(mirrored_index(5, 5), 4);
    EXPECT_EQ(mirrored_index(6, 5), 3);
    EXPECT_EQ(mirrored_index(10, 5), 0);
}

TEST(Field3D, LayoutIsXFastest) {
    Field3D<double> f(3, 4, 5);
    EXPECT_EQ(f.index(1, 0, 0), 1u);
    EXPECT_EQ(f.index(0, 1, 0), 3u);
    EXPECT_EQ(f.index(0, 0, 1), 12u);
    f(2, 3, 4) = 7.0;
    EXPECT_EQ(f.at_mirrored(3, 4, 5), 7.0);
    EXPECT_THROW(Field3D<double>(0, 1, 1), DomainError);
}

TEST(Trilinear, ExactOnAffineFunctions) {
    Field3D<double> f(6, 7, 8);
    auto g = [](double x, double y, double z) { return 1.5 + 2.0 * x - 0.75 * y + 0.25 * z; };
    for (int k = 0; k < 8; ++k)
        for (int j = 0; j < 7; ++j)
            for (int i = 0; i < 6; ++i) f(i, j, k) = g(i, j, k);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 5.0), uy(0.0, 6.0), uz(0.0, 7.0);
    for (int n = 0; n < 200; ++n) {
        const double x = ux(rng), y = uy(rng), z = uz(rng);
        EXPECT_NEAR(sample_trilinear(f, x, y, z), g(x, y, z), 1e-12);
    }
}

TEST(Trilinear, NodesAndMirroredOutside) {
    Field3D<double> f(4, 4, 4);
    for (std::size_t n = 0; n < f.size(); ++n) f.data()[n] = static_cast<double>(n);
    EXPECT_EQ(sample_trilinear(f, 2.0, 1.0, 3.0), f(2, 1, 3));
    // Half a cell past the last node both corners are the edge sample.
    EXPECT_EQ(sample_trilinear(f, 3.5, 0.0, 0.0), f(3, 0, 0));
    EXPECT_EQ(sample_trilinear(f, -0.5, 0.0, 0.0), f(0, 0, 0));
}

namespace {

std::vector<std::array<double, 4>> random_cubics(int count) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<std::array<double, 4>> out;
    for (int n = 0; n < count; ++n) out.push_back({u(rng), u(rng), u(rng), u(rng)});
    return out;
}

}  // namespace

TEST(Stencil, Coefficients) {
    EXPECT_DOUBLE_EQ(kStencilNear, 9.0 / 8.0);
    EXPECT_DOUBLE_EQ(kStencilFar, 1.0 / 24.0);
    EXPECT_DOUBLE_EQ(difference4(4.0, 3.0, 2.0, 1.0), 9.0 / 8.0 - 3.0 / 24.0);
    EXPECT_DOUBLE_EQ(difference2(4.0, 1.5), 2.5);
}

TEST(Stencil, FourthOrderExactOnCubics) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(-10.0, 10.0), uh(0.01, 2.0);
    for (const auto& c : random_cubics(100)) {
        const double h = uh(rng);
        const double x = ux(rng);
        auto f = [&](double s) {
            const double t = s * h;
            return c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t;
        };
        const double t = x * h;
        const double exact = c[1] + 2 * c[2] * t + 3 * c[3] * t * t;
        const double got = derivative4(f, x, h);
        EXPECT_LE(std::abs(got - exact), 1e-12 * std::max(1.0, std::abs(exact))) << got << " vs " << exact;
    }
}

TEST(Stencil, FourthOrderExactPerDegree) {
    for (int deg = 0; deg <= 3; ++deg) {
        auto f = [deg](double s) { return std::pow(s, deg); };
        for (double x : {-2.0, 0.0, 0.3, 1.0, 4.5}) {
            const double exact = deg == 0 ? 0.0 : deg * std::pow(x, deg - 1);
            EXPECT_NEAR(derivative4(f, x, 1.0), exact, 1e-12 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST(Stencil, SecondOrderExactOnLinearOnly) {
    auto lin = [](double s) { return 3.0 - 2.5 * s; };
    EXPECT_NEAR(derivative2(lin, 0.7, 1.0), -2.5, 1e-14);
    auto cube = [](double s) { return s * s * s; };
    EXPECT_DOUBLE_EQ(derivative2(cube, 1.0, 1.0), 3.25);
    EXPECT_DOUBLE_EQ(derivative4(cube, 1.0, 1.0), 3.0);
}
