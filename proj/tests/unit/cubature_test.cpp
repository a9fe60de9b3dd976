#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stpp/cubature.hpp"
#include "stpp/error.hpp"

using namespace stpp;

namespace {

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TEST(GridResolution, ParseAndValidate) {
    EXPECT_EQ(GridResolution::parse("4,5,6"), GridResolution(4, 5, 6));
    EXPECT_EQ(GridResolution(), GridResolution(10, 10, 10));
    EXPECT_THROW(GridResolution(0, 1, 1), InvalidArgument);
    EXPECT_THROW(GridResolution::parse("4,5"), ParseError);
    EXPECT_THROW(GridResolution::parse("4,x,5"), ParseError);
}

TEST(DummyGrid, SingleCellCenter) {
    const auto g = generate_dummy_grid(Window::unit(), {1, 1, 1});
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0], SpaceTimePoint(0.5, 0.5, 0.5));
}

TEST(DummyGrid, HalvesAlongX) {
    const auto g = generate_dummy_grid(Window::unit(), {2, 1, 1});
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], SpaceTimePoint(0.25, 0.5, 0.5));
    EXPECT_EQ(g[1], SpaceTimePoint(0.75, 0.5, 0.5));
}

TEST(DummyGrid, OddMultiplesOfHalf) {
    const auto g = generate_dummy_grid(Window({0, 2}, {0, 2}, {0, 2}), {2, 2, 2});
    ASSERT_EQ(g.size(), 8u);
    for (const auto& p : g)
        for (int a = 0; a < 3; ++a) EXPECT_TRUE(p[a] == 0.5 || p[a] == 1.5);
    // x fastest, then y, then t
    EXPECT_EQ(g[1], SpaceTimePoint(1.5, 0.5, 0.5));
    EXPECT_EQ(g[2], SpaceTimePoint(0.5, 1.5, 0.5));
    EXPECT_EQ(g[4], SpaceTimePoint(0.5, 0.5, 1.5));
}

TEST(CubeIndex, Conventions) {
    const auto w = Window::unit();
    const GridResolution r(2, 2, 2);
    EXPECT_EQ(cube_index(w, r, {0.1, 0.1, 0.1}), 0u);
    EXPECT_EQ(cube_index(w, r, {1.0, 1.0, 1.0}), 7u);
    EXPECT_EQ(cube_index(w, r, {0.5, 0.1, 0.1}), 1u);
}

TEST(CubeIndex, OutsidePointNamesCoordinate) {
    try {
        cube_index(Window::unit(), {2, 2, 2}, {0.5, 0.5, 1.5});
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("t"), std::string::npos) << e.what();
    }
}

TEST(CubeIndex, MatchesIntervalSearchOracle) {
    oracle::Sampler s(3);
    for (int rep = 0; rep < 200; ++rep) {
        const auto w = s.window();
        const GridResolution r(s.integer(1, 9), s.integer(1, 9), s.integer(1, 9));
        for (int i = 0; i < 50; ++i) {
            const auto p = s.point(w);
            EXPECT_EQ(cube_index(w, r, p), oracle::cell_of(w, r.nx, r.ny, r.nt, p));
        }
        // cell centers map to their own cell
        for (std::size_t c = 0; c < r.cell_count(); ++c) EXPECT_EQ(cube_index(w, r, cell_center(w, r, c)), c);
    }
}

TEST(BuildScheme, EmptyPatternUnitBox) {
    const auto s = build_scheme(PointPattern(Window::unit()), {2, 2, 2});
    ASSERT_EQ(s.size(), 8u);
    EXPECT_EQ(s.n_data(), 0u);
    for (double a : s.weights()) EXPECT_EQ(a, 0.125);
}

TEST(BuildScheme, OneDataPointOneCube) {
    const auto s = build_scheme(PointPattern(Window::unit(), {{0.1, 0.1, 0.1}}), {1, 1, 1});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.is_data()[0], 1);
    EXPECT_EQ(s.is_data()[1], 0);
    EXPECT_EQ(s.weights()[0], 0.5);
    EXPECT_EQ(s.weights()[1], 0.5);
    EXPECT_EQ(sum(s.weights()), 1.0);
    EXPECT_FALSE(s.warnings().empty());  // m = 1 <= n = 1
}

TEST(BuildScheme, FivePointsInOneCube) {
    std::vector<SpaceTimePoint> pts{{0.1, 0.1, 0.1}, {0.2, 0.3, 0.4}, {0.4, 0.4, 0.1}, {0.05, 0.45, 0.3}, {0.3, 0.2, 0.2}};
    const auto s = build_scheme(PointPattern(Window::unit(), pts), {2, 2, 2});
    ASSERT_EQ(s.size(), 13u);
    // Hand enumeration: all five data points lie in cube 0 together with its
    // dummy (0.25,0.25,0.25); the other seven cubes hold one dummy each.
    for (std::size_t k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(s.weights()[k], 0.125 / 6);
    EXPECT_DOUBLE_EQ(s.weights()[5], 0.125 / 6);
    for (std::size_t k = 6; k < 13; ++k) EXPECT_EQ(s.weights()[k], 0.125);
    EXPECT_NEAR(sum(s.weights()), 1.0, 1e-15);
    EXPECT_TRUE(s.warnings().empty());
}

TEST(BuildScheme, WeightsMatchMembershipOracle) {
    oracle::Sampler s(5);
    for (int rep = 0; rep < 50; ++rep) {
        const auto w = s.window();
        const GridResolution r(s.integer(1, 6), s.integer(1, 6), s.integer(1, 6));
        const auto pattern = PointPattern(w, s.points(w, s.integer(0, 60)));
        const auto scheme = build_scheme(pattern, r);
        std::map<std::size_t, std::size_t> counts;
        for (const auto& p : scheme.points()) ++counts[oracle::cell_of(w, r.nx, r.ny, r.nt, p)];
        std::size_t total = 0;
        for (const auto& [cell, c] : counts) total += c;
        EXPECT_EQ(total, pattern.size() + r.cell_count());
        EXPECT_EQ(counts.size(), r.cell_count());
        const double nu = w.volume() / static_cast<double>(r.cell_count());
        for (std::size_t k = 0; k < scheme.size(); ++k) {
            const auto c = counts[oracle::cell_of(w, r.nx, r.ny, r.nt, scheme.points()[k])];
            EXPECT_DOUBLE_EQ(scheme.weights()[k], nu / static_cast<double>(c));
        }
    }
}

TEST(BuildScheme, WeightConservationProperty) {
    oracle::Sampler s(17);
    for (int rep = 0; rep < 100; ++rep) {
        const auto w = s.window();
        const GridResolution r(s.integer(1, 12), s.integer(1, 12), s.integer(1, 12));
        const auto scheme = build_scheme(PointPattern(w, s.points(w, s.integer(0, 300))), r);
        EXPECT_LE(std::abs(sum(scheme.weights()) - w.volume()), 1e-10 * w.volume());
        std::size_t data = 0;
        for (std::size_t k = 0; k < scheme.size(); ++k) {
            EXPECT_GT(scheme.weights()[k], 0.0);
            data += scheme.is_data()[k];
        }
        EXPECT_EQ(data, scheme.n_data());
        EXPECT_EQ(scheme.n_dummy(), r.cell_count());
    }
}

TEST(BuildScheme, Deterministic) {
    oracle::Sampler s(23);
    const auto w = s.window();
    const auto pattern = PointPattern(w, s.points(w, 40));
    std::ostringstream a, b;
    write_scheme_csv(a, build_scheme(pattern, {5, 4, 3}));
    write_scheme_csv(b, build_scheme(pattern, {5, 4, 3}));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().substr(0, 21), "x,y,t,is_data,weight\n");
}

TEST(Responses, Definition) {
    std::vector<SpaceTimePoint> pts{{0.1, 0.1, 0.1}, {0.2, 0.3, 0.4}, {0.4, 0.4, 0.1}, {0.05, 0.45, 0.3}, {0.3, 0.2, 0.2}};
    const auto s = build_scheme(PointPattern(Window::unit(), pts), {2, 2, 2});
    const auto y = responses(s);
    EXPECT_DOUBLE_EQ(y[0], 48.0);
    for (std::size_t k = 5; k < y.size(); ++k) EXPECT_EQ(y[k], 0.0);
    const auto single = responses(build_scheme(PointPattern(Window::unit(), {{0.1, 0.1, 0.1}}), {1, 1, 1}));
    EXPECT_EQ(single[0], 2.0);
}

TEST(Responses, ProductEqualsIndicator) {
    oracle::Sampler s(29);
    for (int rep = 0; rep < 30; ++rep) {
        const auto w = s.window();
        const auto scheme = build_scheme(PointPattern(w, s.points(w, s.integer(0, 100))), {4, 4, 4});
        const auto y = responses(scheme);
        for (std::size_t k = 0; k < y.size(); ++k) EXPECT_NEAR(y[k] * scheme.weights()[k], scheme.is_data()[k], 1e-12);
    }
}

TEST(ApproximateIntegral, ConstantIsExact) {
    const auto w = Window({0, 2}, {0, 3}, {0, 5});
    const auto scheme = build_scheme(PointPattern(w, {{1, 1, 1}, {0.1, 2.9, 4.9}}), {3, 3, 3});
    EXPECT_NEAR(approximate_integral(scheme, [](const SpaceTimePoint&) { return 2.5; }), 75.0, 1e-12);
}

TEST(ApproximateIntegral, ExpTwoPlusX) {
    const double exact = std::exp(2.0) * (std::exp(1.0) - 1.0);
    EXPECT_NEAR(exact, 12.6965, 1e-4);
    const auto f = [](const SpaceTimePoint& p) { return std::exp(2.0 + p.x); };
    const double v20 = approximate_integral(build_dummy_scheme(Window::unit(), {20, 20, 20}), f);
    const double v40 = approximate_integral(build_dummy_scheme(Window::unit(), {40, 40, 40}), f);
    EXPECT_LT(std::abs(v20 - exact) / exact, 0.005);
    EXPECT_LT(std::abs(v40 - exact), std::abs(v20 - exact));
}

TEST(ApproximateIntegral, IndicatorOfOneCube) {
    const auto w = Window({0, 2}, {0, 2}, {0, 2});
    const GridResolution r(2, 2, 2);
    const auto scheme = build_dummy_scheme(w, r);
    const auto f = [&](const SpaceTimePoint& p) { return cube_index(w, r, p) == 5 ? 1.0 : 0.0; };
    EXPECT_EQ(approximate_integral(scheme, f), 1.0);
}

TEST(ApproximateIntegral, NonFiniteValueNamesPoint) {
    const auto scheme = build_dummy_scheme(Window::unit(), {1, 1, 1});
    try {
        approximate_integral(scheme, [](const SpaceTimePoint&) { return std::nan(""); });
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
    }
}

TEST(ApproximateIntegral, RiemannConsistencyUnderRefinement) {
    const double a = 0.3, b = 1.1, c = -0.7, d = 0.9;
    const auto f = [&](const SpaceTimePoint& p) { return std::exp(a + b * p.x + c * p.y + d * p.t); };
    const double exact = oracle::exp_linear_integral(Window::unit(), a, b, c, d);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n : {5, 10, 20, 40}) {
        const double err = std::abs(approximate_integral(build_dummy_scheme(Window::unit(), {n, n, n}), f) - exact);
        EXPECT_LE(err, previous + 1e-12) << "n = " << n;
        previous = err;
    }
}

TEST(ReplicatedScheme, SingleLevelCollapses) {
    oracle::Sampler s(31);
    const auto w = s.window();
    const auto pts = s.points(w, 25);
    const auto marked = MarkedPointPattern::from_labels(w, pts, std::vector<std::string>(25, "A"));
    const auto rep = build_replicated_scheme(marked, {3, 3, 3});
    const auto plain = build_scheme(PointPattern(w, pts), {3, 3, 3});
    EXPECT_EQ(rep.base(), plain.points());
    EXPECT_EQ(rep.weights_by_level()[0], plain.weights());
    EXPECT_EQ(rep.is_data_by_level()[0], plain.is_data());
}

TEST(ReplicatedScheme, IndicatorsFollowLevels) {
    const auto marked = MarkedPointPattern::from_labels(Window::unit(), {{0.3, 0.3, 0.3}, {0.6, 0.6, 0.6}}, {"A", "B"});
    const auto rep = build_replicated_scheme(marked, {2, 2, 2});
    EXPECT_EQ(rep.is_data_by_level()[0][0], 1);
    EXPECT_EQ(rep.is_data_by_level()[1][0], 0);
    EXPECT_EQ(rep.is_data_by_level()[0][1], 0);
    EXPECT_EQ(rep.is_data_by_level()[1][1], 1);
    for (std::size_t k = 2; k < rep.locations(); ++k) {
        EXPECT_EQ(rep.is_data_by_level()[0][k], 0);
        EXPECT_EQ(rep.is_data_by_level()[1][k], 0);
    }
}

TEST(ReplicatedScheme, ThreePlusTwoPointsHandEnumerated) {
    // A-points in cubes 0, 0 and 7; B-points in cubes 0 and 3.
    std::vector<SpaceTimePoint> pts{{0.1, 0.1, 0.1}, {0.2, 0.2, 0.2}, {0.9, 0.9, 0.9}, {0.3, 0.1, 0.2}, {0.9, 0.9, 0.2}};
    const auto marked = MarkedPointPattern::from_labels(Window::unit(), pts, {"A", "A", "A", "B", "B"});
    const auto rep = build_replicated_scheme(marked, {2, 2, 2});
    ASSERT_EQ(rep.locations(), 13u);
    const std::vector<double> expected{0.125 / 4, 0.125 / 4, 0.125 / 2, 0.125 / 4, 0.125 / 2,
                                       0.125 / 4, 0.125,     0.125,     0.125 / 2, 0.125,
                                       0.125,     0.125,     0.125 / 2};
    for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t k = 0; k < 13; ++k) EXPECT_DOUBLE_EQ(rep.weights_by_level()[m][k], expected[k]) << k;
        EXPECT_NEAR(sum(rep.weights_by_level()[m]), 1.0, 1e-15);
    }
    const auto yA = rep.responses(0);
    EXPECT_DOUBLE_EQ(yA[0], 32.0);
    EXPECT_EQ(yA[3], 0.0);
}

TEST(ReplicatedScheme, ExactlyOneLevelPerDataLocation) {
    oracle::Sampler s(37);
    for (int rep = 0; rep < 30; ++rep) {
        const auto w = s.window();
        const auto n = s.integer(0, 50);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + s.integer(0, 2))));
        const auto marked = MarkedPointPattern::from_labels(w, s.points(w, n), labels, {"a", "b", "c"});
        const auto scheme = build_replicated_scheme(marked, {3, 4, 5});
        for (std::size_t k = 0; k < scheme.locations(); ++k) {
            int ones = 0;
            for (std::size_t m = 0; m < 3; ++m) ones += scheme.is_data_by_level()[m][k];
            EXPECT_EQ(ones, k < n ? 1 : 0);
        }
        for (std::size_t m = 0; m < 3; ++m)
            EXPECT_LE(std::abs(sum(scheme.weights_by_level()[m]) - w.volume()), 1e-10 * w.volume());
    }
}

TEST(ReplicatedScheme, CsvHasMarkColumn) {
    const auto marked = MarkedPointPattern::from_labels(Window::unit(), {{0.3, 0.3, 0.3}}, {"A"}, {"A", "B"});
    std::ostringstream os;
    write_scheme_csv(os, build_replicated_scheme(marked, {1, 1, 1}));
    EXPECT_EQ(os.str(), "x,y,t,is_data,weight,mark\n"
                        "0.29999999999999999,0.29999999999999999,0.29999999999999999,1,0.5,A\n"
                        "0.5,0.5,0.5,0,0.5,A\n"
                        "0.29999999999999999,0.29999999999999999,0.29999999999999999,0,0.5,B\n"
                        "0.5,0.5,0.5,0,0.5,B\n");
}
