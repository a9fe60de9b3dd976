#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stpp/error.hpp"
#include "stpp/io.hpp"
#include "temp_dir.hpp"

using namespace stpp;

TEST(PatternCsv, ReadUnmarked) {
    std::istringstream is("x,y,t\n0.5,0.25,1\n+1e-3,2,3\n");
    const auto table = io::read_pattern_csv(is);
    ASSERT_EQ(table.points.size(), 2u);
    EXPECT_FALSE(table.marks);
    EXPECT_EQ(table.points[1], SpaceTimePoint(0.001, 2, 3));
}

TEST(PatternCsv, ReadMarkedWithBomAndCrlf) {
    std::istringstream is("\xEF\xBB\xBFx,y,t,mark\r\n0.5,0.25,1,oak\r\n0.1,0.2,0.3,pine\r\n");
    const auto table = io::read_pattern_csv(is);
    ASSERT_TRUE(table.marks);
    EXPECT_EQ((*table.marks)[1], "pine");
}

TEST(PatternCsv, Errors) {
    std::istringstream bad_header("a,b,c\n");
    EXPECT_THROW(io::read_pattern_csv(bad_header), ParseError);
    std::istringstream bad_value("x,y,t\n1,2,zz\n");
    try {
        io::read_pattern_csv(bad_value, "p.csv");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("p.csv:2"), std::string::npos) << e.what();
    }
    std::istringstream short_row("x,y,t\n1,2\n");
    EXPECT_THROW(io::read_pattern_csv(short_row), ParseError);
    std::istringstream comma_decimal("x,y,t\n\"1,5\",2,3\n");
    EXPECT_THROW(io::read_pattern_csv(comma_decimal), ParseError);
    EXPECT_THROW(io::read_pattern_csv(std::filesystem::path("/nonexistent/p.csv")), IoError);
}

TEST(PatternCsv, RoundTripIsExact) {
    oracle::Sampler s(3);
    const auto w = s.window();
    const PointPattern p(w, s.points(w, 100));
    std::ostringstream os;
    io::write_pattern_csv(os, p);
    std::istringstream is(os.str());
    const auto back = io::read_pattern_csv(is);
    ASSERT_EQ(back.points.size(), 100u);
    for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(back.points[i], p[i]);
}

TEST(PatternCsv, HeaderOnlyForEmpty) {
    std::ostringstream os;
    io::write_pattern_csv(os, PointPattern(Window::unit()));
    EXPECT_EQ(os.str(), "x,y,t\n");
}

TEST(InferWindow, BoundingBox) {
    const auto w = io::infer_window({{0, 1, 2}, {3, -1, 5}, {1, 0, 2.5}});
    EXPECT_EQ(w, Window({0, 3}, {-1, 1}, {2, 5}));
    EXPECT_THROW(io::infer_window({{0, 1, 2}}), InvalidArgument);
    EXPECT_THROW(io::infer_window({}), InvalidArgument);
}

TEST(CovariateCsv, Read) {
    std::istringstream is("x,y,t,value\n0,0,0,1.5\n1,1,1,-2\n");
    const auto samples = io::read_covariate_samples_csv(is);
    ASSERT_EQ(samples.size(), 2u);
    EXPECT_EQ(samples[1].value, -2.0);
    std::istringstream wrong("x,y,t\n0,0,0\n");
    EXPECT_THROW(io::read_covariate_samples_csv(wrong), ParseError);
}

TEST(Grid, CsvLayout) {
    const CovariateGrid grid(Window::unit(), {2, 1, 1}, {1.0, 0.1});
    std::ostringstream os;
    io::write_grid_csv(os, grid);
    EXPECT_EQ(os.str(), "cell_id,x_center,y_center,t_center,value\n0,0.25,0.5,0.5,1\n1,0.75,0.5,0.5,0.10000000000000001\n");
}

TEST(Grid, BinaryRoundTripIsBitExact) {
    const auto dir = testing_support::scratch_dir("grid_io");
    oracle::Sampler s(7);
    const auto w = s.window();
    std::vector<double> values(4 * 5 * 6);
    for (auto& v : values) v = s.uniform(-1e3, 1e3);
    values[3] = 1.0 / 3.0;
    values[4] = -0.0;
    const CovariateGrid grid(w, {4, 5, 6}, values);
    const auto header = io::save_grid(grid, dir / "g", "elev");
    EXPECT_EQ(header, dir / "g.json");
    EXPECT_EQ(std::filesystem::file_size(dir / "g.bin"), values.size() * 8);
    const auto back = io::load_grid(header);
    EXPECT_EQ(back, grid);
    EXPECT_TRUE(std::signbit(back.values()[4]));
}

TEST(Grid, TruncatedBinaryRejected) {
    const auto dir = testing_support::scratch_dir("grid_io_bad");
    const CovariateGrid grid(Window::unit(), {2, 2, 2}, std::vector<double>(8, 1.0));
    const auto header = io::save_grid(grid, dir / "g", "z");
    std::filesystem::resize_file(dir / "g.bin", 40);
    EXPECT_THROW(io::load_grid(header), ParseError);
}
