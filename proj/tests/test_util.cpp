#include <onedatom/csv.hpp>
#include <onedatom/grid.hpp>
#include <onedatom/parallel.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <stdexcept>

using namespace onedatom;

TEST(Grid, Linear)
{
    const auto g = grid_values("-2:2:2001");
    ASSERT_EQ(g.size(), 2001u);
    EXPECT_EQ(g.front(), -2.0);
    EXPECT_EQ(g.back(), 2.0);
    EXPECT_EQ(g[1000], 0.0);
    EXPECT_NEAR(g[1] - g[0], 0.002, 1e-15);
}

TEST(Grid, Logarithmic)
{
    const auto spec = parse_grid("log:-3:4:701");
    EXPECT_TRUE(spec.logarithmic);
    const auto g = spec.values();
    ASSERT_EQ(g.size(), 701u);
    EXPECT_DOUBLE_EQ(g.front(), 1e-3);
    EXPECT_DOUBLE_EQ(g.back(), 1e4);
    EXPECT_DOUBLE_EQ(g[300], 1.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        EXPECT_GT(g[i], g[i - 1]);
}

TEST(Grid, SinglePoint)
{
    const auto g = grid_values("0.5:0.5:1");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0], 0.5);
}

TEST(Grid, Malformed)
{
    for (const char* bad : {"", "1:2", "1:2:3:4", "a:2:3", "1:2:0", "1:2:-3", "1:2:3.5",
                            "lin:1:2:3", "1:2:1", "1:inf:3", "1e400:2:3"}) {
        try {
            parse_grid(bad);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument) << bad;
        }
    }
}

TEST(Csv, NumberFormatRoundTrips)
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0}) {
        const std::string s = format_number(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
        EXPECT_EQ(s.find(','), std::string::npos);
    }
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Csv, Writer)
{
    std::ostringstream os;
    CsvWriter w(os, {"a", "b"});
    w.row({1.0, 0.25});
    w.row({-3.0, 1e-20});
    EXPECT_EQ(w.columns(), 2u);
    EXPECT_EQ(os.str(), "a,b\n1,0.25\n-3,9.9999999999999995e-21\n");
}

TEST(Parallel, PreservesOrder)
{
    for (unsigned threads : {1u, 2u, 7u, 64u}) {
        const auto out = parallel_map(1000, threads, [](std::size_t i) { return i * i; });
        ASSERT_EQ(out.size(), 1000u);
        for (std::size_t i = 0; i < out.size(); ++i)
            ASSERT_EQ(out[i], i * i);
    }
    EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(Parallel, PropagatesExceptions)
{
    EXPECT_THROW(parallel_map(100, 4,
                              [](std::size_t i) {
                                  if (i == 37)
                                      throw std::runtime_error("boom");
                                  return i;
                              }),
                 std::runtime_error);
}
