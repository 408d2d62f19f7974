#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "axlesim/csv.hpp"
#include "axlesim/errors.hpp"

using namespace axlesim;

TEST(Csv, SeventeenDigitsRoundTrip)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> exponent(-300.0, 300.0);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1.0 : 1.0);
        ASSERT_EQ(csv::parse_double(csv::format(v)), v);
    }
    EXPECT_EQ(csv::parse_double(csv::format(0.1)), 0.1);
    EXPECT_EQ(csv::format(0.1), "0.10000000000000001");
    EXPECT_EQ(csv::format(250.0), "250");
}

TEST(Csv, StrictParsing)
{
    EXPECT_THROW(csv::parse_double("1.5x"), IoError);
    EXPECT_THROW(csv::parse_double(""), IoError);
    EXPECT_DOUBLE_EQ(csv::parse_double(" 2.5 "), 2.5);
}

TEST(Csv, SplitAndTrim)
{
    const auto f = csv::split("a,b,,c");
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[2], "");
    EXPECT_EQ(csv::trim("  x \r"), "x");
}
