#include <doctest.h>

#include <cmath>
#include <random>

#include "lognet/quantization.hpp"
#include "oracles.hpp"

using namespace lognet;

TEST_CASE("source_values: identity and products")
{
    const auto set = oracle::make_set({{3, 4, 2}, {2, 2, 2}}, {0, 1});
    CHECK(source_values(set, {0, 1})[0] == 12.0);
    CHECK(source_values(set, {0})[0] == 3.0);
    CHECK(source_values(set, {0, 1, 2})[1] == 8.0);
    CHECK_THROWS(source_values(set, {3}));
}

TEST_CASE("quantize: perfectly separated values")
{
    const std::vector<double> values{0, 0, 1, 1};
    const std::vector<std::uint8_t> labels{0, 0, 1, 1};
    const auto f = quantize(values, labels);
    CHECK(f.threshold == 0.5);
    CHECK(f.polarity == Polarity::at_least);
    CHECK(f.errors == 0);
    CHECK_FALSE(f.constant);
}

TEST_CASE("quantize: alternating labels leave two errors")
{
    const std::vector<double> values{1, 2, 3, 4, 5, 6};
    const std::vector<std::uint8_t> labels{0, 1, 0, 1, 0, 1};
    CHECK(oracle::min_threshold_errors(values, labels) == 2);
    CHECK(quantize(values, labels).errors == 2);
}

TEST_CASE("quantize: constant feature floor")
{
    const std::vector<double> values(6, 4.2);
    const std::vector<std::uint8_t> labels{0, 1, 0, 1, 0, 1};
    const auto f = quantize(values, labels);
    CHECK(f.errors == 3);
    CHECK(f.constant);
    CHECK(f.threshold == 4.2);
    CHECK(hamming(f.column, labels) == 3);

    const std::vector<std::uint8_t> mostly_zero{0, 0, 0, 0, 1, 1};
    const auto g = quantize(values, mostly_zero);
    CHECK(g.errors == 2);
    CHECK(hamming(g.column, mostly_zero) == 2);
}

TEST_CASE("quantize tie-breaking: gap, then threshold, then polarity")
{
    {
        const auto f = quantize(std::vector<double>{0, 1, 3}, std::vector<std::uint8_t>{0, 1, 0});
        CHECK(f.errors == 1);
        CHECK(f.threshold == 2.0);
        CHECK(f.polarity == Polarity::below);
    }
    {
        const auto f = quantize(std::vector<double>{0, 1, 2}, std::vector<std::uint8_t>{0, 1, 0});
        CHECK(f.errors == 1);
        CHECK(f.threshold == 0.5);
        CHECK(f.polarity == Polarity::at_least);
    }
    {
        const auto f = quantize(std::vector<double>{0, 1}, std::vector<std::uint8_t>{1, 1});
        CHECK(f.errors == 1);
        CHECK(f.polarity == Polarity::at_least);
    }
}

TEST_CASE("quantize handles adjacent doubles")
{
    const double a = 1.0;
    const double b = std::nextafter(1.0, 2.0);
    const auto f = quantize(std::vector<double>{a, b}, std::vector<std::uint8_t>{0, 1});
    CHECK(f.errors == 0);
    CHECK(f.threshold > a);
    CHECK(f.threshold <= b);
}

TEST_CASE("quantize is optimal, consistent and monotone-invariant on random data")
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> n_dist(2, 30);
    std::uniform_int_distribution<int> level(0, 8);
    std::bernoulli_distribution bit(0.5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(n_dist(rng));
        std::vector<double> values(n);
        std::vector<std::uint8_t> labels(n);
        for (std::size_t t = 0; t < n; ++t) {
            values[t] = level(rng) * 0.75 - 2.0; // repeats on purpose
            labels[t] = bit(rng);
        }
        const auto f = quantize(values, labels);
        CHECK(f.errors == oracle::min_threshold_errors(values, labels));
        CHECK(f.errors == hamming(f.column, labels));
        CHECK(f.column == apply_threshold(values, f.threshold, f.polarity));
        CHECK(f.errors <= n / 2);
        CHECK(f.errors <= n - f.errors);

        std::vector<double> transformed(n);
        for (std::size_t t = 0; t < n; ++t) {
            transformed[t] = std::exp(values[t]) * 3.0 + 1.0;
        }
        CHECK(quantize(transformed, labels).errors == f.errors);
    }
}

TEST_CASE("quantize_all and describe")
{
    const auto set = oracle::demo_set();
    const auto base = quantize_all(set);
    REQUIRE(base.size() == 2);
    CHECK(base[0].source == Source{0});
    CHECK(base[1].source == Source{1});
    CHECK(base[0].errors == 3);
    CHECK(base[1].errors == 3);
    QuantizedFeature product;
    product.source = {0, 1};
    CHECK(product.describe({"height", "weight"}) == "height*weight");
    CHECK(product.is_product());
}
