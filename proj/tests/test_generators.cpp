#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sis/errors.hpp"
#include "sis/generators.hpp"
#include "sis/rng.hpp"

using namespace sis;

namespace {

// Independent cardinal B-spline oracle: N_1 = indicator of [0,1), and
// N_p(t) = (t N_{p-1}(t) + (p - t) N_{p-1}(t-1)) / (p - 1).
double bspline_recursion(int p, double t) {
    if (p == 1) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    return (t * bspline_recursion(p - 1, t) +
            (double(p) - t) * bspline_recursion(p - 1, t - 1.0)) /
           double(p - 1);
}

}  // namespace

TEST_CASE("box values and half-open support") {
    GeneratorSpec g = GeneratorSpec::parse("box", 1);
    CHECK(g({0.5, 0.0}) == 1.0);
    CHECK(g({0.0, 0.0}) == 1.0);
    CHECK(g({1.0, 0.0}) == 0.0);
    CHECK(g({-0.1, 0.0}) == 0.0);
    CHECK(g.support_radius() == 1.0);
}

TEST_CASE("bspline matches the recursion oracle") {
    for (int p : {2, 3, 4}) {
        GeneratorSpec g = GeneratorSpec::parse("bspline:" + std::to_string(p), 1);
        for (int i = 0; i <= 400; ++i) {
            const double t = -1.0 + (double(p) + 2.0) * i / 400.0;
            CHECK(g({t, 0.0}) == doctest::Approx(bspline_recursion(p, t)).epsilon(1e-12));
        }
    }
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    CHECK(hat({1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("bspline partition of unity") {
    GeneratorSpec g = GeneratorSpec::parse("bspline:3", 1);
    for (double x : {0.31, 1.57, 2.9}) {
        double sum = 0.0;
        for (int k = -5; k <= 5; ++k) sum += g({x - k, 0.0});
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("truncated sinc values") {
    GeneratorSpec g = GeneratorSpec::parse("sinc:8", 1);
    CHECK(g({0.0, 0.0}) == 1.0);
    CHECK(g({8.5, 0.0}) == 0.0);
    CHECK(g({0.5, 0.0}) == doctest::Approx(2.0 / 3.141592653589793).epsilon(1e-14));
    CHECK(g({1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g.support_radius() == 8.0);
}

TEST_CASE("truncated gaussian values") {
    GeneratorSpec g = GeneratorSpec::parse("gauss:1.0:4", 1);
    CHECK(g({0.0, 0.0}) == 1.0);
    CHECK(g({1.0, 0.0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(g({4.5, 0.0}) == 0.0);
    GeneratorSpec narrow = GeneratorSpec::parse("gauss:0.5:2", 1);
    CHECK(narrow({1.0, 0.0}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("tensor product in two dimensions") {
    GeneratorSpec g = GeneratorSpec::parse("bspline:2", 2);
    CHECK(g({1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(g({0.5, 1.5}) == doctest::Approx(0.5 * 0.5));
    CHECK(g({0.5, 2.5}) == 0.0);
}

TEST_CASE("parse grammar and failures") {
    CHECK(GeneratorSpec::parse("box", 1).to_string() == "box");
    CHECK(GeneratorSpec::parse("bspline:3", 1).to_string() == "bspline:3");
    CHECK(GeneratorSpec::parse("sinc:64", 1).to_string() == "sinc:64");
    CHECK_THROWS_AS(GeneratorSpec::parse("bspline:0", 1), UsageError);
    CHECK_THROWS_AS(GeneratorSpec::parse("bspline", 1), UsageError);
    CHECK_THROWS_AS(GeneratorSpec::parse("frob", 1), UsageError);
    CHECK_THROWS_AS(GeneratorSpec::parse("gauss:-1.0:4", 1), UsageError);
    CHECK_THROWS_AS(GeneratorSpec::parse("box", 3), UsageError);
    CHECK_THROWS_AS(GeneratorSpec::parse("bspline:two", 1), UsageError);
}

TEST_CASE("random exterior points evaluate to exactly zero") {
    const std::vector<std::string> names = {"box", "bspline:3", "sinc:8", "gauss:1.0:4"};
    CounterRng rng(derive_stream(2024, 0));
    std::uint64_t c = 0;
    for (const auto& name : names) {
        GeneratorSpec g = GeneratorSpec::parse(name, 1);
        const double rad = g.support_radius();
        for (int i = 0; i < 1000; ++i) {
            const double offset = rng.uniform(c++, 1e-9, 50.0);
            const double side = rng.uniform01(c++) < 0.5 ? -1.0 : 1.0;
            // Box support is [0,1), so exterior means beyond the radius on
            // the left but beyond the support end on the right.
            const double x = side > 0 ? rad + offset : -rad - offset;
            CHECK(g({x, 0.0}) == 0.0);
        }
    }
}
