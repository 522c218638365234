#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "sis/generators.hpp"
#include "sis/rng.hpp"
#include "sis/si_space.hpp"
#include "sis/symbol.hpp"

using namespace sis;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

GridFunction sampled_profile(const GeneratorSpec& spec, double h) {
    const double rad = spec.support_radius();
    const long steps = std::lround(1.0 / h);
    const long lo = -(long)std::ceil(rad) * steps;
    const long hi = (long)std::ceil(rad) * steps - 1;
    GridFunction f = GridFunction::zeros(1, h, {lo, 0}, {hi, 0});
    for (long c = lo; c <= hi; ++c) f.at(c) = spec.profile((double(c) + 0.5) * h);
    return f;
}

}  // namespace

TEST_CASE("hat autocorrelation matches hand integrals") {
    // <N2, N2> = 2/3 and <N2, T_1 N2> = 1/6 for the order-2 B-spline.
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    CHECK(t.r() == 1);
    CHECK(t.at(0, 0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
    CHECK(t.at(0, 0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
    CHECK(t.at(0, 0, -1) == doctest::Approx(t.at(0, 0, 1)).epsilon(1e-12));
    CHECK(t.at(0, 0, 2) == doctest::Approx(0.0));
}

TEST_CASE("hat symbol equals (2 + cos)/3 on a dense grid") {
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    for (int i = 0; i < 97; ++i) {
        const double xi = double(i) / 97.0;
        const double want = (2.0 + std::cos(2.0 * kPi * xi)) / 3.0;
        const std::complex<double> got = t.symbol1d(xi)(0, 0);
        CHECK(got.real() == doctest::Approx(want).epsilon(1e-4));
        CHECK(std::abs(got.imag()) < 1e-12);
    }
}

TEST_CASE("symbol extrema agree with the closed form") {
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    SymbolExtrema e = symbol_extrema(t, 1, 4096);
    CHECK(e.min_eig == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    CHECK(e.max_eig == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("discrete symbols are positive semidefinite") {
    // The discrete autocorrelation of any sampled profile has a nonnegative
    // symbol; check a pseudorandom profile and a two-profile system.
    CounterRng rng(derive_stream(99, 0));
    GridFunction f = GridFunction::zeros(1, 1.0 / 32.0, {-40, 0}, {40, 0});
    for (long c = -40; c <= 40; ++c) f.at(c) = rng.gaussian(std::uint64_t(c + 40));
    SymbolExtrema e = symbol_extrema(cross_correlations({f}), 1, 2048);
    CHECK(e.min_eig >= -1e-10);

    GeneratorSpec box = GeneratorSpec::parse("box", 1);
    GeneratorSpec gauss = GeneratorSpec::parse("gauss:0.5:4", 1);
    const double h = 1.0 / 128.0;
    SymbolExtrema e2 = symbol_extrema(
        cross_correlations({sampled_profile(box, h), sampled_profile(gauss, h)}), 1, 2048);
    CHECK(e2.min_eig >= -1e-10);
}

TEST_CASE("cross correlation table is Hermitian in (i, j, m)") {
    GeneratorSpec box = GeneratorSpec::parse("box", 1);
    GeneratorSpec gauss = GeneratorSpec::parse("gauss:0.5:4", 1);
    const double h = 1.0 / 128.0;
    AutocorrTable t =
        cross_correlations({sampled_profile(box, h), sampled_profile(gauss, h)});
    for (long m = -t.m_max(); m <= t.m_max(); ++m) {
        CHECK(t.at(0, 1, m) == doctest::Approx(t.at(1, 0, -m)).epsilon(1e-12));
    }
}

TEST_CASE("two dimensional symbol factorizes across axes") {
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    const double xi0 = 0.23, xi1 = 0.71;
    const std::complex<double> a = t.symbol1d(xi0)(0, 0);
    const std::complex<double> b = t.symbol1d(xi1)(0, 0);
    const std::complex<double> g = t.symbol({xi0, xi1}, 2)(0, 0);
    CHECK(std::abs(g - a * b) < 1e-12);
}

TEST_CASE("inverse filter of the hat symbol has the known decay") {
    // 1/sigma with sigma = (2 + cos)/3 has taps sqrt(3) * (-(2 - sqrt 3))^|m|.
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    auto filters = spectral_filters(t, 1, SpectralFunc::inverse, 4096, 1e-13);
    REQUIRE(filters.size() == 1);
    REQUIRE(filters[0].size() == 1);
    const LatticeFilter& inv = filters[0][0];
    const double rho = 2.0 - std::sqrt(3.0);
    CHECK(inv.at(0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
    CHECK(inv.at(1) == doctest::Approx(-std::sqrt(3.0) * rho).epsilon(1e-3));
    CHECK(inv.at(-1) == doctest::Approx(inv.at(1)).epsilon(1e-10));
    for (long m = 1; m <= 4; ++m) {
        CHECK(inv.at(m + 1) / inv.at(m) == doctest::Approx(-rho).epsilon(1e-2));
    }
}

TEST_CASE("inverse square root composed with itself gives the inverse") {
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    auto inv = spectral_filters(t, 1, SpectralFunc::inverse, 4096, 1e-13)[0][0];
    auto half = spectral_filters(t, 1, SpectralFunc::inv_sqrt, 4096, 1e-13)[0][0];
    LatticeFilter square = convolve1d(half, half);
    double worst = 0.0;
    for (long m = inv.lo[0]; m <= inv.hi[0]; ++m)
        worst = std::max(worst, std::abs(square.at(m) - inv.at(m)));
    CHECK(worst < 1e-8);
}

TEST_CASE("sqrt filter composed with itself gives the symbol back") {
    GeneratorSpec hat = GeneratorSpec::parse("bspline:2", 1);
    AutocorrTable t = cross_correlations({sampled_profile(hat, 1.0 / 128.0)});
    auto root = spectral_filters(t, 1, SpectralFunc::sqrt, 4096, 1e-13)[0][0];
    LatticeFilter square = convolve1d(root, root);
    CHECK(square.at(0) == doctest::Approx(t.at(0, 0, 0)).epsilon(1e-8));
    CHECK(square.at(1) == doctest::Approx(t.at(0, 0, 1)).epsilon(1e-7));
}
