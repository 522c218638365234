#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sis/filters.hpp"
#include "sis/grid.hpp"

using namespace sis;

namespace {

// Midpoint samples of the indicator of [0,1) on a window of cells.
GridFunction sampled_box(double h, long lo_cell, long hi_cell) {
    GridFunction f = GridFunction::zeros(1, h, {lo_cell, 0}, {hi_cell, 0});
    const long steps = std::lround(1.0 / h);
    for (long c = lo_cell; c <= hi_cell; ++c)
        if (c >= 0 && c < steps) f.at(c) = 1.0;
    return f;
}

}  // namespace

TEST_CASE("grid spec dyadic steps") {
    GridSpec g = GridSpec::dyadic(7);
    CHECK(g.h == doctest::Approx(1.0 / 128.0));
    CHECK(g.steps_per_unit() == 128);
    CHECK(GridSpec::dyadic(5).steps_per_unit() == 32);
}

TEST_CASE("cube cell range covers exactly the cube") {
    const double h = 1.0 / 128.0;
    auto [lo, hi] = cube_cell_range(2.0, h);
    // Cells whose centers lie inside [-1, 1].
    CHECK(lo == -128);
    CHECK(hi == 127);
    auto [lo1, hi1] = cube_cell_range(1.0, h);
    CHECK(lo1 == -64);
    CHECK(hi1 == 63);
}

TEST_CASE("grid function norms and cube restriction") {
    const double h = 1.0 / 128.0;
    GridFunction f = sampled_box(h, -32, 160);
    CHECK(f.squared_norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.sup_norm() == 1.0);
    // The cube [-1/2, 1/2] meets [0,1) in [0, 1/2).
    CHECK(f.squared_norm_in_cube(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.squared_norm_in_cube(4.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("inner products against hand integration") {
    const double h = 1.0 / 64.0;
    GridFunction a = GridFunction::zeros(1, h, {0, 0}, {63, 0});
    GridFunction b = GridFunction::zeros(1, h, {0, 0}, {63, 0});
    for (long c = 0; c < 64; ++c) {
        const double x = (double(c) + 0.5) * h;
        a.at(c) = x;
        b.at(c) = 1.0;
    }
    // Midpoint rule integrates linear functions exactly: int_0^1 x dx = 1/2.
    CHECK(a.inner(b) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.inner(b) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("shifted inner product equals explicit overlap") {
    const double h = 1.0 / 128.0;
    const long steps = 128;
    GridFunction f = sampled_box(h, 0, 127);
    // <f, T_1 f> over the full line is zero, <f, T_0 f> = 1.
    CHECK(shifted_inner(f, {0, 0}, f, {0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shifted_inner(f, {0, 0}, f, {steps, 0}) == doctest::Approx(0.0));
    // Restricted to the cube [-1,1], the unshifted overlap keeps only [0,1).
    CHECK(cube_shifted_inner(f, {0, 0}, f, {0, 0}, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cube_shifted_inner(f, {-steps, 0}, f, {-steps, 0}, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cube_shifted_inner(f, {steps, 0}, f, {steps, 0}, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("add scaled shifted accumulates translates") {
    const double h = 0.25;
    GridFunction base = GridFunction::zeros(1, h, {0, 0}, {3, 0});
    for (long c = 0; c < 4; ++c) base.at(c) = double(c + 1);
    GridFunction acc = GridFunction::zeros(1, h, {0, 0}, {7, 0});
    acc.add_scaled_shifted(base, {0, 0}, 1.0);
    acc.add_scaled_shifted(base, {4, 0}, -2.0);
    CHECK(acc.at(0) == 1.0);
    CHECK(acc.at(3) == 4.0);
    CHECK(acc.at(4) == -2.0);
    CHECK(acc.at(7) == -8.0);
}

TEST_CASE("two dimensional outer product grid") {
    const double h = 0.5;
    GridFunction a = GridFunction::zeros(1, h, {0, 0}, {1, 0});
    a.at(0) = 2.0;
    a.at(1) = 3.0;
    GridFunction g = GridFunction::outer(a, a);
    CHECK(g.dim() == 2);
    CHECK(g.at(0, 0) == 4.0);
    CHECK(g.at(0, 1) == 6.0);
    CHECK(g.at(1, 1) == 9.0);
    // Cell weight is h^2 in two dimensions.
    CHECK(g.squared_norm() ==
          doctest::Approx((16.0 + 36.0 + 36.0 + 81.0) * 0.25).epsilon(1e-15));
}

TEST_CASE("lattice filter basics") {
    LatticeFilter d = LatticeFilter::delta(1);
    CHECK(d.size() == 1);
    CHECK(d.at(0) == 1.0);
    CHECK(d.at(5) == 0.0);

    LatticeFilter f = LatticeFilter::from_1d({1.0, -2.0, 0.5}, -1);
    CHECK(f.at(-1) == 1.0);
    CHECK(f.at(0) == -2.0);
    CHECK(f.at(1) == 0.5);
    CHECK(f.max_abs() == 2.0);
    CHECK(f.sum_abs() == doctest::Approx(3.5));
    CHECK(f.sum_squares() == doctest::Approx(1.0 + 4.0 + 0.25));

    long visited = 0;
    double total = 0.0;
    f.for_each([&](long, long, double w) {
        ++visited;
        total += w;
    });
    CHECK(visited == f.size());
    CHECK(total == doctest::Approx(-0.5));
}

TEST_CASE("filter truncation drops small relative taps") {
    LatticeFilter f = LatticeFilter::from_1d({1e-12, 1.0, 0.5, 1e-12}, -2);
    LatticeFilter t = f.truncated(1e-6);
    CHECK(t.lo[0] == -1);
    CHECK(t.hi[0] == 0);
    CHECK(t.at(-1) == 1.0);
    CHECK(t.at(0) == 0.5);
}

TEST_CASE("convolution matches polynomial multiplication") {
    LatticeFilter a = LatticeFilter::from_1d({1.0, 2.0}, 0);
    LatticeFilter b = LatticeFilter::from_1d({3.0, -1.0, 4.0}, -1);
    LatticeFilter c = convolve1d(a, b);
    // (1 + 2z) * (3z^{-1} - 1 + 4z) = 3z^{-1} + 5 + 2z + 8z^2.
    CHECK(c.lo[0] == -1);
    CHECK(c.hi[0] == 2);
    CHECK(c.at(-1) == doctest::Approx(3.0));
    CHECK(c.at(0) == doctest::Approx(5.0));
    CHECK(c.at(1) == doctest::Approx(2.0));
    CHECK(c.at(2) == doctest::Approx(8.0));
}

TEST_CASE("outer filter tensor") {
    LatticeFilter a = LatticeFilter::from_1d({1.0, 2.0}, 0);
    LatticeFilter t = LatticeFilter::outer(a, a);
    CHECK(t.dim == 2);
    CHECK(t.at(0, 0) == 1.0);
    CHECK(t.at(1, 0) == 2.0);
    CHECK(t.at(1, 1) == 4.0);
}
