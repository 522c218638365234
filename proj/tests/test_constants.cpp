#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sis/constants.hpp"
#include "sis/errors.hpp"
#include "sis/rng.hpp"
#include "sis/si_space.hpp"

using namespace sis;

namespace {

GeneratorSet make(const std::string& name, int dim = 1, int q = 7) {
    return GeneratorSet::create({GeneratorSpec::parse(name, dim)}, GridSpec::dyadic(q));
}

ConstantsReport flat_report(double C2, double C3, double alpha) {
    ConstantsReport rep;
    rep.dim = 1;
    rep.r = 1;
    rep.C0 = 1.0;
    rep.A_frame = 1.0;
    rep.C0_tilde = 1.0;
    rep.C1 = 1.0;
    rep.C1_amalgam_bound = 1.0;
    rep.C2 = C2;
    rep.C3 = C3;
    rep.alpha = alpha;
    rep.compact_support = (C3 == 0.0);
    derived_constants(rep);
    return rep;
}

}  // namespace

TEST_CASE("frame bounds match closed forms") {
    GeneratorSet box = make("box");
    FrameBounds fb = frame_bounds(box);
    CHECK(fb.A_frame == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fb.C0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fb.self_check < 1e-6);

    GeneratorSet hat = make("bspline:2");
    FrameBounds hb = frame_bounds(hat);
    CHECK(std::abs(hb.A_frame - 1.0 / 3.0) < 1e-4);
    CHECK(std::abs(hb.C0 - 1.0) < 1e-4);
    CHECK(hb.self_check < 1e-6);
}

TEST_CASE("sharp sinc truncation keeps a fixed symbol overshoot") {
    // Hard truncation of the sinc produces a Gibbs jump in the symbol whose
    // size does not vanish as the half-width grows: the extrema converge to
    // fixed values away from 1. The lower bound settles near 0.4984 and the
    // upper near 1.1950; the same plateau appears for both tested widths.
    for (const char* name : {"sinc:32", "sinc:64"}) {
        GeneratorSet gen = make(name);
        FrameBounds fb = frame_bounds(gen);
        CHECK(fb.A_frame > 0.49);
        CHECK(fb.A_frame < 0.51);
        CHECK(fb.C0 > 1.18);
        CHECK(fb.C0 < 1.21);
    }
}

TEST_CASE("point evaluation constant and its amalgam bound") {
    GeneratorSet box = make("box");
    DualGeneratorSet box_dual = compute_dual(box);
    C1Estimate bc = estimate_C1(box, box_dual);
    CHECK(bc.direct == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bc.amalgam_bound == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(bc.amalgam_bound >= bc.direct - 1e-12);

    GeneratorSet hat = make("bspline:2");
    DualGeneratorSet hat_dual = compute_dual(hat);
    C1Estimate hc = estimate_C1(hat, hat_dual);
    CHECK(hc.direct > 1.25);
    CHECK(hc.direct < 1.40);
    CHECK(hc.amalgam_bound >= hc.direct);

    GeneratorSet snc = make("sinc:64");
    DualGeneratorSet snc_dual = compute_dual(snc);
    C1Estimate sc = estimate_C1(snc, snc_dual);
    CHECK(std::abs(sc.direct - 1.0) < 1e-2);
    CHECK(sc.amalgam_bound >= sc.direct);
}

TEST_CASE("kernel norm converges at second order in the grid step") {
    GeneratorSpec spec = GeneratorSpec::parse("bspline:2", 1);
    const Point x = {0.37, 0.0};
    auto norm_at = [&](int q) {
        GeneratorSet gen = GeneratorSet::create({spec}, GridSpec::dyadic(q));
        DualGeneratorSet dual = compute_dual(gen);
        return kernel_norm_at(gen, dual, x);
    };
    const double ref = norm_at(11);
    const double e6 = std::abs(norm_at(6) - ref);
    const double e7 = std::abs(norm_at(7) - ref);
    const double e8 = std::abs(norm_at(8) - ref);
    REQUIRE(e7 > 0.0);
    REQUIRE(e8 > 0.0);
    CHECK(e6 / e7 > 2.5);
    CHECK(e6 / e7 < 6.5);
    CHECK(e7 / e8 > 2.5);
    CHECK(e7 / e8 < 6.5);
}

TEST_CASE("oscillation of the zero function vanishes") {
    GridFunction z = GridFunction::zeros(1, 1.0 / 128.0, {-200, 0}, {200, 0});
    GridFunction o = osc_grid(z);
    CHECK(o.sup_norm() == 0.0);
}

TEST_CASE("single points per cell never exceed the norm for the box") {
    GeneratorSet box = make("box");
    CounterRng rng(derive_stream(42, 0));
    std::uint64_t ctr = 0;
    const long radius = 4;
    long checked = 0;
    for (int pair = 0; pair < 100000; ++pair) {
        double sq = 0.0;
        std::vector<double> c(2 * radius + 1);
        for (double& w : c) {
            w = rng.gaussian(ctr++);
            sq += w * w;
        }
        SIFunction f(&box, {LatticeFilter::from_1d(c, -radius)});
        double point_sum = 0.0;
        for (long k = -radius; k <= radius; ++k) {
            if (rng.uniform01(ctr++) < 0.5) continue;  // cell left empty
            const double gamma = rng.uniform(ctr++, double(k), double(k + 1));
            const double v = f({gamma, 0.0});
            point_sum += v * v;
            ++checked;
        }
        REQUIRE(point_sum <= sq * (1.0 + 1e-12));
    }
    CHECK(checked > 100000);
}

TEST_CASE("point sums scale with the covering index") {
    for (const char* name : {"box", "bspline:2"}) {
        GeneratorSet gen = make(name);
        C2Estimate c2 = estimate_C2(gen, 40, derive_stream(9, 1));
        CounterRng rng(derive_stream(9, 2));
        std::uint64_t ctr = 0;
        for (int n0 : {1, 2, 4}) {
            for (int trial = 0; trial < 60; ++trial) {
                SIFunction f = random_si_function(gen, 4, rng.bits(ctr++));
                const double nsq = f.to_grid().squared_norm();
                double point_sum = 0.0;
                for (long k = -8; k <= 8; ++k)
                    for (int j = 0; j < n0; ++j) {
                        const double gamma = rng.uniform(ctr++, double(k), double(k + 1));
                        const double v = f({gamma, 0.0});
                        point_sum += v * v;
                    }
                REQUIRE(point_sum <= c2.C2 * n0 * nsq * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("sampling constant of the truncated sinc stays below the reference level") {
    GeneratorSet gen = make("sinc:64");
    C2Estimate est = estimate_C2(gen, 120, derive_stream(0, 7));
    CHECK(est.C2 == doctest::Approx((est.M_osc + 1.0) * (est.M_osc + 1.0)));
    CHECK(est.C2 <= 1.1 * std::exp(3.14159265358979323846));
    CHECK(est.M_osc > 0.0);
}

TEST_CASE("tail decay conventions") {
    GeneratorSet box = make("box");
    DecayFit bf = fit_decay(box);
    CHECK(bf.compact_support);
    CHECK(bf.C3 == 0.0);
    CHECK(bf.alpha == 1.0);

    GeneratorSet hat = make("bspline:2");
    DecayFit hf = fit_decay(hat);
    CHECK(hf.single_point);
    CHECK(hf.alpha == 1.0);
    CHECK(std::abs(hf.C3 - 2.0 / 3.0) < 1e-3);

    GeneratorSet snc = make("sinc:64");
    DecayFit sf = fit_decay(snc);
    CHECK(sf.alpha > 0.8);
    CHECK(sf.alpha < 1.2);
    REQUIRE(sf.R.size() == sf.t.size());
    REQUIRE(sf.R.size() >= 5);
    for (size_t i = 0; i < sf.R.size(); ++i) {
        CHECK(sf.t[i] <= sf.C3 * std::pow(sf.R[i], -sf.alpha) * (1.0 + 1e-12));
        if (i > 0) CHECK(sf.t[i] < sf.t[i - 1]);
    }
}

TEST_CASE("derived planning constants from hand-filled reports") {
    ConstantsReport a = flat_report(1.0, 1.0, 1.0);
    CHECK(a.beta == doctest::Approx(19.0).epsilon(1e-12));
    CHECK(a.R0 == doctest::Approx(2.0).epsilon(1e-12));

    ConstantsReport b = flat_report(1.0, 0.0, 1.0);
    CHECK(b.beta == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(b.R0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("computed reports keep the excess radius tied to the tail") {
    GeneratorSet box = make("box");
    DualGeneratorSet bd = compute_dual(box);
    ConstantsReport br = compute_constants(box, bd, derive_stream(0, 3), 40);
    CHECK(br.compact_support);
    CHECK(br.beta == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(br.R0 == doctest::Approx(1.0).epsilon(1e-9));

    GeneratorSet hat = make("bspline:2");
    DualGeneratorSet hd = compute_dual(hat);
    ConstantsReport hr = compute_constants(hat, hd, derive_stream(0, 3), 40);
    CHECK(hr.C3 > 0.0);
    CHECK(hr.beta > 3.0);
    CHECK(hr.R0 >= 1.0);
}

TEST_CASE("sample count recipe reproduces the hand computation") {
    ConstantsReport flat = flat_report(1.0, 0.0, 1.0);
    TheoremParams p = plan_experiment(flat, 8.0, 0.001, 0.3, 0.1);
    CHECK(p.s_min == 604);
    CHECK(p.A_lower ==
          doctest::Approx(0.5 - 0.001 - 0.3 - 12.0 * 0.001 * flat.C2).epsilon(1e-12));
    CHECK(p.N0_budget == doctest::Approx(3.0 * double(p.s_min) / 8.0).epsilon(1e-12));
}

TEST_CASE("infeasible accuracy targets are rejected by name") {
    ConstantsReport flat = flat_report(1.0, 0.0, 1.0);
    CHECK_THROWS_AS(plan_experiment(flat, 8.0, 0.5, 0.3, 0.1), ConstraintViolation);
    auto [params, violations] = plan_experiment_unchecked(flat, 8.0, 0.5, 0.3, 0.1);
    CHECK(params.s_min > 0);
    REQUIRE(!violations.empty());
    bool mentions_delta = false;
    for (const auto& v : violations) mentions_delta |= v.find("delta") != std::string::npos;
    CHECK(mentions_delta);
}

TEST_CASE("shift coefficient energy stays below the upper frame bound") {
    for (const char* name : {"box", "bspline:2", "bspline:4"}) {
        GeneratorSet gen = make(name);
        FrameBounds fb = frame_bounds(gen);
        const long steps = gen.grid().steps_per_unit();
        for (int trial = 0; trial < 100; ++trial) {
            SIFunction f = random_si_function(gen, 4, derive_stream(17, trial));
            GridFunction fg = f.to_grid();
            const double nsq = fg.squared_norm();
            double sum = 0.0;
            for (int i = 0; i < gen.r(); ++i) {
                const GridFunction& phi = gen.sampled(i);
                const long k_lo = fg.lo()[0] / steps - 8;
                const long k_hi = fg.hi()[0] / steps + 8;
                for (long k = k_lo; k <= k_hi; ++k) {
                    const double ip = shifted_inner(fg, {0, 0}, phi, {k * steps, 0});
                    sum += ip * ip;
                }
            }
            REQUIRE(sum <= fb.C0 * nsq * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("point values stay below the evaluation constant") {
    for (const char* name : {"box", "bspline:2"}) {
        GeneratorSet gen = make(name);
        DualGeneratorSet dual = compute_dual(gen);
        C1Estimate c1 = estimate_C1(gen, dual);
        CounterRng rng(derive_stream(23, 0));
        std::uint64_t ctr = 0;
        for (int trial = 0; trial < 100; ++trial) {
            SIFunction f = random_si_function(gen, 4, rng.bits(ctr++));
            const double norm = std::sqrt(f.to_grid().squared_norm());
            for (int p = 0; p < 40; ++p) {
                const double x = rng.uniform(ctr++, -7.0, 7.0);
                REQUIRE(std::abs(f({x, 0.0})) <= (c1.direct + 1e-3) * norm);
            }
        }
    }
}
