#include "sis/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sis/constants.hpp"
#include "sis/errors.hpp"
#include "sis/localization.hpp"
#include "sis/report.hpp"
#include "sis/rng.hpp"
#include "sis/sampling.hpp"
#include "sis/si_space.hpp"
#include "sis/version.hpp"

namespace sis {
namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw DiagnosticFailure(msg);
}

void run_check(VerifyReport& rep, const std::string& name,
               const std::function<std::string()>& body) {
    CheckResult c;
    c.name = name;
    try {
        c.detail = body();
        c.pass = true;
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = e.what();
    }
    rep.all_pass = rep.all_pass && c.pass;
    rep.checks.push_back(std::move(c));
}

GeneratorSet make_set(const std::vector<std::string>& specs, int dim) {
    std::vector<GeneratorSpec> parsed;
    parsed.reserve(specs.size());
    for (const auto& s : specs) parsed.push_back(GeneratorSpec::parse(s, dim));
    return GeneratorSet::create(parsed, GridSpec{});
}

}  // namespace

VerifyReport run_verify(std::uint64_t seed) {
    VerifyReport rep;
    rep.seed = seed;
    rep.all_pass = true;

    run_check(rep, "rng-scheme", [&] {
        require(std::string(kRngId) == "splitmix64-counter-v1", "rng id drifted");
        CounterRng a(derive_stream(seed, 7));
        CounterRng b(derive_stream(seed, 7));
        bool same = true;
        for (std::uint64_t c = 0; c < 64; ++c) same = same && a.bits(c) == b.bits(c);
        require(same, "same stream must reproduce identical words");
        CounterRng d(derive_stream(seed, 8));
        bool differs = false;
        for (std::uint64_t c = 0; c < 8; ++c) differs = differs || a.bits(c) != d.bits(c);
        require(differs, "distinct streams must decorrelate");
        for (std::uint64_t c = 0; c < 1000; ++c) {
            const double u = a.uniform01(c);
            require(u >= 0.0 && u < 1.0, "uniform01 out of [0,1)");
        }
        CounterRng g(0x9D2C5680F00DULL);
        double mean = 0.0, var = 0.0;
        const int n = 4096;
        for (int k = 0; k < n; ++k) mean += g.gaussian(static_cast<std::uint64_t>(k));
        mean /= n;
        for (int k = 0; k < n; ++k) {
            const double z = g.gaussian(static_cast<std::uint64_t>(k)) - mean;
            var += z * z;
        }
        var /= (n - 1);
        require(std::abs(mean) < 0.08, "gaussian mean drift " + num(mean));
        require(std::abs(var - 1.0) < 0.12, "gaussian variance drift " + num(var));
        return "id stable, streams reproducible, gaussian mean=" + num(mean) +
               " var=" + num(var);
    });

    run_check(rep, "generator-catalog", [&] {
        const std::vector<std::string> names = {"box", "bspline:2", "sinc:8", "gauss:1.0:4"};
        for (const auto& s : names) {
            GeneratorSpec g = GeneratorSpec::parse(s, 1);
            const double rad = g.support_radius();
            require(g({rad + 0.26, 0.0}) == 0.0, s + " must vanish right of support");
            require(g({-rad - 0.26, 0.0}) == 0.0, s + " must vanish left of support");
        }
        GeneratorSpec box = GeneratorSpec::parse("box", 1);
        require(std::abs(box({0.5, 0.0}) - 1.0) == 0.0, "box interior value");
        GeneratorSpec b2 = GeneratorSpec::parse("bspline:2", 1);
        require(std::abs(b2({1.0, 0.0}) - 1.0) < 1e-15, "hat peak value");
        return std::string("4 catalog generators, exteriors vanish exactly");
    });

    run_check(rep, "dual-box", [&] {
        GeneratorSet gen = make_set({"box"}, 1);
        DualGeneratorSet dual = compute_dual(gen);
        const double err = biorthogonality_error(gen, dual, 3);
        require(err <= 1e-12, "box biorthogonality error " + num(err));
        const double k = kernel_norm_at(gen, dual, {0.37, 0.0});
        require(std::abs(k - 1.0) <= 1e-9, "box kernel norm " + num(k));
        return "biorthogonality " + num(err) + ", kernel norm " + num(k);
    });

    run_check(rep, "dual-bspline2", [&] {
        GeneratorSet gen = make_set({"bspline:2"}, 1);
        DualGeneratorSet dual = compute_dual(gen);
        const double err = biorthogonality_error(gen, dual, 6);
        require(err <= 1e-9, "hat biorthogonality error " + num(err));
        const double g = kernel_norm(gen, dual, {0.25, 0.0});
        const double d = kernel_norm_at(gen, dual, {0.25, 0.0});
        require(std::abs(g - d) <= 1e-8, "kernel norm routes disagree: " + num(g) +
                                             " vs " + num(d));
        return "biorthogonality " + num(err) + ", kernel routes agree";
    });

    run_check(rep, "frame-bounds-bspline2", [&] {
        GeneratorSet gen = make_set({"bspline:2"}, 1);
        FrameBounds fb = frame_bounds(gen);
        require(std::abs(fb.A_frame - 1.0 / 3.0) <= 1e-4, "lower bound " + num(fb.A_frame));
        require(std::abs(fb.C0 - 1.0) <= 1e-4, "upper bound " + num(fb.C0));
        require(fb.self_check < 1e-6, "grid doubling drift " + num(fb.self_check));
        return "A=" + num(fb.A_frame) + " C0=" + num(fb.C0) + " drift=" +
               num(fb.self_check);
    });

    run_check(rep, "orthonormalize-bspline2", [&] {
        GeneratorSet gen = make_set({"bspline:2"}, 1);
        OrthonormalBasisSet basis = orthonormalize(gen);
        require(basis.gram_error <= 1e-8, "gram error " + num(basis.gram_error));
        return "gram error " + num(basis.gram_error) + " after " +
               std::to_string(basis.polish_passes) + " passes";
    });

    run_check(rep, "orthonormalize-pair", [&] {
        GeneratorSet gen = make_set({"box", "gauss:0.5:4"}, 1);
        OrthonormalBasisSet basis = orthonormalize(gen);
        require(basis.gram_error <= 1e-6, "gram error " + num(basis.gram_error));
        return "2-generator gram error " + num(basis.gram_error);
    });

    run_check(rep, "constants-box", [&] {
        GeneratorSet gen = make_set({"box"}, 1);
        DualGeneratorSet dual = compute_dual(gen);
        ConstantsReport c = compute_constants(gen, dual, derive_stream(seed, 21), 50);
        require(std::abs(c.C0 - 1.0) <= 1e-9, "C0 " + num(c.C0));
        require(std::abs(c.A_frame - 1.0) <= 1e-9, "A " + num(c.A_frame));
        require(std::abs(c.C1 - 1.0) <= 1e-9, "C1 " + num(c.C1));
        require(c.compact_support, "box tail must be compactly supported");
        require(std::abs(c.beta - 3.0) <= 1e-12, "beta " + num(c.beta));
        require(std::abs(c.R0 - 1.0) <= 1e-12, "R0 " + num(c.R0));
        return "C0=1 A=1 C1=1 beta=3 R0=1 as required";
    });

    run_check(rep, "spectrum-box", [&] {
        GeneratorSet gen = make_set({"box"}, 1);
        OrthonormalBasisSet basis = orthonormalize(gen);
        Spectrum s2 = eigendecompose(build_localization(basis, 2.0));
        require(s2.N_half == 2, "N(2) = " + std::to_string(s2.N_half));
        require(s2.lambdas[0] >= 1.0 - 1e-10 && s2.lambdas[1] >= 1.0 - 1e-10,
                "leading eigenvalues below 1");
        require(s2.lambdas[2] <= 1e-10, "third eigenvalue " + num(s2.lambdas[2]));
        const double trace = s2.lambdas.sum();
        require(std::abs(trace - 2.0) <= 1e-9, "trace " + num(trace));
        Spectrum s4 = eigendecompose(build_localization(basis, 4.0));
        require(s4.N_half == 4, "N(4) = " + std::to_string(s4.N_half));
        return "N(2)=2, N(4)=4, trace(2)=" + num(trace);
    });

    run_check(rep, "eigenpair-identities", [&] {
        GeneratorSet gen = make_set({"bspline:2"}, 1);
        OrthonormalBasisSet basis = orthonormalize(gen);
        LocalizationMatrix loc = build_localization(basis, 4.0);
        Spectrum spec = eigendecompose(loc);
        const int N = spec.N_half;
        require(N >= 1, "empty concentrated eigenspace");
        Eigen::MatrixXd gram = spec.vectors.transpose() * spec.vectors;
        const double gdev = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
                                .cwiseAbs()
                                .maxCoeff();
        require(gdev <= 1e-10, "eigenvector gram deviation " + num(gdev));
        double worst = 0.0;
        for (int n = 0; n < N; ++n) {
            const double q = spec.vectors.col(n).dot(loc.M * spec.vectors.col(n));
            worst = std::max(worst, std::abs(q - spec.lambdas[n]));
        }
        require(worst <= 1e-9, "Rayleigh quotient mismatch " + num(worst));
        return "N=" + std::to_string(N) + ", max |v'Mv - lambda| = " + num(worst);
    });

    run_check(rep, "projection-split", [&] {
        GeneratorSet gen = make_set({"bspline:2"}, 1);
        OrthonormalBasisSet basis = orthonormalize(gen);
        Spectrum spec = eigendecompose(build_localization(basis, 4.0));
        const double delta = 0.2;
        TestFunction f = generate_test_function(spec, delta, derive_stream(seed, 31));
        require(f.cube_ratio >= 1.0 - delta - 1e-12,
                "cube ratio " + num(f.cube_ratio) + " below concentration level");
        Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(spec.vectors.rows());
        for (std::size_t i = 0; i < f.indices.size(); ++i)
            coeffs += f.coeffs[static_cast<int>(i)] * spec.vectors.col(f.indices[i]);
        const int N = f.indices.back() + 1;
        ProjectionSplit split = projection_split(coeffs, spec, N);
        require(std::abs(split.captured + split.residual - coeffs.squaredNorm()) <= 1e-9,
                "energy split violates Pythagoras");
        require(std::abs(split.captured - 1.0) <= 1e-9,
                "captured energy " + num(split.captured));
        require(std::abs(split.cube_weighted - f.cube_ratio) <= 1e-9,
                "cube-weighted energy mismatch");
        return "captured=" + num(split.captured) + " cube=" + num(split.cube_weighted);
    });

    run_check(rep, "sample-determinism", [&] {
        SampleSet s1 = draw_samples(4.0, 128, derive_stream(seed, 41), 1);
        SampleSet s2 = draw_samples(4.0, 128, derive_stream(seed, 41), 1);
        bool same = s1.points.size() == s2.points.size();
        for (std::size_t i = 0; same && i < s1.points.size(); ++i)
            same = s1.points[i] == s2.points[i];
        require(same, "identical keys must reproduce samples");
        SampleSet s3 = draw_samples(4.0, 128, derive_stream(seed, 42), 1);
        bool differs = false;
        for (std::size_t i = 0; i < s1.points.size(); ++i)
            differs = differs || s1.points[i] != s3.points[i];
        require(differs, "distinct keys must change samples");
        for (const auto& p : s1.points)
            require(std::abs(p[0]) <= 2.0, "sample outside cube");
        return std::string("bit-identical regeneration, cube bounds hold");
    });

    run_check(rep, "covering-index", [&] {
        SampleSet manual;
        manual.R = 2.0;
        manual.s = 3;
        manual.dim = 1;
        manual.points = {{0.1, 0.0}, {0.2, 0.0}, {1.4, 0.0}};
        require(covering_index(manual) == 2, "expected covering index 2");
        SampleSet empty;
        empty.R = 2.0;
        empty.dim = 1;
        require(covering_index(empty) == 0, "empty set must give 0");
        SampleSet crowded = draw_samples(2.0, 10, derive_stream(seed, 43), 1);
        require(covering_index(crowded) >= 4,
                "pigeonhole floor violated: " + std::to_string(covering_index(crowded)));
        return std::string("examples and pigeonhole floor hold");
    });

    run_check(rep, "covering-tail-formula", [&] {
        const double a = 0.75, R = 4.0;
        const long s = 64;
        const double got = covering_tail_bound(a, s, R, 1);
        const double want = 6.0 * std::exp(-64.0 * (0.75 * std::log(3.0) - 0.5));
        require(std::abs(got - want) <= 1e-12 * want, "bound value " + num(got));
        bool threw = false;
        try {
            covering_tail_bound(0.25, s, R, 1);
        } catch (const DomainError&) {
            threw = true;
        }
        require(threw, "a = R^-n must be rejected");
        return "bound(3/R,64,4) = " + num(got);
    });

    run_check(rep, "infimum-exact", [&] {
        GeneratorSet gen = make_set({"box"}, 1);
        OrthonormalBasisSet basis = orthonormalize(gen);
        Spectrum spec = eigendecompose(build_localization(basis, 2.0));
        EigenfunctionEvaluator eval(gen, basis, spec, 2);
        SampleSet samples;
        samples.R = 2.0;
        samples.s = 3;
        samples.dim = 1;
        samples.points = {{-0.5, 0.0}, {0.3, 0.0}, {0.7, 0.0}};
        const double inf = exact_infimum(build_T_sum(eval, 2, samples));
        require(std::abs(inf - 1.0 / 3.0) <= 1e-9, "infimum " + num(inf));
        return "lambda_min = " + num(inf) + " matches 1/3";
    });

    run_check(rep, "planning-examples", [&] {
        ConstantsReport c;
        c.dim = 1;
        c.r = 1;
        c.C0 = 1.0;
        c.A_frame = 1.0;
        c.C0_tilde = 1.0;
        c.C1 = 1.0;
        c.C2 = 1.0;
        c.C3 = 1.0;
        c.alpha = 1.0;
        derived_constants(c);
        require(std::abs(c.beta - 19.0) <= 1e-12, "beta " + num(c.beta));
        require(std::abs(c.R0 - 2.0) <= 1e-12, "R0 " + num(c.R0));
        ConstantsReport flat = c;
        flat.C3 = 0.0;
        derived_constants(flat);
        require(std::abs(flat.beta - 3.0) <= 1e-12, "compact beta " + num(flat.beta));
        require(std::abs(flat.R0 - 1.0) <= 1e-12, "compact R0 " + num(flat.R0));
        TheoremParams p = plan_experiment(flat, 8.0, 0.001, 0.3, 0.1);
        require(p.s_min == 604, "s_min " + std::to_string(p.s_min));
        bool threw = false;
        try {
            plan_experiment(flat, 8.0, 0.5, 0.3, 0.1);
        } catch (const ConstraintViolation&) {
            threw = true;
        }
        require(threw, "delta = 1/2 must violate the cap");
        return "beta=19, R0=2, s_min=604, delta cap enforced";
    });

    run_check(rep, "json-canonical", [&] {
        OrderedJson j;
        j["beta"] = 1.5;
        j["alpha"] = 0.1;
        j["list"] = {1, 2, 3};
        j["name"] = "x";
        j["flag"] = true;
        j["none"] = nullptr;
        const std::string s = canonical_dump(j);
        OrderedJson back = OrderedJson::parse(s);
        require(canonical_dump(back) == s, "round trip changed bytes");
        require(s.find("0.10000000000000001") != std::string::npos,
                "17-digit float formatting missing");
        require(s.find("beta") < s.find("alpha"), "insertion order lost");
        return std::string("round trip byte-identical, 17-digit floats");
    });

    run_check(rep, "experiment-smoke", [&] {
        ExperimentConfig cfg;
        cfg.generators = {GeneratorSpec::parse("box", 1)};
        cfg.R = 4.0;
        cfg.delta = 0.002;
        cfg.nu = 0.25;
        cfg.epsilon = 0.1;
        cfg.trials = 2;
        cfg.samples_override = 200;
        cfg.funcs_per_trial = 5;
        // Fixed stream: the smoke check certifies the pipeline plumbing on a
        // known-good trajectory. Tying it to the report seed would make the
        // battery fail for seeds whose two draws happen to miss the spectral
        // threshold; the statistics of that event belong to the experiment
        // suites, not to verify.
        cfg.seed = 99;
        cfg.c2_trials = 60;
        ExperimentResult res = run_experiment(cfg);
        require(res.N_R == 4, "N_R " + std::to_string(res.N_R));
        require(res.successes == res.config.trials,
                "successes " + std::to_string(res.successes));
        return "2/2 trials succeed, N_R=4, s=" + std::to_string(res.s);
    });

    return rep;
}

}  // namespace sis
