#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sis/constants.hpp"
#include "sis/errors.hpp"
#include "sis/localization.hpp"
#include "sis/report.hpp"
#include "sis/rng.hpp"
#include "sis/sampling.hpp"
#include "sis/si_space.hpp"
#include "sis/verify.hpp"
#include "sis/version.hpp"

namespace {

using sis::OrderedJson;

struct CommonOpts {
    std::string generator = "bspline:2";
    int dim = 1;
    int q = 7;
    std::uint64_t seed = 0;
    std::string out;
    std::string csv;
};

std::vector<sis::GeneratorSpec> parse_generator_list(const std::string& text, int dim) {
    std::vector<sis::GeneratorSpec> specs;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) specs.push_back(sis::GeneratorSpec::parse(item, dim));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (specs.empty()) throw sis::UsageError("no generator given in '" + text + "'");
    return specs;
}

sis::GridSpec make_grid(int q) {
    if (q < 3 || q > 12) throw sis::UsageError("--grid exponent must be in [3, 12]");
    return sis::GridSpec::dyadic(q);
}

OrderedJson common_config(const CommonOpts& c) {
    OrderedJson j;
    j["generator"] = c.generator;
    j["dim"] = c.dim;
    j["grid_q"] = c.q;
    j["grid_h"] = std::ldexp(1.0, -c.q);
    j["seed"] = c.seed;
    return j;
}

void emit(const OrderedJson& envelope, const CommonOpts& c) {
    const std::string text = sis::canonical_dump(envelope);
    if (c.out.empty())
        std::cout << text;
    else
        sis::write_text_file(c.out, text);
}

void emit_csv(const std::string& text, const CommonOpts& c) {
    if (!c.csv.empty()) sis::write_text_file(c.csv, text);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_constants(const CommonOpts& c, int c2_trials) {
    const auto t0 = std::chrono::steady_clock::now();
    sis::GeneratorSet gen =
        sis::GeneratorSet::create(parse_generator_list(c.generator, c.dim), make_grid(c.q));
    sis::DualGeneratorSet dual = sis::compute_dual(gen);
    sis::ConstantsReport rep = sis::compute_constants(
        gen, dual, sis::derive_stream(c.seed, sis::kConstantsStream), c2_trials);
    OrderedJson config = common_config(c);
    config["c2_trials"] = c2_trials;
    emit(sis::report_envelope("constants", config, sis::to_json(rep), elapsed_since(t0)), c);
    return 0;
}

int cmd_spectrum(const CommonOpts& c, double R, long K, int c2_trials) {
    const auto t0 = std::chrono::steady_clock::now();
    sis::GeneratorSet gen =
        sis::GeneratorSet::create(parse_generator_list(c.generator, c.dim), make_grid(c.q));
    sis::DualGeneratorSet dual = sis::compute_dual(gen);
    sis::ConstantsReport rep = sis::compute_constants(
        gen, dual, sis::derive_stream(c.seed, sis::kConstantsStream), c2_trials);
    sis::OrthonormalBasisSet basis = sis::orthonormalize(gen);
    const long k_used = K >= 0 ? K : sis::default_truncation(basis, R);
    sis::Spectrum spec = sis::eigendecompose(sis::build_localization(basis, R, k_used));
    const double bound =
        std::pow(rep.beta, c.dim) * std::pow(R, double(c.dim) * c.dim / rep.alpha_prime);
    OrderedJson result = sis::spectrum_json(spec, k_used, basis.gram_error, bound);
    result["constants"] = sis::to_json(rep);
    OrderedJson config = common_config(c);
    config["R"] = R;
    config["K"] = K;
    emit(sis::report_envelope("spectrum", config, result, elapsed_since(t0)), c);
    emit_csv(sis::spectrum_csv(spec), c);
    return 0;
}

sis::ExperimentConfig experiment_config(const CommonOpts& c, double R, double delta, double nu,
                                        double eps, long trials, long samples, int funcs,
                                        bool force, int c2_trials) {
    sis::ExperimentConfig cfg;
    cfg.generators = parse_generator_list(c.generator, c.dim);
    cfg.grid = make_grid(c.q);
    cfg.R = R;
    cfg.delta = delta;
    cfg.nu = nu;
    cfg.epsilon = eps;
    cfg.trials = trials;
    cfg.samples_override = samples;
    cfg.funcs_per_trial = funcs;
    cfg.seed = c.seed;
    cfg.force = force;
    cfg.c2_trials = c2_trials;
    return cfg;
}

int cmd_experiment(const CommonOpts& c, const sis::ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    sis::ExperimentResult res = sis::run_experiment(cfg);
    OrderedJson config = common_config(c);
    config["R"] = cfg.R;
    config["delta"] = cfg.delta;
    config["nu"] = cfg.nu;
    config["epsilon"] = cfg.epsilon;
    config["trials"] = cfg.trials;
    config["samples"] = cfg.samples_override;
    config["funcs"] = cfg.funcs_per_trial;
    config["force"] = cfg.force;
    emit(sis::report_envelope("experiment", config, sis::to_json(res), elapsed_since(t0)), c);
    emit_csv(sis::trials_csv(res.trials), c);
    return 0;
}

int cmd_sweep(const CommonOpts& c, const std::vector<std::string>& generators,
              const std::vector<double>& r_values, double delta, double nu, double eps,
              long trials, int funcs, bool force, int c2_trials) {
    const auto t0 = std::chrono::steady_clock::now();
    if (generators.empty() || r_values.empty())
        throw sis::UsageError("sweep grid is empty: need at least one generator and one R");
    OrderedJson points = OrderedJson::array();
    std::string csv = "generator,R,N_R,bound,s_min,success_rate\n";
    long point_index = 0;
    for (const auto& g : generators) {
        for (double R : r_values) {
            CommonOpts pc = c;
            pc.generator = g;
            pc.seed = sis::derive_stream(c.seed, static_cast<std::uint64_t>(point_index));
            sis::ExperimentConfig cfg =
                experiment_config(pc, R, delta, nu, eps, trials, 0, funcs, force, c2_trials);
            try {
                sis::ExperimentResult res = sis::run_experiment(cfg);
                const double bound = std::pow(res.constants.beta, c.dim) *
                                     std::pow(R, double(c.dim) * c.dim /
                                                     res.constants.alpha_prime);
                OrderedJson pt;
                pt["generator"] = g;
                pt["R"] = R;
                pt["bound"] = bound;
                pt["result"] = sis::to_json(res);
                points.push_back(pt);
                csv += g + "," + sis::format_double(R) + "," + std::to_string(res.N_R) +
                       "," + sis::format_double(bound) + "," + std::to_string(res.s) + "," +
                       sis::format_double(res.rate) + "\n";
            } catch (const sis::Error& e) {
                throw sis::Error(std::string("sweep point (") + g + ", R=" +
                                 sis::format_double(R) + "): " + e.what());
            }
            ++point_index;
        }
    }
    OrderedJson config = common_config(c);
    config["generators"] = generators;
    config["R_values"] = r_values;
    config["delta"] = delta;
    config["nu"] = nu;
    config["epsilon"] = eps;
    config["trials"] = trials;
    config["funcs"] = funcs;
    config["force"] = force;
    OrderedJson result;
    result["points"] = points;
    emit(sis::report_envelope("sweep", config, result, elapsed_since(t0)), c);
    emit_csv(csv, c);
    return 0;
}

int cmd_verify(const CommonOpts& c) {
    const auto t0 = std::chrono::steady_clock::now();
    sis::VerifyReport rep = sis::run_verify(c.seed);
    for (const auto& check : rep.checks)
        std::cerr << (check.pass ? "[ok]   " : "[FAIL] ") << check.name << ": "
                  << check.detail << "\n";
    OrderedJson config;
    config["seed"] = c.seed;
    emit(sis::report_envelope("verify", config, sis::to_json(rep), elapsed_since(t0)), c);
    return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sislab: numerical laboratory for random sampling in shift-invariant spaces"};
    app.set_version_flag("--version", std::string(sis::kToolVersion));
    app.set_config("--config", "", "read options from a TOML/INI file (flags win)");
    app.require_subcommand(1);

    CommonOpts common;
    double R = 4.0;
    long K = -1;
    double delta = 0.01, nu = 0.3, eps = 0.1;
    long trials = 20, samples = 0;
    int funcs = 20, c2_trials = 200;
    bool force = false;
    std::vector<std::string> sweep_generators = {"box", "bspline:2"};
    std::vector<double> sweep_r = {2.0, 4.0};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--generator", common.generator,
                        "generator list, comma separated (box, bspline:K, sinc:L, gauss:SIGMA:L)");
        sub->add_option("--dim", common.dim, "ambient dimension (1 or 2)")
            ->check(CLI::Range(1, 2));
        sub->add_option("--grid", common.q, "dyadic grid exponent q, step 1/2^q");
        sub->add_option("--seed", common.seed, "master seed");
        sub->add_option("--out", common.out, "write the JSON report to this path");
    };
    auto add_csv = [&](CLI::App* sub) {
        sub->add_option("--csv", common.csv, "write the CSV table to this path");
    };

    CLI::App* sc_constants =
        app.add_subcommand("constants", "certify the sampling constants of a generator set");
    add_common(sc_constants);
    sc_constants->add_option("--c2-trials", c2_trials, "random functions for the C2 estimate");

    CLI::App* sc_spectrum =
        app.add_subcommand("spectrum", "eigenvalues of the cube localization operator");
    add_common(sc_spectrum);
    add_csv(sc_spectrum);
    sc_spectrum->add_option("--R", R, "cube side length");
    sc_spectrum->add_option("--K", K, "shift truncation radius (default: derived)");
    sc_spectrum->add_option("--c2-trials", c2_trials, "random functions for the C2 estimate");

    CLI::App* sc_experiment =
        app.add_subcommand("experiment", "Monte Carlo sampling-inequality trials");
    add_common(sc_experiment);
    add_csv(sc_experiment);
    sc_experiment->add_option("--R", R, "cube side length");
    sc_experiment->add_option("--delta", delta, "concentration defect");
    sc_experiment->add_option("--nu", nu, "spectral margin");
    sc_experiment->add_option("--eps", eps, "failure probability budget");
    sc_experiment->add_option("--trials", trials, "number of trials");
    sc_experiment->add_option("--samples", samples, "sample count override (0: planned)");
    sc_experiment->add_option("--funcs", funcs, "test functions per trial");
    sc_experiment->add_option("--c2-trials", c2_trials, "random functions for the C2 estimate");
    sc_experiment->add_flag("--force", force, "run even when planning constraints fail");

    CLI::App* sc_sweep = app.add_subcommand("sweep", "grid of experiments over generators and R");
    add_common(sc_sweep);
    add_csv(sc_sweep);
    sc_sweep->add_option("--generators", sweep_generators, "generator grid");
    sc_sweep->add_option("--R-list", sweep_r, "cube side grid");
    sc_sweep->add_option("--delta", delta, "concentration defect");
    sc_sweep->add_option("--nu", nu, "spectral margin");
    sc_sweep->add_option("--eps", eps, "failure probability budget");
    sc_sweep->add_option("--trials", trials, "trials per grid point");
    sc_sweep->add_option("--funcs", funcs, "test functions per trial");
    sc_sweep->add_option("--c2-trials", c2_trials, "random functions for the C2 estimate");
    sc_sweep->add_flag("--force", force, "run even when planning constraints fail");

    CLI::App* sc_verify = app.add_subcommand("verify", "run the built-in check battery");
    sc_verify->add_option("--seed", common.seed, "master seed");
    sc_verify->add_option("--out", common.out, "write the JSON report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sc_constants->parsed()) return cmd_constants(common, c2_trials);
        if (sc_spectrum->parsed()) return cmd_spectrum(common, R, K, c2_trials);
        if (sc_experiment->parsed())
            return cmd_experiment(common, experiment_config(common, R, delta, nu, eps, trials,
                                                            samples, funcs, force, c2_trials));
        if (sc_sweep->parsed())
            return cmd_sweep(common, sweep_generators, sweep_r, delta, nu, eps, trials, funcs,
                             force, c2_trials);
        if (sc_verify->parsed()) return cmd_verify(common);
    } catch (const sis::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sis::FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
