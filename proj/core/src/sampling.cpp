#include "sis/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "sis/errors.hpp"
#include "sis/rng.hpp"

namespace sis {

namespace {

// Stream indices reserved for pipeline stages so trial streams (indices
// 0..trials-1) never collide with them.

std::string fmt(double v) { return std::to_string(v); }

Eigen::VectorXd shifted_spectrum_mins(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("eigenvalue computation on the sampling matrix did not converge");
    return solver.eigenvalues();
}

}  // namespace

SampleSet draw_samples(double R, long s, std::uint64_t key, int dim) {
    if (!(R > 0.0)) throw DomainError("cube side R must be positive");
    if (s < 1) throw UsageError("sample count must be positive");
    if (dim != 1 && dim != 2) throw UsageError("dimension must be 1 or 2");
    SampleSet out;
    out.R = R;
    out.s = s;
    out.key = key;
    out.dim = dim;
    out.points.reserve(static_cast<size_t>(s));
    CounterRng rng(key);
    for (long j = 0; j < s; ++j) {
        Point x{0.0, 0.0};
        for (int d = 0; d < dim; ++d)
            x[static_cast<size_t>(d)] =
                (rng.uniform01(static_cast<std::uint64_t>(j * dim + d)) - 0.5) * R;
        out.points.push_back(x);
    }
    return out;
}

long covering_index(const SampleSet& samples) {
    std::map<CellIndex, long> counts;
    long best = 0;
    for (const Point& x : samples.points) {
        CellIndex cell{static_cast<long>(std::floor(x[0] + 0.5)),
                       samples.dim == 2 ? static_cast<long>(std::floor(x[1] + 0.5)) : 0};
        best = std::max(best, ++counts[cell]);
    }
    return best;
}

double covering_tail_bound(double a, long s, double R, int dim) {
    if (!(R >= 2.0)) throw DomainError("covering tail bound requires R >= 2");
    if (s < 1) throw UsageError("sample count must be positive");
    const double rn = std::pow(R, dim);
    if (!(a > 1.0 / rn))
        throw DomainError("covering tail bound requires a > R^-dim = " + fmt(1.0 / rn));
    const double exponent = a * std::log(a * rn) - (a - 1.0 / rn);
    return std::pow(R + 2.0, dim) * std::exp(-static_cast<double>(s) * exponent);
}

TMatrixSum build_T_sum(const EigenfunctionEvaluator& eval, int N, const SampleSet& samples) {
    if (N < 1 || N > eval.count())
        throw IndexOutOfRange("matrix dimension " + std::to_string(N) + " of " +
                              std::to_string(eval.count()) + " kept eigenfunctions");
    TMatrixSum out;
    out.N = N;
    out.s = samples.s;
    out.sum = Eigen::MatrixXd::Zero(N, N);
    std::vector<double> buf(static_cast<size_t>(eval.count()));
    for (const Point& x : samples.points) {
        eval.eval_all(x, buf.data());
        for (int i = 0; i < N; ++i) {
            const double vi = buf[static_cast<size_t>(i)];
            if (vi == 0.0) continue;
            for (int j = i; j < N; ++j) out.sum(i, j) += vi * buf[static_cast<size_t>(j)];
        }
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < i; ++j) out.sum(i, j) = out.sum(j, i);
    return out;
}

double exact_infimum(const TMatrixSum& t) {
    if (t.s < 1) throw UsageError("sample count must be positive");
    return shifted_spectrum_mins(t.sum / static_cast<double>(t.s)).minCoeff();
}

BernsteinReport bernstein_diagnostics(const EigenfunctionEvaluator& eval, const Spectrum& spec,
                                      int N, long mc, std::uint64_t key, double nu, double C1,
                                      long s) {
    if (N < 1 || N > spec.lambdas.size() || N > eval.count())
        throw IndexOutOfRange("matrix dimension " + std::to_string(N));
    if (mc < 2) throw UsageError("Monte Carlo size must be at least 2");
    if (!(nu >= 0.0)) throw UsageError("nu must be nonnegative");
    const int dim = spec.map.dim;
    const double rn_inv = std::pow(spec.R, -dim);

    const SampleSet samples = draw_samples(spec.R, mc, key, dim);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd lambda_shift = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) lambda_shift(i, i) = rn_inv * spec.lambdas(i);

    BernsteinReport rep;
    rep.N = N;
    rep.mc = mc;
    std::vector<double> buf(static_cast<size_t>(eval.count()));
    Eigen::MatrixXd t(N, N);
    for (const Point& x : samples.points) {
        eval.eval_all(x, buf.data());
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                const double v = buf[static_cast<size_t>(i)] * buf[static_cast<size_t>(j)];
                t(i, j) = v;
                sum(i, j) += v;
                sum_sq(i, j) += v * v;
            }
        const double norm =
            shifted_spectrum_mins(t - lambda_shift).cwiseAbs().maxCoeff();
        rep.max_sample_norm = std::max(rep.max_sample_norm, norm);
    }

    const double n_mc = static_cast<double>(mc);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double mean = sum(i, j) / n_mc;
            const double target = (i == j) ? rn_inv * spec.lambdas(i) : 0.0;
            const double var =
                std::max(0.0, (sum_sq(i, j) - n_mc * mean * mean) / (n_mc - 1.0));
            const double se = std::sqrt(var / n_mc);
            const double dev = std::abs(mean - target);
            if (dev > 4.0 * se + 1e-12)
                throw DiagnosticFailure(
                    "sample mean of the T matrix violates E(T) = R^-dim Lambda at entry (" +
                    std::to_string(i) + "," + std::to_string(j) + "): |" + fmt(mean) + " - " +
                    fmt(target) + "| > 4 SE = " + fmt(4.0 * se));
            if (se > 0.0) rep.max_mean_dev_se = std::max(rep.max_mean_dev_se, dev / se);
        }

    rep.norm_bound = std::max(C1 * C1, rn_inv);
    if (rep.max_sample_norm > rep.norm_bound + 1e-6)
        throw DiagnosticFailure("||T_j - R^-dim Lambda|| = " + fmt(rep.max_sample_norm) +
                                " violates the bound max(C1^2, R^-dim) = " +
                                fmt(rep.norm_bound));
    rep.sigma_sq_bound = static_cast<double>(s) * C1 * C1 * rn_inv;
    rep.tail_value =
        N * std::exp(-nu * nu * static_cast<double>(s) /
                     (C1 * C1 * std::pow(spec.R, dim) * (1.0 + nu / 3.0)));
    return rep;
}

TestFunction generate_test_function(const Spectrum& spec, double delta, std::uint64_t key) {
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0,1)");
    TestFunction f;
    for (long n = 0; n < spec.lambdas.size(); ++n)
        if (spec.lambdas(n) >= 1.0 - delta) f.indices.push_back(static_cast<int>(n));
    if (f.indices.empty())
        throw EmptyEigenspace("no localization eigenvalue reaches 1 - delta = " +
                              fmt(1.0 - delta) + " for R = " + fmt(spec.R));

    const auto m = static_cast<long>(f.indices.size());
    f.coeffs.resize(m);
    for (int attempt = 0; attempt < 8; ++attempt) {
        CounterRng rng(derive_stream(key, static_cast<std::uint64_t>(attempt)));
        for (long i = 0; i < m; ++i)
            f.coeffs(i) = rng.gaussian(static_cast<std::uint64_t>(i));
        const double nrm = f.coeffs.norm();
        if (nrm > 1e-14) {
            f.coeffs /= nrm;
            f.cube_ratio = 0.0;
            for (long i = 0; i < m; ++i)
                f.cube_ratio += spec.lambdas(f.indices[static_cast<size_t>(i)]) * f.coeffs(i) *
                                f.coeffs(i);
            return f;
        }
    }
    throw InvariantViolation("random eigenspace coefficients degenerated to zero");
}

ExperimentContext::ExperimentContext(const ExperimentConfig& config) : cfg_(config) {
    if (cfg_.trials < 0) throw UsageError("trial count must be nonnegative");
    if (cfg_.funcs_per_trial < 0) throw UsageError("test function count must be nonnegative");
    if (cfg_.samples_override < 0) throw UsageError("sample count must be nonnegative");

    gen_ = std::make_unique<GeneratorSet>(GeneratorSet::create(cfg_.generators, cfg_.grid));
    dual_ = compute_dual(*gen_);
    constants_ = compute_constants(*gen_, dual_, derive_stream(cfg_.seed, kConstantsStream),
                                   cfg_.c2_trials);

    auto [params, violations] = plan_experiment_unchecked(constants_, cfg_.R, cfg_.delta,
                                                          cfg_.nu, cfg_.epsilon, cfg_.gamma);
    params_ = params;
    violations_ = violations;
    if (!violations_.empty() && !cfg_.force) {
        std::string msg = "experiment parameters violate the sampling theorem:";
        for (const auto& v : violations_) msg += "\n  " + v;
        throw ConstraintViolation(msg);
    }

    basis_ = orthonormalize(*gen_);
    K_ = default_truncation(basis_, cfg_.R);
    spectrum_ = eigendecompose(build_localization(basis_, cfg_.R, K_));
    n_r_ = spectrum_.N_half;
    if (n_r_ < 1)
        throw EmptyEigenspace("no localization eigenvalue reaches 1/2 for R = " + fmt(cfg_.R));
    evaluator_ = std::make_unique<EigenfunctionEvaluator>(*gen_, basis_, spectrum_, n_r_);
    s_ = cfg_.samples_override > 0 ? cfg_.samples_override : params_.s_min;
}

TrialResult ExperimentContext::run_trial(long index, long s) const {
    if (s < 1) throw UsageError("sample count must be positive");
    TrialResult tr;
    tr.index = index;
    tr.stream = derive_stream(cfg_.seed, static_cast<std::uint64_t>(index));

    const int dim = gen_->dim();
    const double rn_inv = std::pow(cfg_.R, -dim);
    const SampleSet samples = draw_samples(cfg_.R, s, derive_stream(tr.stream, 0), dim);

    const TMatrixSum tsum = build_T_sum(*evaluator_, n_r_, samples);
    Eigen::MatrixXd normalized = tsum.sum / static_cast<double>(s);
    tr.lambda_min = shifted_spectrum_mins(normalized).minCoeff();
    for (int i = 0; i < n_r_; ++i) normalized(i, i) -= rn_inv * spectrum_.lambdas(i);
    tr.lambda_min_shifted = shifted_spectrum_mins(normalized).minCoeff();
    tr.infimum_ok = tr.lambda_min_shifted >= -cfg_.nu * rn_inv;

    tr.covering = covering_index(samples);
    tr.covering_ok =
        static_cast<double>(tr.covering) <= 3.0 * static_cast<double>(s) * rn_inv;

    // Data-driven lower constant for the sampling sum, from the certified
    // spectral shift and the observed covering count (gamma-split form).
    const double g = cfg_.gamma;
    tr.lemma_lower = (static_cast<double>(s) * rn_inv) *
                         (g - g * cfg_.delta / (1.0 - g) - cfg_.nu) -
                     2.0 * constants_.C2 * static_cast<double>(tr.covering) * cfg_.delta /
                         (1.0 - g);

    const double upper = static_cast<double>(s) * constants_.C1 * constants_.C1;
    const double lower = params_.A_lower * static_cast<double>(s) * rn_inv;
    tr.min_ratio = 0.0;
    tr.max_ratio = 0.0;
    std::vector<double> buf(static_cast<size_t>(n_r_));
    for (int fi = 0; fi < cfg_.funcs_per_trial; ++fi) {
        const TestFunction f =
            generate_test_function(spectrum_, cfg_.delta,
                                   derive_stream(tr.stream, 1 + static_cast<std::uint64_t>(fi)));
        double sum = 0.0;
        for (const Point& x : samples.points) {
            evaluator_->eval_all(x, buf.data());
            double v = 0.0;
            for (size_t i = 0; i < f.indices.size(); ++i)
                v += f.coeffs(static_cast<long>(i)) * buf[static_cast<size_t>(f.indices[i])];
            sum += v * v;
        }
        const double ratio = sum / (static_cast<double>(s) * rn_inv);
        if (fi == 0) {
            tr.min_ratio = ratio;
            tr.max_ratio = ratio;
        } else {
            tr.min_ratio = std::min(tr.min_ratio, ratio);
            tr.max_ratio = std::max(tr.max_ratio, ratio);
        }
        if (sum < lower - 1e-9 * std::max(1.0, upper)) tr.lower_ok = false;
        if (sum > upper + 1e-9 * std::max(1.0, upper)) tr.upper_ok = false;
        // When the certificate holds, the covering-count bound must hold
        // too; a violation means the implementation broke, not bad luck.
        if (tr.infimum_ok && tr.covering_ok && tr.lemma_lower > 0.0 &&
            sum < tr.lemma_lower * (1.0 - 1e-9) - 1e-12)
            throw InvariantViolation(
                "certified sampling lower bound failed in trial " + std::to_string(index) +
                ", function " + std::to_string(fi) + ": sum = " + fmt(sum) +
                " below the covering-count constant " + fmt(tr.lemma_lower));
    }
    tr.success = tr.infimum_ok && tr.covering_ok && tr.lower_ok && tr.upper_ok;
    return tr;
}

ExperimentResult ExperimentContext::run_at(long s, long trials) const {
    ExperimentResult out;
    out.config = cfg_;
    out.constants = constants_;
    out.params = params_;
    out.violations = violations_;
    out.K = K_;
    out.gram_error = basis_.gram_error;
    out.N_R = n_r_;
    out.s = s;
    out.A_upper = constants_.C1 * constants_.C1;
    const double rpow = std::pow(cfg_.R, -cfg_.generators.front().dim);
    out.sigma_sq_bound = static_cast<double>(s) * out.A_upper * rpow;
    out.B_bound = std::max(out.A_upper, rpow);
    out.bound = 1.0 - cfg_.epsilon;

    // Trials own disjoint derived streams, so they can run concurrently; the
    // reduction stays in trial-index order and the report is unaffected.
    out.trials.resize(static_cast<std::size_t>(std::max<long>(trials, 0)));
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const long workers = std::min<long>(trials, static_cast<long>(std::min(hw, 16u)));
    if (workers > 1) {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        std::mutex fail_mutex;
        std::exception_ptr failure;
        for (long w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const long t = next.fetch_add(1);
                    if (t >= trials) return;
                    try {
                        out.trials[static_cast<std::size_t>(t)] = run_trial(t, s);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(fail_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    } else {
        for (long t = 0; t < trials; ++t)
            out.trials[static_cast<std::size_t>(t)] = run_trial(t, s);
    }
    for (const auto& t : out.trials)
        if (t.success) ++out.successes;
    out.rate = trials > 0 ? static_cast<double>(out.successes) / static_cast<double>(trials)
                          : 0.0;
    return out;
}

ExperimentResult ExperimentContext::run() const { return run_at(s_, cfg_.trials); }

ExperimentResult run_experiment(const ExperimentConfig& config) {
    return ExperimentContext(config).run();
}

}  // namespace sis
