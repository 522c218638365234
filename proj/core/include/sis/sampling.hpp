#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sis/constants.hpp"
#include "sis/localization.hpp"

namespace sis {

// Stream index reserved for the constants pipeline; trial indices never
// reach this value, so constants and trials draw from disjoint streams.
inline constexpr std::uint64_t kConstantsStream = 0xFFFFFFFF00000001ULL;

struct SampleSet {
    double R = 0.0;
    long s = 0;
    std::uint64_t key = 0;
    int dim = 1;
    std::vector<Point> points;
};

// i.i.d. uniform draws on C_R = [-R/2, R/2]^dim. Point j, coordinate d
// consumes counter j*dim + d of stream `key`; regeneration from
// (R, s, key, dim) is bit-identical.
SampleSet draw_samples(double R, long s, std::uint64_t key, int dim);

// Largest number of samples falling in a common cell k + [-1/2, 1/2)^dim.
long covering_index(const SampleSet& samples);

// Probability bound for {covering index > a*s}:
// (R+2)^dim exp(-s (a log(a R^dim) - (a - R^-dim))). Requires R >= 2 and
// a > R^-dim.
double covering_tail_bound(double a, long s, double R, int dim);

struct TMatrixSum {
    int N = 0;
    long s = 0;
    Eigen::MatrixXd sum;  // sum_j psi(x_j) psi(x_j)^T, leading N eigenfunctions
};

TMatrixSum build_T_sum(const EigenfunctionEvaluator& eval, int N, const SampleSet& samples);

// lambda_min((1/s) sum_j T_j): the exact infimum of the normalized sampling
// sum over unit-norm functions spanned by the leading eigenfunctions.
double exact_infimum(const TMatrixSum& t);

struct BernsteinReport {
    int N = 0;
    long mc = 0;
    double max_mean_dev_se = 0.0;  // worst |mean - R^-dim Lambda| in standard-error units
    double max_sample_norm = 0.0;  // max_j ||T_j - R^-dim Lambda||
    double norm_bound = 0.0;       // max(C1^2, R^-dim)
    double sigma_sq_bound = 0.0;   // s C1^2 R^-dim
    double tail_value = 0.0;       // N exp(-nu^2 s / (C1^2 R^dim (1 + nu/3)))
};

// Monte Carlo check of the concentration ingredients: the entrywise mean of
// T must match R^-dim Lambda within 4 standard errors and every sample term
// must respect the norm bound; violations throw DiagnosticFailure naming
// the bound.
BernsteinReport bernstein_diagnostics(const EigenfunctionEvaluator& eval, const Spectrum& spec,
                                      int N, long mc, std::uint64_t key, double nu, double C1,
                                      long s);

struct TestFunction {
    std::vector<int> indices;  // eigenpairs with lambda >= 1 - delta
    Eigen::VectorXd coeffs;    // unit-norm coefficients over those eigenpairs
    double cube_ratio = 0.0;   // sum_n lambda_n a_n^2 = ||Q_R f||^2
};

// Random unit-norm function of the (1 - delta)-concentrated eigenspace.
// Throws EmptyEigenspace when no eigenvalue reaches 1 - delta.
TestFunction generate_test_function(const Spectrum& spec, double delta, std::uint64_t key);

struct ExperimentConfig {
    std::vector<GeneratorSpec> generators;
    GridSpec grid;
    double R = 4.0;
    double delta = 0.01;
    double nu = 0.3;
    double epsilon = 0.1;
    double gamma = 0.5;
    long trials = 20;
    long samples_override = 0;  // 0 selects the planned minimum count
    int funcs_per_trial = 20;
    std::uint64_t seed = 0;
    bool force = false;  // run even when planning constraints fail
    int c2_trials = 200;
};

struct TrialResult {
    long index = 0;
    std::uint64_t stream = 0;
    double lambda_min = 0.0;          // of (1/s) sum T_j
    double lambda_min_shifted = 0.0;  // of (1/s) sum T_j - R^-dim Lambda_N
    long covering = 0;
    bool infimum_ok = false;   // lambda_min_shifted >= -nu R^-dim
    bool covering_ok = false;  // covering <= 3 s R^-dim
    double min_ratio = 0.0;    // min over test functions of sum / (s R^-dim)
    double max_ratio = 0.0;
    double lemma_lower = 0.0;  // data-driven lower constant from the covering count
    bool lower_ok = true;
    bool upper_ok = true;
    bool success = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    ConstantsReport constants;
    TheoremParams params;
    std::vector<std::string> violations;  // nonempty only for forced runs
    long K = 0;
    double gram_error = 0.0;
    int N_R = 0;
    long s = 0;
    double A_upper = 0.0;        // C1^2, the per-sample sup-norm constant
    double sigma_sq_bound = 0.0; // s C1^2 R^-dim, the Bernstein variance proxy
    double B_bound = 0.0;        // max(C1^2, R^-dim), the per-term norm bound
    std::vector<TrialResult> trials;
    long successes = 0;
    double rate = 0.0;
    double bound = 0.0;  // 1 - epsilon
};

// The full pipeline (generators, dual, constants, spectrum, evaluator) built
// once; trials and sample-count sweeps then reuse it.
class ExperimentContext {
public:
    explicit ExperimentContext(const ExperimentConfig& config);

    const ExperimentConfig& config() const { return cfg_; }
    const GeneratorSet& generators() const { return *gen_; }
    const ConstantsReport& constants() const { return constants_; }
    const TheoremParams& params() const { return params_; }
    const std::vector<std::string>& violations() const { return violations_; }
    const OrthonormalBasisSet& basis() const { return basis_; }
    const Spectrum& spectrum() const { return spectrum_; }
    const EigenfunctionEvaluator& evaluator() const { return *evaluator_; }
    int N_R() const { return n_r_; }
    long planned_samples() const { return s_; }

    TrialResult run_trial(long index, long s) const;
    ExperimentResult run_at(long s, long trials) const;
    ExperimentResult run() const;  // planned sample count, config trial count

private:
    ExperimentConfig cfg_;
    std::unique_ptr<GeneratorSet> gen_;  // stable address for the evaluator
    DualGeneratorSet dual_;
    ConstantsReport constants_;
    TheoremParams params_;
    std::vector<std::string> violations_;
    OrthonormalBasisSet basis_;
    long K_ = 0;
    Spectrum spectrum_;
    std::unique_ptr<EigenfunctionEvaluator> evaluator_;
    int n_r_ = 0;
    long s_ = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace sis
