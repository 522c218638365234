#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sis/si_space.hpp"

namespace sis {

// Every constant of the sampling theorem for one generator set.
struct ConstantsReport {
    int dim = 1;
    int r = 1;

    // Frame bounds of the shift system and of its canonical dual.
    double C0 = 0.0;       // upper frame bound
    double A_frame = 0.0;  // lower frame bound (diagnostic)
    double C0_tilde = 0.0; // upper frame bound of the duals (= 1/A_frame)
    double frame_grid_self_check = 0.0;  // extrema drift when doubling the frequency grid

    // Point-evaluation constant sup_x ||v_x||_2 and its amalgam upper bound.
    double C1 = 0.0;
    double C1_amalgam_bound = 0.0;

    // Oscillation constant and the sampling constant C2 = (M+1)^2.
    double M_osc = 0.0;
    double C2 = 0.0;

    // Tail decay ||phi_i (1 - chi_{C_R})||_2^2 <= C3 R^-alpha.
    double C3 = 0.0;
    double alpha = 0.0;
    bool compact_support = false;   // all tail energies below 1e-14
    bool decay_single_point = false;  // only one positive tail energy; alpha = n by convention
    std::vector<double> tail_R;
    std::vector<double> tail_energy;

    // Derived quantities.
    double alpha_prime = 0.0;
    double beta = 0.0;
    double R0 = 0.0;
};

// Experiment planning output; all fields of the sample-count recipe.
struct TheoremParams {
    double R = 0.0;
    double delta = 0.0;
    double nu = 0.0;
    double epsilon = 0.0;
    double gamma = 0.5;
    long s_min = 0;
    double A_lower = 0.0;    // 1/2 - delta - nu - 12 delta C2 (gamma = 1/2 form)
    double N0_budget = 0.0;  // 3 * s_min * R^-n
};

// Symbol-eigenvalue extrema over the frequency grid, with a doubled-grid
// self-check (drift must stay below 1e-6). Throws RieszViolation if the
// lower bound is degenerate.
struct FrameBounds {
    double A_frame = 0.0;
    double C0 = 0.0;
    double self_check = 0.0;
};
FrameBounds frame_bounds(const GeneratorSet& gen);

struct C1Estimate {
    double direct = 0.0;         // grid sup of ||v_x|| with local refinement
    double amalgam_bound = 0.0;  // (C0 sum_i ||phi_i||_W(L1)^2)^(1/2)
};
C1Estimate estimate_C1(const GeneratorSet& gen, const DualGeneratorSet& dual);

// ||v_x||_2 via the pointwise kernel identity ||v_x||^2 = v_x(x)
// = sum_{i,k} dual_i(x-k) phi_i(x-k); cheap enough for dense sups.
double kernel_norm_at(const GeneratorSet& gen, const DualGeneratorSet& dual, const Point& x);

struct C2Estimate {
    double M_osc = 0.0;
    double C2 = 0.0;
};
// M as max over `trials` random unit-norm functions of ||osc f||/||f||;
// the osc sup over ||y||_inf <= 1/2 is evaluated by grid search.
C2Estimate estimate_C2(const GeneratorSet& gen, int trials, std::uint64_t seed);

// Sliding-window oscillation osc f(x) = sup_{||y||_inf <= 1/2} |f(x)-f(x+y)|
// on the grid; the input window must already include a half-unit margin.
GridFunction osc_grid(const GridFunction& f);

struct DecayFit {
    double C3 = 0.0;
    double alpha = 0.0;
    bool compact_support = false;
    bool single_point = false;
    std::vector<double> R;
    std::vector<double> t;
};
DecayFit fit_decay(const GeneratorSet& gen);

// Fills alpha_prime, beta, R0 from the measured fields; throws OverflowError
// on non-finite beta.
void derived_constants(ConstantsReport& report);

// Full pipeline: frame bounds, C1, C2, decay, derived constants.
ConstantsReport compute_constants(const GeneratorSet& gen, const DualGeneratorSet& dual,
                                  std::uint64_t seed, int c2_trials = 200);

// Names of violated planning constraints (empty when the plan is valid).
std::vector<std::string> check_constraints(const ConstantsReport& report,
                                           const TheoremParams& params);

// Sample-count planning. The checked form throws ConstraintViolation naming
// every violated inequality; the unchecked form returns them for callers
// that run anyway (forced experiments).
TheoremParams plan_experiment(const ConstantsReport& report, double R, double delta, double nu,
                              double epsilon, double gamma = 0.5);
std::pair<TheoremParams, std::vector<std::string>> plan_experiment_unchecked(
    const ConstantsReport& report, double R, double delta, double nu, double epsilon,
    double gamma = 0.5);

}  // namespace sis
