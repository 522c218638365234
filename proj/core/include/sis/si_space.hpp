#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sis/filters.hpp"
#include "sis/generators.hpp"
#include "sis/grid.hpp"
#include "sis/symbol.hpp"

namespace sis {

// A function given by lattice-shift taps over the generators,
// f = sum_i sum_m taps[i][m] T_m phi_i, together with its grid samples.
// The taps give exact pointwise evaluation at arbitrary x; the samples give
// discrete inner products.
struct Profile {
    GridFunction samples;
    std::vector<LatticeFilter> taps;
};

// The generator tuple with its grid, sampled profiles, correlation table and
// Riesz diagnostics. Immutable after create(); all operations are pure.
class GeneratorSet {
public:
    // Performs the Riesz lower-bound check; throws RieszViolation below 1e-8.
    static GeneratorSet create(std::vector<GeneratorSpec> specs, GridSpec grid);
    // Skips the Riesz check; for diagnostics and tests of downstream guards.
    static GeneratorSet create_unchecked(std::vector<GeneratorSpec> specs, GridSpec grid);

    int dim() const { return dim_; }
    int r() const { return static_cast<int>(specs_.size()); }
    const GridSpec& grid() const { return grid_; }
    const std::vector<GeneratorSpec>& specs() const { return specs_; }
    const GeneratorSpec& spec(int i) const { return specs_.at(static_cast<size_t>(i)); }

    // Exact closed-form evaluation of generator i at x.
    double eval(int i, const Point& x) const { return spec(i)(x); }
    // The sampled 1-D profile of generator i.
    const GridFunction& profile_1d(int i) const { return profiles_1d_.at(static_cast<size_t>(i)); }
    // The sampled dim-D generator (tensor product for dim == 2).
    const GridFunction& sampled(int i) const { return sampled_.at(static_cast<size_t>(i)); }

    const AutocorrTable& autocorr() const { return autocorr_; }
    double riesz_lower() const { return riesz_lower_; }
    double riesz_upper() const { return riesz_upper_; }
    double max_support_radius() const { return max_support_radius_; }
    int freq_points() const { return freq_points_; }

private:
    static GeneratorSet build(std::vector<GeneratorSpec> specs, GridSpec grid, bool check);

    std::vector<GeneratorSpec> specs_;
    GridSpec grid_;
    int dim_ = 1;
    std::vector<GridFunction> profiles_1d_;
    std::vector<GridFunction> sampled_;
    AutocorrTable autocorr_;
    double riesz_lower_ = 0.0;
    double riesz_upper_ = 0.0;
    double max_support_radius_ = 0.0;
    int freq_points_ = 0;
};

struct DualGeneratorSet {
    std::vector<Profile> duals;  // canonical dual profiles, one per generator
    double h = 0.0;
    double truncation_radius = 0.0;  // sup-norm radius of the dual windows

    // Exact pointwise evaluation of dual j through its taps.
    double eval(const GeneratorSet& gen, int j, const Point& x) const;
};

// Realizes one filter output row as a profile:
// out = sum_i sum_m taps[i][m] T_m phi_i, sampled over the union window.
Profile assemble_profile(const GeneratorSet& gen, std::vector<LatticeFilter> taps);

// Canonical dual via Gramian-symbol inversion on the frequency grid.
DualGeneratorSet compute_dual(const GeneratorSet& gen);

// Max deviation of <phi_i, T_k dual_j> from delta_ij delta_k0 over
// ||k||_inf <= k_range (discrete inner products).
double biorthogonality_error(const GeneratorSet& gen, const DualGeneratorSet& dual, long k_range);

// f in V(Phi) as a finite coefficient array per generator.
class SIFunction {
public:
    SIFunction(const GeneratorSet* gens, std::vector<LatticeFilter> coeffs);

    const GeneratorSet& generators() const { return *gens_; }
    const std::vector<LatticeFilter>& coeffs() const { return coeffs_; }
    LatticeFilter& coeff(int i) { return coeffs_.at(static_cast<size_t>(i)); }
    const LatticeFilter& coeff(int i) const { return coeffs_.at(static_cast<size_t>(i)); }

    // Exact evaluation: finite sum over the coefficient window.
    double operator()(const Point& x) const;

    // Samples on the generating grid over the full support window.
    GridFunction to_grid(double extra_margin = 0.0) const;

    double coeff_sq_norm() const;

private:
    const GeneratorSet* gens_;
    std::vector<LatticeFilter> coeffs_;
};

// Pointwise synthesis at many points.
std::vector<double> synthesize(const SIFunction& f, const std::vector<Point>& points);

// Analysis back to coefficients: c^i_m = <f, T_m dual_i> by discrete
// quadrature. The window defaults to every shift whose dual support meets
// the sample window; an explicit window that cuts off coefficient mass
// beyond 1e-6 of the total triggers WindowTooSmall.
SIFunction project(const GridFunction& samples_of_f, const GeneratorSet& gen,
                   const DualGeneratorSet& dual,
                   std::optional<std::pair<CellIndex, CellIndex>> window = std::nullopt);

// The reproducing kernel v_x = sum_{i,k} phi_i(x-k) T_k dual_i as a grid
// function, and its norm ||v_x||_2.
GridFunction kernel_grid(const GeneratorSet& gen, const DualGeneratorSet& dual, const Point& x);
double kernel_norm(const GeneratorSet& gen, const DualGeneratorSet& dual, const Point& x);

struct EnergyReport {
    double in_cube = 0.0;
    double total = 0.0;
};

// ||Q_R f||^2 and ||f||^2 by quadrature.
EnergyReport energy_in_cube(const SIFunction& f, double R);

// Random coefficients (standard normal) on the window [-w, w]^dim per
// generator, normalized to unit discrete L2 norm. Deterministic in key.
SIFunction random_si_function(const GeneratorSet& gen, long coeff_radius, std::uint64_t key);

}  // namespace sis
