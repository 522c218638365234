#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sis/si_space.hpp"

namespace sis {

// Row layout for shift-indexed coefficient vectors and matrices:
// row = i * (2K+1)^dim + lex(k + K), generator-major, lexicographic shifts.
struct ShiftIndexMap {
    int dim = 1;
    int r = 1;
    long K = 0;

    long per_gen() const;
    long rows() const;
    long row_of(int i, const CellIndex& k) const;
    std::pair<int, CellIndex> label_of(long row) const;
};

// Orthonormalized shift basis e_1..e_r obtained by filtering the generators
// with the inverse square root of the Gramian symbol. `gram_error` is the
// measured sup deviation of the shift Gramian of the e's from the identity.
struct OrthonormalBasisSet {
    int dim = 1;
    double h = 0.0;
    std::vector<Profile> basis;
    double truncation_radius = 0.0;
    double gram_error = 0.0;
    int polish_passes = 0;

    int r() const { return static_cast<int>(basis.size()); }
    // Exact pointwise evaluation of e_j through its taps.
    double eval(const GeneratorSet& gen, int j, const Point& x) const;
};

OrthonormalBasisSet orthonormalize(const GeneratorSet& gen);

// Truncated localization operator: the Gramian of cube restrictions
// M[(i,k),(j,k')] = <Q_R T_k e_i, Q_R T_k' e_j> ... equivalently
// <Q_R T_k e_i, T_k' e_j>, over shifts ||k||_inf <= K.
struct LocalizationMatrix {
    double R = 0.0;
    ShiftIndexMap map;
    Eigen::MatrixXd M;
};

// Smallest admissible truncation and the default (one mesh coarser than
// needed for safety).
long min_truncation(const OrthonormalBasisSet& basis, double R);
long default_truncation(const OrthonormalBasisSet& basis, double R);

// K < 0 selects default_truncation; explicit K below the minimum throws
// TruncationTooSmall.
LocalizationMatrix build_localization(const OrthonormalBasisSet& basis, double R, long K = -1);

// Eigenpairs of the localization matrix, descending, with eigenvalues
// clipped to [0, 1]. Raw values may leave [0,1] by at most 1e-8; larger
// excursions are structural failures and throw.
struct Spectrum {
    double R = 0.0;
    ShiftIndexMap map;
    Eigen::VectorXd lambdas;
    Eigen::MatrixXd vectors;  // column n pairs with lambdas[n]
    double raw_min = 0.0;
    double raw_max = 0.0;
    int N_half = 0;  // count of eigenvalues >= 1/2, ties included
};

Spectrum eigendecompose(const LocalizationMatrix& A);
int count_half(const Spectrum& spec);

// Pointwise evaluation of eigenfunction `idx` via the basis taps.
double eval_eigenfunction(const GeneratorSet& gen, const OrthonormalBasisSet& basis,
                          const Spectrum& spec, int idx, const Point& x);

// Precomputed generator-basis taps for the top `count` eigenfunctions; makes
// batched pointwise evaluation cheap (shared generator evaluations).
class EigenfunctionEvaluator {
public:
    EigenfunctionEvaluator(const GeneratorSet& gen, const OrthonormalBasisSet& basis,
                           const Spectrum& spec, int count);

    int count() const { return static_cast<int>(taps_.size()); }
    double eval(int n, const Point& x) const;
    // Writes all kept eigenfunctions at x into out[0..count).
    void eval_all(const Point& x, double* out) const;
    const std::vector<LatticeFilter>& taps(int n) const;
    const GeneratorSet& generators() const { return *gen_; }

private:
    const GeneratorSet* gen_;
    std::vector<std::vector<LatticeFilter>> taps_;
};

// Coefficients <f, T_k e_i> of a sampled function over the rows of `map`.
Eigen::VectorXd basis_coefficients(const OrthonormalBasisSet& basis, const ShiftIndexMap& map,
                                   const GridFunction& f);

// Energy split of a coefficient vector against the leading N eigenpairs:
// captured = ||E_N f||^2, residual = ||f||^2 - captured, and the
// cube-weighted part  sum_{n<N} lambda_n <f, psi_n>^2.
struct ProjectionSplit {
    double captured = 0.0;
    double residual = 0.0;
    double cube_weighted = 0.0;
};

ProjectionSplit projection_split(const Eigen::VectorXd& coeffs, const Spectrum& spec, int N);

}  // namespace sis
