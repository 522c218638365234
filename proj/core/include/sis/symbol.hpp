#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "sis/filters.hpp"
#include "sis/grid.hpp"

namespace sis {

// Per-axis cross-correlation tables a_ij[m] = <p_i, T_m p_j> of the sampled
// 1-D profiles, in the discrete inner product. Because every multivariate
// generator is the tensor product of its own 1-D profile, the n-dimensional
// Gramian symbol factorizes entrywise across axes:
//   G(xi)_ij = prod_d A_ij(xi_d),  A_ij(xi) = sum_m a_ij[m] e^{-2 pi i m xi}.
class AutocorrTable {
public:
    AutocorrTable() = default;
    AutocorrTable(int r, long m_max);

    int r() const { return r_; }
    long m_max() const { return m_max_; }

    double& ref(int i, int j, long m) { return a_[idx(i, j, m)]; }
    double at(int i, int j, long m) const {
        if (m < -m_max_ || m > m_max_) return 0.0;
        return a_[idx(i, j, m)];
    }

    Eigen::MatrixXcd symbol1d(double xi) const;
    Eigen::MatrixXcd symbol(const std::array<double, 2>& xi, int dim) const;

private:
    size_t idx(int i, int j, long m) const {
        return static_cast<size_t>((i * r_ + j) * (2 * m_max_ + 1) + (m + m_max_));
    }
    int r_ = 0;
    long m_max_ = 0;
    std::vector<double> a_;
};

// Builds the table from sampled 1-D profiles (common grid step).
AutocorrTable cross_correlations(const std::vector<GridFunction>& profiles_1d);

struct SymbolExtrema {
    double min_eig = 0.0;
    double max_eig = 0.0;
};

// Eigenvalue extrema of the symbol over a uniform frequency grid with
// freq_points per axis.
SymbolExtrema symbol_extrema(const AutocorrTable& table, int dim, int freq_points);

enum class SpectralFunc { inverse, inv_sqrt, sqrt };

// Filters w[out][in] realizing H(xi) = func(G(xi)) as lattice convolutions:
// out_j = sum_i sum_m w[j][i][m] T_m phi_i. Coefficients are recovered by
// inverse FFT on the frequency grid and truncated at rel_cutoff of the peak.
std::vector<std::vector<LatticeFilter>> spectral_filters(const AutocorrTable& table, int dim,
                                                         SpectralFunc func, int freq_points,
                                                         double rel_cutoff);

}  // namespace sis
