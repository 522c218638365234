#include "sis/symbol.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "sis/errors.hpp"

namespace sis {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Cplx = std::complex<double>;

// One forward/backward DFT, length n; FFTW with std::complex buffers.
void dft(std::vector<Cplx>& data, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE);
    if (!plan) throw InvariantViolation("fftw plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

void dft2(std::vector<Cplx>& data, int n, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, ptr, ptr, sign, FFTW_ESTIMATE);
    if (!plan) throw InvariantViolation("fftw plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

double apply_func(SpectralFunc func, double lambda, double floor_eig) {
    if (lambda < floor_eig)
        throw NearSingularSymbol("symbol eigenvalue " + std::to_string(lambda) +
                                 " below invertibility floor while building spectral filter");
    switch (func) {
        case SpectralFunc::inverse: return 1.0 / lambda;
        case SpectralFunc::inv_sqrt: return 1.0 / std::sqrt(lambda);
        case SpectralFunc::sqrt: return std::sqrt(lambda);
    }
    return lambda;
}

// Symbol values A_ij(k/F) for all k via one length-F DFT per pair.
std::vector<std::vector<Cplx>> symbol_grid_1d(const AutocorrTable& t, int F) {
    if (2 * t.m_max() + 1 > F)
        throw InvariantViolation("frequency grid too coarse for the correlation table");
    const int r = t.r();
    std::vector<std::vector<Cplx>> vals(static_cast<size_t>(r) * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            std::vector<Cplx> buf(F, Cplx(0.0, 0.0));
            for (long m = -t.m_max(); m <= t.m_max(); ++m) {
                long b = ((m % F) + F) % F;
                buf[static_cast<size_t>(b)] += t.at(i, j, m);
            }
            dft(buf, FFTW_FORWARD);
            vals[static_cast<size_t>(i) * r + j] = std::move(buf);
        }
    return vals;
}

Eigen::MatrixXcd gather(const std::vector<std::vector<Cplx>>& vals, int r, size_t k) {
    Eigen::MatrixXcd G(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) G(i, j) = vals[static_cast<size_t>(i) * r + j][k];
    return G;
}

}  // namespace

AutocorrTable::AutocorrTable(int r, long m_max) : r_(r), m_max_(m_max) {
    a_.assign(static_cast<size_t>(r) * r * (2 * m_max + 1), 0.0);
}

Eigen::MatrixXcd AutocorrTable::symbol1d(double xi) const {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(r_, r_);
    for (long m = -m_max_; m <= m_max_; ++m) {
        Cplx e = std::polar(1.0, -kTwoPi * double(m) * xi);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) G(i, j) += at(i, j, m) * e;
    }
    return G;
}

Eigen::MatrixXcd AutocorrTable::symbol(const std::array<double, 2>& xi, int dim) const {
    Eigen::MatrixXcd G = symbol1d(xi[0]);
    if (dim == 2) G = G.cwiseProduct(symbol1d(xi[1]));
    return G;
}

AutocorrTable cross_correlations(const std::vector<GridFunction>& profiles_1d) {
    const int r = static_cast<int>(profiles_1d.size());
    const double h = profiles_1d.at(0).h();
    const long steps = std::lround(1.0 / h);
    long m_max = 0;
    for (const auto& p : profiles_1d) {
        if (p.dim() != 1) throw InvariantViolation("cross_correlations needs 1-D profiles");
        long width = p.hi()[0] - p.lo()[0] + 1;
        m_max = std::max(m_max, (2 * width + steps - 1) / steps);
    }
    AutocorrTable t(r, m_max);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (long m = -m_max; m <= m_max; ++m)
                t.ref(i, j, m) = shifted_inner(profiles_1d[i], {0, 0}, profiles_1d[j], {m * steps, 0});
    return t;
}

SymbolExtrema symbol_extrema(const AutocorrTable& table, int dim, int freq_points) {
    const int r = table.r();
    auto vals = symbol_grid_1d(table, freq_points);
    SymbolExtrema ext;
    if (r == 1) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        for (const Cplx& v : vals[0]) {
            mn = std::min(mn, v.real());
            mx = std::max(mx, v.real());
        }
        if (dim == 1) return {mn, mx};
        // Scalar tensor symbol G(xi1, xi2) = A(xi1) A(xi2): extrema are
        // attained at products of the 1-D extrema.
        double cand[3] = {mn * mn, mn * mx, mx * mx};
        return {*std::min_element(cand, cand + 3), *std::max_element(cand, cand + 3)};
    }
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    if (dim == 1) {
        for (size_t k = 0; k < static_cast<size_t>(freq_points); ++k) {
            es.compute(gather(vals, r, k), Eigen::EigenvaluesOnly);
            mn = std::min(mn, es.eigenvalues().minCoeff());
            mx = std::max(mx, es.eigenvalues().maxCoeff());
        }
        return {mn, mx};
    }
    for (size_t k1 = 0; k1 < static_cast<size_t>(freq_points); ++k1) {
        Eigen::MatrixXcd G1 = gather(vals, r, k1);
        for (size_t k2 = 0; k2 < static_cast<size_t>(freq_points); ++k2) {
            Eigen::MatrixXcd G = G1.cwiseProduct(gather(vals, r, k2));
            es.compute(G, Eigen::EigenvaluesOnly);
            mn = std::min(mn, es.eigenvalues().minCoeff());
            mx = std::max(mx, es.eigenvalues().maxCoeff());
        }
    }
    return {mn, mx};
}

std::vector<std::vector<LatticeFilter>> spectral_filters(const AutocorrTable& table, int dim,
                                                         SpectralFunc func, int freq_points,
                                                         double rel_cutoff) {
    const int r = table.r();
    const int F = freq_points;
    constexpr double kFloor = 1e-12;
    std::vector<std::vector<LatticeFilter>> out(static_cast<size_t>(r),
                                                std::vector<LatticeFilter>(static_cast<size_t>(r)));

    if (dim == 1 || r == 1) {
        auto vals = symbol_grid_1d(table, F);
        // H(k) = func(G(k)) pointwise on the frequency grid.
        std::vector<Eigen::MatrixXcd> H(static_cast<size_t>(F));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
        for (size_t k = 0; k < static_cast<size_t>(F); ++k) {
            if (r == 1) {
                double lambda = vals[0][k].real();
                Eigen::MatrixXcd Hk(1, 1);
                Hk(0, 0) = apply_func(func, lambda, kFloor);
                H[k] = Hk;
            } else {
                es.compute(gather(vals, r, k));
                Eigen::VectorXd fl(r);
                for (int i = 0; i < r; ++i) fl(i) = apply_func(func, es.eigenvalues()(i), kFloor);
                H[k] = es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
            }
        }
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i) {
                std::vector<Cplx> buf(static_cast<size_t>(F));
                for (size_t k = 0; k < static_cast<size_t>(F); ++k) buf[k] = H[k](j, i);
                dft(buf, FFTW_BACKWARD);
                std::vector<double> coeffs(static_cast<size_t>(F));
                double max_im = 0.0;
                for (int b = 0; b < F; ++b) {
                    long m = b < F / 2 ? b : b - F;
                    Cplx c = buf[static_cast<size_t>(b)] / double(F);
                    coeffs[static_cast<size_t>(m + F / 2)] = c.real();
                    max_im = std::max(max_im, std::fabs(c.imag()));
                }
                if (max_im > 1e-9)
                    throw InvariantViolation("spectral filter has non-real coefficients");
                LatticeFilter f1 = LatticeFilter::from_1d(std::move(coeffs), -F / 2).truncated(rel_cutoff);
                out[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                    dim == 1 ? f1 : LatticeFilter::outer(f1, f1);
            }
        return out;
    }

    // dim == 2 with r >= 2: matrix functions do not factor across axes, so
    // work on the full 2-D frequency grid.
    auto vals = symbol_grid_1d(table, F);
    std::vector<std::vector<Cplx>> Hgrid(static_cast<size_t>(r) * r,
                                         std::vector<Cplx>(static_cast<size_t>(F) * F));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (size_t k1 = 0; k1 < static_cast<size_t>(F); ++k1) {
        Eigen::MatrixXcd G1 = gather(vals, r, k1);
        for (size_t k2 = 0; k2 < static_cast<size_t>(F); ++k2) {
            Eigen::MatrixXcd G = G1.cwiseProduct(gather(vals, r, k2));
            es.compute(G);
            Eigen::VectorXd fl(r);
            for (int i = 0; i < r; ++i) fl(i) = apply_func(func, es.eigenvalues()(i), kFloor);
            Eigen::MatrixXcd Hk = es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b)
                    Hgrid[static_cast<size_t>(a) * r + b][k1 * F + k2] = Hk(a, b);
        }
    }
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) {
            std::vector<Cplx> buf = Hgrid[static_cast<size_t>(j) * r + i];
            dft2(buf, F, FFTW_BACKWARD);
            LatticeFilter f = LatticeFilter::zeros(2, {-F / 2, -F / 2}, {F / 2 - 1, F / 2 - 1});
            double max_im = 0.0;
            for (int b1 = 0; b1 < F; ++b1)
                for (int b2 = 0; b2 < F; ++b2) {
                    long m1 = b1 < F / 2 ? b1 : b1 - F;
                    long m2 = b2 < F / 2 ? b2 : b2 - F;
                    Cplx c = buf[static_cast<size_t>(b1) * F + b2] / double(F * F);
                    f.ref(m1, m2) = c.real();
                    max_im = std::max(max_im, std::fabs(c.imag()));
                }
            if (max_im > 1e-9) throw InvariantViolation("spectral filter has non-real coefficients");
            out[static_cast<size_t>(j)][static_cast<size_t>(i)] = f.truncated(rel_cutoff);
        }
    return out;
}

}  // namespace sis
