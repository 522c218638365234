#include "sis/localization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sis/errors.hpp"
#include "sis/symbol.hpp"

namespace sis {

namespace {

int next_pow2_at_least(long n) {
    int f = 1;
    while (f < n) f *= 2;
    return f;
}

// Applies a 1-D lattice filter to a 1-D sampled base profile.
GridFunction assemble_1d(const GridFunction& base, const LatticeFilter& t, long steps) {
    GridFunction out = GridFunction::zeros(1, base.h(), {t.lo[0] * steps + base.lo()[0], 0},
                                           {t.hi[0] * steps + base.hi()[0], 0});
    t.for_each([&](long m0, long, double w) {
        if (w != 0.0) out.add_scaled_shifted(base, {m0 * steps, 0}, w);
    });
    return out;
}

double radius_of_window(const GridFunction& g, int dim) {
    double rad = 0.0;
    for (int d = 0; d < dim; ++d) {
        rad = std::max(rad, std::fabs(double(g.lo()[d]) * g.h()));
        rad = std::max(rad, std::fabs(double(g.hi()[d] + 1) * g.h()));
    }
    return rad;
}

struct OneDimOrtho {
    std::vector<std::vector<LatticeFilter>> filters;  // [out][in], 1-D
    std::vector<GridFunction> profiles;
    double gram_error = 0.0;
    int passes = 0;
};

// Inverse-square-root filtering against the per-axis correlation table, with
// measurement and up to two correction passes. `bases` are the sampled 1-D
// profiles the filters act on.
OneDimOrtho orthonormalize_1d(const AutocorrTable& table, const std::vector<GridFunction>& bases,
                              long steps) {
    const int r = table.r();
    OneDimOrtho out;
    out.filters = spectral_filters(table, 1, SpectralFunc::inv_sqrt, 4096, 1e-12);

    for (int pass = 0; pass < 3; ++pass) {
        out.profiles.clear();
        for (int j = 0; j < r; ++j) {
            GridFunction acc;
            bool first = true;
            for (int i = 0; i < r; ++i) {
                GridFunction part = assemble_1d(bases[static_cast<size_t>(i)],
                                                out.filters[static_cast<size_t>(j)]
                                                           [static_cast<size_t>(i)],
                                                steps);
                if (first) {
                    acc = std::move(part);
                    first = false;
                } else {
                    // Merge windows by re-accumulating into a union window.
                    CellIndex lo{std::min(acc.lo()[0], part.lo()[0]), 0};
                    CellIndex hi{std::max(acc.hi()[0], part.hi()[0]), 0};
                    GridFunction merged = GridFunction::zeros(1, acc.h(), lo, hi);
                    merged.add_scaled_shifted(acc, {0, 0}, 1.0);
                    merged.add_scaled_shifted(part, {0, 0}, 1.0);
                    acc = std::move(merged);
                }
            }
            out.profiles.push_back(std::move(acc));
        }

        const AutocorrTable etab = cross_correlations(out.profiles);
        const int freq = next_pow2_at_least(std::max<long>(4096, 2 * etab.m_max() + 2));
        const SymbolExtrema ext = symbol_extrema(etab, 1, freq);
        out.gram_error = std::max(ext.max_eig - 1.0, 1.0 - ext.min_eig);
        out.passes = pass;
        if (out.gram_error <= 5e-9 || pass == 2) break;

        // One more inverse-square-root step against the measured Gramian.
        auto corr = spectral_filters(etab, 1, SpectralFunc::inv_sqrt, freq, 1e-12);
        std::vector<std::vector<LatticeFilter>> next(static_cast<size_t>(r));
        for (int j = 0; j < r; ++j) {
            next[static_cast<size_t>(j)].resize(static_cast<size_t>(r));
            for (int i = 0; i < r; ++i) {
                LatticeFilter sum;
                bool first = true;
                for (int mid = 0; mid < r; ++mid) {
                    LatticeFilter term = convolve1d(
                        corr[static_cast<size_t>(j)][static_cast<size_t>(mid)],
                        out.filters[static_cast<size_t>(mid)][static_cast<size_t>(i)]);
                    if (first) {
                        sum = std::move(term);
                        first = false;
                    } else {
                        CellIndex lo{std::min(sum.lo[0], term.lo[0]), 0};
                        CellIndex hi{std::max(sum.hi[0], term.hi[0]), 0};
                        LatticeFilter merged = LatticeFilter::zeros(1, lo, hi);
                        sum.for_each([&](long k0, long, double w) { merged.ref(k0) += w; });
                        term.for_each([&](long k0, long, double w) { merged.ref(k0) += w; });
                        sum = std::move(merged);
                    }
                }
                next[static_cast<size_t>(j)][static_cast<size_t>(i)] = sum.truncated(1e-14);
            }
        }
        out.filters = std::move(next);
    }
    return out;
}

}  // namespace

long ShiftIndexMap::per_gen() const {
    const long side = 2 * K + 1;
    return dim == 2 ? side * side : side;
}

long ShiftIndexMap::rows() const { return static_cast<long>(r) * per_gen(); }

long ShiftIndexMap::row_of(int i, const CellIndex& k) const {
    if (i < 0 || i >= r) throw IndexOutOfRange("generator index " + std::to_string(i));
    for (int d = 0; d < dim; ++d)
        if (k[d] < -K || k[d] > K)
            throw IndexOutOfRange("shift " + std::to_string(k[d]) + " outside [-K, K]");
    const long side = 2 * K + 1;
    const long lex = (dim == 2) ? (k[0] + K) * side + (k[1] + K) : (k[0] + K);
    return static_cast<long>(i) * per_gen() + lex;
}

std::pair<int, CellIndex> ShiftIndexMap::label_of(long row) const {
    if (row < 0 || row >= rows()) throw IndexOutOfRange("row " + std::to_string(row));
    const long pg = per_gen();
    const int i = static_cast<int>(row / pg);
    long lex = row % pg;
    const long side = 2 * K + 1;
    CellIndex k{0, 0};
    if (dim == 2) {
        k[0] = lex / side - K;
        k[1] = lex % side - K;
    } else {
        k[0] = lex - K;
    }
    return {i, k};
}

double OrthonormalBasisSet::eval(const GeneratorSet& gen, int j, const Point& x) const {
    const Profile& p = basis.at(static_cast<size_t>(j));
    double acc = 0.0;
    for (int i = 0; i < gen.r(); ++i) {
        const LatticeFilter& taps = p.taps.at(static_cast<size_t>(i));
        if (taps.empty()) continue;
        const double rad = gen.spec(i).support_radius();
        long a0 = std::max(taps.lo[0], static_cast<long>(std::ceil(x[0] - rad)));
        long b0 = std::min(taps.hi[0], static_cast<long>(std::floor(x[0] + rad)));
        long a1 = taps.lo[1], b1 = taps.hi[1];
        if (gen.dim() == 2) {
            a1 = std::max(taps.lo[1], static_cast<long>(std::ceil(x[1] - rad)));
            b1 = std::min(taps.hi[1], static_cast<long>(std::floor(x[1] + rad)));
        }
        for (long m0 = a0; m0 <= b0; ++m0)
            for (long m1 = a1; m1 <= b1; ++m1) {
                double w = taps.at(m0, m1);
                if (w == 0.0) continue;
                acc += w * gen.eval(i, {x[0] - double(m0), x[1] - double(m1)});
            }
    }
    return acc;
}

OrthonormalBasisSet orthonormalize(const GeneratorSet& gen) {
    if (gen.riesz_lower() < 1e-8)
        throw NearSingularSymbol("minimal symbol eigenvalue " +
                                 std::to_string(gen.riesz_lower()) + " is below 1e-8");
    const int dim = gen.dim();
    const int r = gen.r();
    const long steps = gen.grid().steps_per_unit();

    OrthonormalBasisSet out;
    out.dim = dim;
    out.h = gen.grid().h;

    if (dim == 1) {
        std::vector<GridFunction> bases;
        for (int i = 0; i < r; ++i) bases.push_back(gen.profile_1d(i));
        OneDimOrtho od = orthonormalize_1d(gen.autocorr(), bases, steps);
        for (int j = 0; j < r; ++j) {
            Profile p = assemble_profile(gen, od.filters[static_cast<size_t>(j)]);
            out.truncation_radius = std::max(out.truncation_radius,
                                             radius_of_window(p.samples, 1));
            out.basis.push_back(std::move(p));
        }
        out.gram_error = od.gram_error;
        out.polish_passes = od.passes;
        return out;
    }

    if (r == 1) {
        // Tensor grid: orthonormalize the single 1-D profile and square it.
        std::vector<GridFunction> bases{gen.profile_1d(0)};
        OneDimOrtho od = orthonormalize_1d(gen.autocorr(), bases, steps);
        const LatticeFilter& t1 = od.filters[0][0];
        Profile p;
        p.taps.push_back(LatticeFilter::outer(t1, t1));
        p.samples = GridFunction::outer(od.profiles[0], od.profiles[0]);
        out.truncation_radius = radius_of_window(p.samples, 2);
        out.basis.push_back(std::move(p));
        out.gram_error = 2.0 * od.gram_error + od.gram_error * od.gram_error;
        out.polish_passes = od.passes;
        return out;
    }

    // Full 2-D filtering; the Gramian defect is bounded by the worst
    // Gershgorin row sum of the measured correlation table.
    auto filters = spectral_filters(gen.autocorr(), 2, SpectralFunc::inv_sqrt, 512, 1e-12);
    for (int j = 0; j < r; ++j) {
        Profile p = assemble_profile(gen, filters[static_cast<size_t>(j)]);
        out.truncation_radius = std::max(out.truncation_radius, radius_of_window(p.samples, 2));
        out.basis.push_back(std::move(p));
    }
    double worst = 0.0;
    for (int i = 0; i < r; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < r; ++j) {
            const GridFunction& a = out.basis[static_cast<size_t>(i)].samples;
            const GridFunction& b = out.basis[static_cast<size_t>(j)].samples;
            long span0 = (a.count(0) + b.count(0)) / steps + 1;
            long span1 = (a.count(1) + b.count(1)) / steps + 1;
            for (long k0 = -span0; k0 <= span0; ++k0)
                for (long k1 = -span1; k1 <= span1; ++k1) {
                    const double v = shifted_inner(a, {0, 0}, b, {k0 * steps, k1 * steps});
                    const double want = (i == j && k0 == 0 && k1 == 0) ? 1.0 : 0.0;
                    row_sum += std::fabs(v - want);
                }
        }
        worst = std::max(worst, row_sum);
    }
    out.gram_error = worst;
    return out;
}

long min_truncation(const OrthonormalBasisSet& basis, double R) {
    return static_cast<long>(std::ceil(R / 2.0)) +
           static_cast<long>(std::ceil(basis.truncation_radius)) + 1;
}

long default_truncation(const OrthonormalBasisSet& basis, double R) {
    return min_truncation(basis, R) + 1;
}

LocalizationMatrix build_localization(const OrthonormalBasisSet& basis, double R, long K) {
    if (!(R > 0.0)) throw DomainError("cube side R must be positive");
    if (K < 0) K = default_truncation(basis, R);
    const long k_min = min_truncation(basis, R);
    if (K < k_min)
        throw TruncationTooSmall("shift truncation K = " + std::to_string(K) +
                                 " is below the admissible minimum " + std::to_string(k_min) +
                                 " for R = " + std::to_string(R));

    LocalizationMatrix out;
    out.R = R;
    out.map = ShiftIndexMap{basis.dim, basis.r(), K};
    const long steps = std::lround(1.0 / basis.h);
    const long rows = out.map.rows();
    out.M = Eigen::MatrixXd::Zero(rows, rows);
    for (long a = 0; a < rows; ++a) {
        auto [i, k] = out.map.label_of(a);
        const GridFunction& ei = basis.basis[static_cast<size_t>(i)].samples;
        const CellIndex sa{k[0] * steps, k[1] * steps};
        for (long b = a; b < rows; ++b) {
            auto [j, kp] = out.map.label_of(b);
            const GridFunction& ej = basis.basis[static_cast<size_t>(j)].samples;
            const CellIndex sb{kp[0] * steps, kp[1] * steps};
            const double v = cube_shifted_inner(ei, sa, ej, sb, R);
            out.M(a, b) = v;
            out.M(b, a) = v;
        }
    }
    return out;
}

Spectrum eigendecompose(const LocalizationMatrix& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A.M);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("eigendecomposition of the localization matrix did not converge");

    const long rows = A.M.rows();
    Spectrum spec;
    spec.R = A.R;
    spec.map = A.map;
    spec.lambdas.resize(rows);
    spec.vectors.resize(rows, rows);
    spec.raw_min = solver.eigenvalues().minCoeff();
    spec.raw_max = solver.eigenvalues().maxCoeff();
    if (spec.raw_min < -1e-8 || spec.raw_max > 1.0 + 1e-8)
        throw InvariantViolation("localization eigenvalue " +
                                 std::to_string(spec.raw_min < -1e-8 ? spec.raw_min
                                                                     : spec.raw_max) +
                                 " leaves [0,1] by more than 1e-8");
    for (long n = 0; n < rows; ++n) {
        const long src = rows - 1 - n;  // ascending to descending
        spec.lambdas(n) = std::clamp(solver.eigenvalues()(src), 0.0, 1.0);
        spec.vectors.col(n) = solver.eigenvectors().col(src);
    }
    spec.N_half = count_half(spec);
    return spec;
}

int count_half(const Spectrum& spec) {
    int n = 0;
    for (long i = 0; i < spec.lambdas.size(); ++i)
        if (spec.lambdas(i) >= 0.5) ++n;
    return n;
}

double eval_eigenfunction(const GeneratorSet& gen, const OrthonormalBasisSet& basis,
                          const Spectrum& spec, int idx, const Point& x) {
    if (idx < 0 || idx >= spec.lambdas.size())
        throw IndexOutOfRange("eigenfunction index " + std::to_string(idx) + " of " +
                              std::to_string(spec.lambdas.size()));
    double acc = 0.0;
    for (long row = 0; row < spec.map.rows(); ++row) {
        const double w = spec.vectors(row, idx);
        if (w == 0.0) continue;
        auto [i, k] = spec.map.label_of(row);
        acc += w * basis.eval(gen, i, {x[0] - double(k[0]), x[1] - double(k[1])});
    }
    return acc;
}

EigenfunctionEvaluator::EigenfunctionEvaluator(const GeneratorSet& gen,
                                               const OrthonormalBasisSet& basis,
                                               const Spectrum& spec, int count)
    : gen_(&gen) {
    if (count < 0 || count > spec.lambdas.size())
        throw IndexOutOfRange("eigenfunction count " + std::to_string(count) + " of " +
                              std::to_string(spec.lambdas.size()));
    const int r = gen.r();
    const int dim = gen.dim();

    // Union tap windows across shifts.
    std::vector<CellIndex> lo(static_cast<size_t>(r), CellIndex{0, 0});
    std::vector<CellIndex> hi(static_cast<size_t>(r), CellIndex{0, 0});
    std::vector<bool> any(static_cast<size_t>(r), false);
    for (int g = 0; g < r; ++g) {
        for (const Profile& p : basis.basis) {
            const LatticeFilter& t = p.taps[static_cast<size_t>(g)];
            if (t.empty()) continue;
            for (int d = 0; d < 2; ++d) {
                long wlo = t.lo[d] - spec.map.K * (d < dim ? 1 : 0);
                long whi = t.hi[d] + spec.map.K * (d < dim ? 1 : 0);
                if (!any[static_cast<size_t>(g)]) {
                    lo[static_cast<size_t>(g)][d] = wlo;
                    hi[static_cast<size_t>(g)][d] = whi;
                } else {
                    lo[static_cast<size_t>(g)][d] = std::min(lo[static_cast<size_t>(g)][d], wlo);
                    hi[static_cast<size_t>(g)][d] = std::max(hi[static_cast<size_t>(g)][d], whi);
                }
            }
            any[static_cast<size_t>(g)] = true;
        }
    }

    taps_.resize(static_cast<size_t>(count));
    for (int n = 0; n < count; ++n) {
        auto& per_gen = taps_[static_cast<size_t>(n)];
        per_gen.reserve(static_cast<size_t>(r));
        for (int g = 0; g < r; ++g)
            per_gen.push_back(any[static_cast<size_t>(g)]
                                  ? LatticeFilter::zeros(dim, lo[static_cast<size_t>(g)],
                                                         hi[static_cast<size_t>(g)])
                                  : LatticeFilter::zeros(dim, {0, 0}, {0, 0}));
        for (long row = 0; row < spec.map.rows(); ++row) {
            const double v = spec.vectors(row, n);
            if (v == 0.0) continue;
            auto [i, k] = spec.map.label_of(row);
            const Profile& p = basis.basis[static_cast<size_t>(i)];
            for (int g = 0; g < r; ++g) {
                const LatticeFilter& t = p.taps[static_cast<size_t>(g)];
                LatticeFilter& dst = per_gen[static_cast<size_t>(g)];
                t.for_each([&](long m0, long m1, double w) {
                    if (w != 0.0) dst.ref(m0 + k[0], m1 + k[1]) += v * w;
                });
            }
        }
    }
}

const std::vector<LatticeFilter>& EigenfunctionEvaluator::taps(int n) const {
    if (n < 0 || n >= count())
        throw IndexOutOfRange("eigenfunction index " + std::to_string(n) + " of " +
                              std::to_string(count()));
    return taps_[static_cast<size_t>(n)];
}

double EigenfunctionEvaluator::eval(int n, const Point& x) const {
    const auto& per_gen = taps(n);
    double acc = 0.0;
    for (int g = 0; g < gen_->r(); ++g) {
        const LatticeFilter& t = per_gen[static_cast<size_t>(g)];
        if (t.empty()) continue;
        const double rad = gen_->spec(g).support_radius();
        long a0 = std::max(t.lo[0], static_cast<long>(std::ceil(x[0] - rad)));
        long b0 = std::min(t.hi[0], static_cast<long>(std::floor(x[0] + rad)));
        long a1 = t.lo[1], b1 = t.hi[1];
        if (gen_->dim() == 2) {
            a1 = std::max(t.lo[1], static_cast<long>(std::ceil(x[1] - rad)));
            b1 = std::min(t.hi[1], static_cast<long>(std::floor(x[1] + rad)));
        }
        for (long m0 = a0; m0 <= b0; ++m0)
            for (long m1 = a1; m1 <= b1; ++m1) {
                double w = t.at(m0, m1);
                if (w == 0.0) continue;
                acc += w * gen_->eval(g, {x[0] - double(m0), x[1] - double(m1)});
            }
    }
    return acc;
}

void EigenfunctionEvaluator::eval_all(const Point& x, double* out) const {
    const int n_funcs = count();
    for (int n = 0; n < n_funcs; ++n) out[n] = 0.0;
    for (int g = 0; g < gen_->r(); ++g) {
        const double rad = gen_->spec(g).support_radius();
        const long a0 = static_cast<long>(std::ceil(x[0] - rad));
        const long b0 = static_cast<long>(std::floor(x[0] + rad));
        long a1 = 0, b1 = 0;
        if (gen_->dim() == 2) {
            a1 = static_cast<long>(std::ceil(x[1] - rad));
            b1 = static_cast<long>(std::floor(x[1] + rad));
        }
        for (long m0 = a0; m0 <= b0; ++m0)
            for (long m1 = a1; m1 <= b1; ++m1) {
                const double phi = gen_->eval(g, {x[0] - double(m0), x[1] - double(m1)});
                if (phi == 0.0) continue;
                for (int n = 0; n < n_funcs; ++n)
                    out[n] += phi * taps_[static_cast<size_t>(n)][static_cast<size_t>(g)].at(m0, m1);
            }
    }
}

Eigen::VectorXd basis_coefficients(const OrthonormalBasisSet& basis, const ShiftIndexMap& map,
                                   const GridFunction& f) {
    const long steps = std::lround(1.0 / basis.h);
    Eigen::VectorXd out(map.rows());
    for (long row = 0; row < map.rows(); ++row) {
        auto [i, k] = map.label_of(row);
        out(row) = shifted_inner(f, {0, 0}, basis.basis[static_cast<size_t>(i)].samples,
                                 {k[0] * steps, k[1] * steps});
    }
    return out;
}

ProjectionSplit projection_split(const Eigen::VectorXd& coeffs, const Spectrum& spec, int N) {
    if (coeffs.size() != spec.map.rows())
        throw UsageError("coefficient vector length " + std::to_string(coeffs.size()) +
                         " does not match the shift layout (" + std::to_string(spec.map.rows()) +
                         " rows)");
    if (N < 0 || N > spec.lambdas.size())
        throw IndexOutOfRange("eigenpair count " + std::to_string(N));
    ProjectionSplit out;
    for (int n = 0; n < N; ++n) {
        const double a = spec.vectors.col(n).dot(coeffs);
        out.captured += a * a;
        out.cube_weighted += spec.lambdas(n) * a * a;
    }
    out.residual = std::max(0.0, coeffs.squaredNorm() - out.captured);
    return out;
}

}  // namespace sis
