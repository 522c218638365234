#include "sis/si_space.hpp"

#include <algorithm>
#include <cmath>

#include "sis/errors.hpp"
#include "sis/rng.hpp"

namespace sis {

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

// Shrinks a grid window to the bounding box of its nonzero values.
GridFunction trim_zeros(const GridFunction& f) {
    CellIndex lo = f.hi(), hi = f.lo();
    bool any = false;
    for (long i0 = f.lo()[0]; i0 <= f.hi()[0]; ++i0)
        for (long i1 = f.lo()[1]; i1 <= f.hi()[1]; ++i1) {
            if (f.at(i0, i1) == 0.0) continue;
            if (!any) {
                lo = {i0, i1};
                hi = {i0, i1};
                any = true;
            } else {
                lo[0] = std::min(lo[0], i0);
                lo[1] = std::min(lo[1], i1);
                hi[0] = std::max(hi[0], i0);
                hi[1] = std::max(hi[1], i1);
            }
        }
    if (!any) return GridFunction::zeros(f.dim(), f.h(), {0, 0}, {0, 0});
    GridFunction out = GridFunction::zeros(f.dim(), f.h(), lo, hi);
    for (long i0 = lo[0]; i0 <= hi[0]; ++i0)
        for (long i1 = lo[1]; i1 <= hi[1]; ++i1) out.at(i0, i1) = f.at(i0, i1);
    return out;
}

// Integer shift range [m_lo, m_hi] per axis for which T_m g overlaps the
// window of f (both on the same grid).
std::array<std::pair<long, long>, 2> overlap_shift_range(const GridFunction& f,
                                                         const GridFunction& g, long steps) {
    std::array<std::pair<long, long>, 2> r;
    for (int d = 0; d < 2; ++d) {
        r[d] = {ceil_div(f.lo()[d] - g.hi()[d], steps), floor_div(f.hi()[d] - g.lo()[d], steps)};
    }
    return r;
}

}  // namespace

GeneratorSet GeneratorSet::build(std::vector<GeneratorSpec> specs, GridSpec grid, bool check) {
    if (specs.empty()) throw UsageError("generator set must contain at least one generator");
    grid.validate();
    GeneratorSet g;
    g.dim_ = specs.front().dim;
    for (auto& s : specs) {
        s.validate();
        if (s.dim != g.dim_) throw UsageError("all generators must share the same dimension");
    }
    g.specs_ = std::move(specs);
    g.grid_ = grid;
    const long steps = grid.steps_per_unit();
    for (const auto& s : g.specs_) {
        g.max_support_radius_ = std::max(g.max_support_radius_, s.support_radius());
        long rad_cells = static_cast<long>(std::ceil(s.support_radius())) * steps;
        GridFunction p = GridFunction::zeros(1, grid.h, {-rad_cells, 0}, {rad_cells - 1, 0});
        for (long i = p.lo()[0]; i <= p.hi()[0]; ++i) p.at(i) = s.profile(p.center(0, i));
        g.profiles_1d_.push_back(trim_zeros(p));
    }
    for (const auto& p : g.profiles_1d_)
        g.sampled_.push_back(g.dim_ == 1 ? p : GridFunction::outer(p, p));
    g.autocorr_ = cross_correlations(g.profiles_1d_);
    g.freq_points_ = g.dim_ == 1 ? 4096 : 2048;
    SymbolExtrema ext = symbol_extrema(g.autocorr_, g.dim_, g.freq_points_);
    g.riesz_lower_ = ext.min_eig;
    g.riesz_upper_ = ext.max_eig;
    if (check && g.riesz_lower_ < 1e-8) {
        std::string names;
        for (const auto& s : g.specs_) names += (names.empty() ? "" : ",") + s.to_string();
        throw RieszViolation("shifts of {" + names + "} fail the Riesz lower bound: min symbol eigenvalue " +
                             std::to_string(g.riesz_lower_));
    }
    return g;
}

GeneratorSet GeneratorSet::create(std::vector<GeneratorSpec> specs, GridSpec grid) {
    return build(std::move(specs), grid, true);
}

GeneratorSet GeneratorSet::create_unchecked(std::vector<GeneratorSpec> specs, GridSpec grid) {
    return build(std::move(specs), grid, false);
}

double DualGeneratorSet::eval(const GeneratorSet& gen, int j, const Point& x) const {
    const Profile& p = duals.at(static_cast<size_t>(j));
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

Profile assemble_profile(const GeneratorSet& gen, std::vector<LatticeFilter> taps) {
    const int dim = gen.dim();
    const long steps = gen.grid().steps_per_unit();
    Profile p;
    p.taps = std::move(taps);
    CellIndex lo{0, 0}, hi{-1, 0};
    bool any = false;
    for (int i = 0; i < gen.r(); ++i) {
        const LatticeFilter& t = p.taps.at(static_cast<size_t>(i));
        if (t.empty()) continue;
        const GridFunction& base = gen.sampled(i);
        for (int d = 0; d < 2; ++d) {
            long wlo = t.lo[d] * steps + base.lo()[d];
            long whi = t.hi[d] * steps + base.hi()[d];
            if (!any) {
                lo[d] = wlo;
                hi[d] = whi;
            } else {
                lo[d] = std::min(lo[d], wlo);
                hi[d] = std::max(hi[d], whi);
            }
        }
        any = true;
    }
    if (!any) {
        p.samples = GridFunction::zeros(dim, gen.grid().h, {0, 0}, {0, 0});
        return p;
    }
    p.samples = GridFunction::zeros(dim, gen.grid().h, lo, hi);
    for (int i = 0; i < gen.r(); ++i) {
        const LatticeFilter& t = p.taps[static_cast<size_t>(i)];
        const GridFunction& base = gen.sampled(i);
        t.for_each([&](long m0, long m1, double w) {
            if (w != 0.0) p.samples.add_scaled_shifted(base, {m0 * steps, m1 * steps}, w);
        });
    }
    return p;
}

DualGeneratorSet compute_dual(const GeneratorSet& gen) {
    if (gen.riesz_lower() < 1e-8)
        throw NearSingularSymbol("minimal symbol eigenvalue " + std::to_string(gen.riesz_lower()) +
                                 " over the frequency grid is below 1e-8");
    const int dim = gen.dim();
    const int F = (dim == 2 && gen.r() > 1) ? 512 : 4096;
    auto filters = spectral_filters(gen.autocorr(), dim, SpectralFunc::inverse, F, 1e-12);
    DualGeneratorSet dual;
    dual.h = gen.grid().h;
    for (int j = 0; j < gen.r(); ++j) {
        Profile p = assemble_profile(gen, filters[static_cast<size_t>(j)]);
        for (int d = 0; d < dim; ++d) {
            double r_lo = std::fabs(double(p.samples.lo()[d]) * dual.h);
            double r_hi = std::fabs(double(p.samples.hi()[d] + 1) * dual.h);
            dual.truncation_radius = std::max({dual.truncation_radius, r_lo, r_hi});
        }
        dual.duals.push_back(std::move(p));
    }
    return dual;
}

double biorthogonality_error(const GeneratorSet& gen, const DualGeneratorSet& dual, long k_range) {
    const long steps = gen.grid().steps_per_unit();
    double worst = 0.0;
    for (int i = 0; i < gen.r(); ++i)
        for (int j = 0; j < gen.r(); ++j)
            for (long k0 = -k_range; k0 <= k_range; ++k0) {
                long k1_lo = gen.dim() == 2 ? -k_range : 0;
                long k1_hi = gen.dim() == 2 ? k_range : 0;
                for (long k1 = k1_lo; k1 <= k1_hi; ++k1) {
                    double v = shifted_inner(gen.sampled(i), {0, 0},
                                             dual.duals[static_cast<size_t>(j)].samples,
                                             {k0 * steps, k1 * steps});
                    double want = (i == j && k0 == 0 && k1 == 0) ? 1.0 : 0.0;
                    worst = std::max(worst, std::fabs(v - want));
                }
            }
    return worst;
}

SIFunction::SIFunction(const GeneratorSet* gens, std::vector<LatticeFilter> coeffs)
    : gens_(gens), coeffs_(std::move(coeffs)) {
    if (!gens_) throw InvariantViolation("SIFunction requires a generator set");
    if (static_cast<int>(coeffs_.size()) != gens_->r())
        throw InvariantViolation("coefficient arrays must match the generator count");
}

double SIFunction::operator()(const Point& x) const {
    double acc = 0.0;
    for (int i = 0; i < gens_->r(); ++i) {
        const LatticeFilter& c = coeffs_[static_cast<size_t>(i)];
        if (c.empty()) continue;
        const double rad = gens_->spec(i).support_radius();
        long a0 = std::max(c.lo[0], static_cast<long>(std::ceil(x[0] - rad)));
        long b0 = std::min(c.hi[0], static_cast<long>(std::floor(x[0] + rad)));
        long a1 = c.lo[1], b1 = c.hi[1];
        if (gens_->dim() == 2) {
            a1 = std::max(c.lo[1], static_cast<long>(std::ceil(x[1] - rad)));
            b1 = std::min(c.hi[1], static_cast<long>(std::floor(x[1] + rad)));
        }
        for (long m0 = a0; m0 <= b0; ++m0)
            for (long m1 = a1; m1 <= b1; ++m1) {
                double w = c.at(m0, m1);
                if (w == 0.0) continue;
                acc += w * gens_->eval(i, {x[0] - double(m0), x[1] - double(m1)});
            }
    }
    return acc;
}

GridFunction SIFunction::to_grid(double extra_margin) const {
    const long steps = gens_->grid().steps_per_unit();
    const long margin = static_cast<long>(std::ceil(extra_margin / gens_->grid().h));
    CellIndex lo{0, 0}, hi{-1, 0};
    bool any = false;
    for (int i = 0; i < gens_->r(); ++i) {
        const LatticeFilter& c = coeffs_[static_cast<size_t>(i)];
        if (c.empty()) continue;
        const GridFunction& base = gens_->sampled(i);
        for (int d = 0; d < 2; ++d) {
            long wlo = c.lo[d] * steps + base.lo()[d];
            long whi = c.hi[d] * steps + base.hi()[d];
            if (!any) {
                lo[d] = wlo;
                hi[d] = whi;
            } else {
                lo[d] = std::min(lo[d], wlo);
                hi[d] = std::max(hi[d], whi);
            }
        }
        any = true;
    }
    if (!any) return GridFunction::zeros(gens_->dim(), gens_->grid().h, {0, 0}, {0, 0});
    lo[0] -= margin;
    hi[0] += margin;
    if (gens_->dim() == 2) {
        lo[1] -= margin;
        hi[1] += margin;
    }
    GridFunction out = GridFunction::zeros(gens_->dim(), gens_->grid().h, lo, hi);
    for (int i = 0; i < gens_->r(); ++i) {
        const LatticeFilter& c = coeffs_[static_cast<size_t>(i)];
        const GridFunction& base = gens_->sampled(i);
        c.for_each([&](long m0, long m1, double w) {
            if (w != 0.0) out.add_scaled_shifted(base, {m0 * steps, m1 * steps}, w);
        });
    }
    return out;
}

double SIFunction::coeff_sq_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += c.sum_squares();
    return s;
}

std::vector<double> synthesize(const SIFunction& f, const std::vector<Point>& points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const Point& x : points) out.push_back(f(x));
    return out;
}

SIFunction project(const GridFunction& samples_of_f, const GeneratorSet& gen,
                   const DualGeneratorSet& dual,
                   std::optional<std::pair<CellIndex, CellIndex>> window) {
    const long steps = gen.grid().steps_per_unit();
    std::vector<LatticeFilter> coeffs;
    double total_sq = 0.0, boundary_sq = 0.0;
    for (int i = 0; i < gen.r(); ++i) {
        const GridFunction& d = dual.duals.at(static_cast<size_t>(i)).samples;
        CellIndex mlo{0, 0}, mhi{0, 0};
        if (window) {
            mlo = window->first;
            mhi = window->second;
        } else {
            // One spare layer beyond the overlapping shifts; its inner
            // products vanish identically, so the boundary check below can
            // only fire for explicit windows that truly cut something.
            auto ranges = overlap_shift_range(samples_of_f, d, steps);
            mlo = {ranges[0].first - 1, ranges[1].first - 1};
            mhi = {ranges[0].second + 1, ranges[1].second + 1};
        }
        if (gen.dim() == 1) {
            mlo[1] = 0;
            mhi[1] = 0;
        }
        LatticeFilter c = LatticeFilter::zeros(gen.dim(), mlo, mhi);
        for (long m0 = mlo[0]; m0 <= mhi[0]; ++m0)
            for (long m1 = mlo[1]; m1 <= mhi[1]; ++m1) {
                double v = shifted_inner(samples_of_f, {0, 0}, d, {m0 * steps, m1 * steps});
                c.ref(m0, m1) = v;
                total_sq += v * v;
                bool edge = (m0 == mlo[0] || m0 == mhi[0]);
                if (gen.dim() == 2) edge = edge || (m1 == mlo[1] || m1 == mhi[1]);
                if (edge) boundary_sq += v * v;
            }
        coeffs.push_back(std::move(c));
    }
    if (total_sq > 0.0 && boundary_sq > 1e-6 * total_sq)
        throw WindowTooSmall("coefficient mass at the window boundary is " +
                             std::to_string(boundary_sq / total_sq) + " of the total (limit 1e-6)");
    return SIFunction(&gen, std::move(coeffs));
}

GridFunction kernel_grid(const GeneratorSet& gen, const DualGeneratorSet& dual, const Point& x) {
    const long steps = gen.grid().steps_per_unit();
    // Shift range covering all k with phi_i(x - k) != 0.
    long a0 = 0, b0 = -1, a1 = 0, b1 = 0;
    double rad = gen.max_support_radius();
    a0 = static_cast<long>(std::ceil(x[0] - rad));
    b0 = static_cast<long>(std::floor(x[0] + rad));
    if (gen.dim() == 2) {
        a1 = static_cast<long>(std::ceil(x[1] - rad));
        b1 = static_cast<long>(std::floor(x[1] + rad));
    }
    CellIndex lo{0, 0}, hi{-1, 0};
    bool any = false;
    for (int i = 0; i < gen.r(); ++i) {
        const GridFunction& d = dual.duals.at(static_cast<size_t>(i)).samples;
        for (int dd = 0; dd < 2; ++dd) {
            long s_lo = (dd == 0 ? a0 : a1) * steps + d.lo()[dd];
            long s_hi = (dd == 0 ? b0 : b1) * steps + d.hi()[dd];
            if (!any) {
                lo[dd] = s_lo;
                hi[dd] = s_hi;
            } else {
                lo[dd] = std::min(lo[dd], s_lo);
                hi[dd] = std::max(hi[dd], s_hi);
            }
        }
        any = true;
    }
    GridFunction v = GridFunction::zeros(gen.dim(), gen.grid().h, lo, hi);
    for (int i = 0; i < gen.r(); ++i) {
        const GridFunction& d = dual.duals.at(static_cast<size_t>(i)).samples;
        for (long k0 = a0; k0 <= b0; ++k0)
            for (long k1 = a1; k1 <= b1; ++k1) {
                double w = gen.eval(i, {x[0] - double(k0), x[1] - double(k1)});
                if (w != 0.0) v.add_scaled_shifted(d, {k0 * steps, k1 * steps}, w);
            }
    }
    return v;
}

double kernel_norm(const GeneratorSet& gen, const DualGeneratorSet& dual, const Point& x) {
    return std::sqrt(kernel_grid(gen, dual, x).squared_norm());
}

EnergyReport energy_in_cube(const SIFunction& f, double R) {
    if (!(R > 0.0)) throw DomainError("cube side R must be positive");
    GridFunction g = f.to_grid();
    return {g.squared_norm_in_cube(R), g.squared_norm()};
}

SIFunction random_si_function(const GeneratorSet& gen, long coeff_radius, std::uint64_t key) {
    CounterRng rng(key);
    std::uint64_t g_idx = 0;
    std::vector<LatticeFilter> coeffs;
    for (int i = 0; i < gen.r(); ++i) {
        CellIndex lo{-coeff_radius, gen.dim() == 2 ? -coeff_radius : 0};
        CellIndex hi{coeff_radius, gen.dim() == 2 ? coeff_radius : 0};
        LatticeFilter c = LatticeFilter::zeros(gen.dim(), lo, hi);
        for (double& w : c.w) w = rng.gaussian(g_idx++);
        coeffs.push_back(std::move(c));
    }
    SIFunction f(&gen, std::move(coeffs));
    double nrm = std::sqrt(f.to_grid().squared_norm());
    if (nrm < 1e-14) throw InvariantViolation("random function degenerated to zero");
    std::vector<LatticeFilter> scaled = f.coeffs();
    for (auto& c : scaled)
        for (double& w : c.w) w /= nrm;
    return SIFunction(&gen, std::move(scaled));
}

}  // namespace sis
