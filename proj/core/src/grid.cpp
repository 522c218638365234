#include "sis/grid.hpp"

#include <algorithm>
#include <cmath>

#include "sis/errors.hpp"

namespace sis {

GridSpec GridSpec::dyadic(int q, double window_radius) {
    GridSpec g;
    g.q = q;
    g.h = std::ldexp(1.0, -q);
    g.window_radius = window_radius;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (q < 4) throw UsageError("grid exponent q must be >= 4, got " + std::to_string(q));
    if (h != std::ldexp(1.0, -q)) throw UsageError("grid step must equal 2^-q");
}

long GridSpec::steps_per_unit() const { return 1L << q; }

std::pair<long, long> cube_cell_range(double R, double h) {
    long lo = static_cast<long>(std::ceil(-R / (2.0 * h) - 0.5));
    long hi = static_cast<long>(std::floor(R / (2.0 * h) - 0.5));
    // Guard against representation slop at the boundary.
    while ((double(lo) + 0.5) * h < -R / 2.0) ++lo;
    while ((double(lo) - 0.5) * h >= -R / 2.0) --lo;
    while ((double(hi) + 0.5) * h > R / 2.0) --hi;
    while ((double(hi) + 1.5) * h <= R / 2.0) ++hi;
    return {lo, hi};
}

GridFunction GridFunction::zeros(int dim, double h, CellIndex lo, CellIndex hi) {
    GridFunction f;
    f.dim_ = dim;
    f.h_ = h;
    f.lo_ = lo;
    f.hi_ = hi;
    if (dim == 1) {
        f.lo_[1] = 0;
        f.hi_[1] = 0;
    }
    long n0 = f.hi_[0] - f.lo_[0] + 1;
    long n1 = f.hi_[1] - f.lo_[1] + 1;
    if (n0 <= 0 || n1 <= 0) throw InvariantViolation("empty grid window");
    f.values_.assign(static_cast<size_t>(n0 * n1), 0.0);
    return f;
}

GridFunction GridFunction::outer(const GridFunction& a, const GridFunction& b) {
    if (a.dim() != 1 || b.dim() != 1) throw InvariantViolation("outer() needs 1-D factors");
    GridFunction f;
    f.dim_ = 2;
    f.h_ = a.h();
    f.lo_ = {a.lo()[0], b.lo()[0]};
    f.hi_ = {a.hi()[0], b.hi()[0]};
    f.values_.resize(static_cast<size_t>(a.size()) * static_cast<size_t>(b.size()));
    long idx = 0;
    for (long i = 0; i < a.size(); ++i)
        for (long j = 0; j < b.size(); ++j) f.values_[idx++] = a.values()[i] * b.values()[j];
    return f;
}

double GridFunction::value_or_zero(long i0, long i1) const {
    if (i0 < lo_[0] || i0 > hi_[0] || i1 < lo_[1] || i1 > hi_[1]) return 0.0;
    return values_[flat(i0, i1)];
}

double GridFunction::cell_weight() const {
    double w = h_;
    for (int d = 1; d < dim_; ++d) w *= h_;
    return w;
}

double GridFunction::inner(const GridFunction& other) const {
    return shifted_inner(*this, {0, 0}, other, {0, 0});
}

double GridFunction::squared_norm() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return acc * cell_weight();
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double GridFunction::squared_norm_in_cube(double R) const {
    auto [c_lo, c_hi] = cube_cell_range(R, h_);
    long a0 = std::max(lo_[0], c_lo), b0 = std::min(hi_[0], c_hi);
    long a1 = lo_[1], b1 = hi_[1];
    if (dim_ == 2) {
        a1 = std::max(lo_[1], c_lo);
        b1 = std::min(hi_[1], c_hi);
    }
    double acc = 0.0;
    for (long i0 = a0; i0 <= b0; ++i0)
        for (long i1 = a1; i1 <= b1; ++i1) {
            double v = values_[flat(i0, i1)];
            acc += v * v;
        }
    return acc * cell_weight();
}

void GridFunction::scale(double w) {
    for (double& v : values_) v *= w;
}

void GridFunction::add_scaled_shifted(const GridFunction& g, CellIndex shift_cells, double w) {
    long a0 = std::max(lo_[0], g.lo()[0] + shift_cells[0]);
    long b0 = std::min(hi_[0], g.hi()[0] + shift_cells[0]);
    long a1 = std::max(lo_[1], g.lo()[1] + shift_cells[1]);
    long b1 = std::min(hi_[1], g.hi()[1] + shift_cells[1]);
    for (long i0 = a0; i0 <= b0; ++i0)
        for (long i1 = a1; i1 <= b1; ++i1)
            values_[flat(i0, i1)] += w * g.at(i0 - shift_cells[0], i1 - shift_cells[1]);
}

namespace {

struct OverlapRange {
    long a0, b0, a1, b1;
    bool empty;
};

OverlapRange overlap(const GridFunction& a, CellIndex sa, const GridFunction& b, CellIndex sb,
                     bool restrict_cube, double R) {
    OverlapRange r{};
    r.a0 = std::max(a.lo()[0] + sa[0], b.lo()[0] + sb[0]);
    r.b0 = std::min(a.hi()[0] + sa[0], b.hi()[0] + sb[0]);
    r.a1 = std::max(a.lo()[1] + sa[1], b.lo()[1] + sb[1]);
    r.b1 = std::min(a.hi()[1] + sa[1], b.hi()[1] + sb[1]);
    if (restrict_cube) {
        auto [c_lo, c_hi] = cube_cell_range(R, a.h());
        r.a0 = std::max(r.a0, c_lo);
        r.b0 = std::min(r.b0, c_hi);
        if (a.dim() == 2) {
            r.a1 = std::max(r.a1, c_lo);
            r.b1 = std::min(r.b1, c_hi);
        }
    }
    r.empty = r.a0 > r.b0 || r.a1 > r.b1;
    return r;
}

double overlap_inner(const GridFunction& a, CellIndex sa, const GridFunction& b, CellIndex sb,
                     bool restrict_cube, double R) {
    OverlapRange r = overlap(a, sa, b, sb, restrict_cube, R);
    if (r.empty) return 0.0;
    double acc = 0.0;
    for (long i0 = r.a0; i0 <= r.b0; ++i0)
        for (long i1 = r.a1; i1 <= r.b1; ++i1)
            acc += a.at(i0 - sa[0], i1 - sa[1]) * b.at(i0 - sb[0], i1 - sb[1]);
    return acc * a.cell_weight();
}

}  // namespace

double cube_shifted_inner(const GridFunction& a, CellIndex shift_a, const GridFunction& b,
                          CellIndex shift_b, double R) {
    return overlap_inner(a, shift_a, b, shift_b, true, R);
}

double shifted_inner(const GridFunction& a, CellIndex shift_a, const GridFunction& b,
                     CellIndex shift_b) {
    return overlap_inner(a, shift_a, b, shift_b, false, 0.0);
}

}  // namespace sis
