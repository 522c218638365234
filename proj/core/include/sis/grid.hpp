#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sis {

// Dyadic quadrature grid. Cell i along an axis is [i*h, (i+1)*h) with
// midpoint sample at (i + 1/2)*h, so integer lattice points are cell
// boundaries and every catalog discontinuity or kink lands between cells;
// the composite midpoint rule then converges at O(h^2) uniformly.
struct GridSpec {
    double h = 1.0 / 128.0;
    int q = 7;                    // h = 2^-q
    double window_radius = 0.0;   // default margin for synthesized windows

    static GridSpec dyadic(int q, double window_radius = 0.0);
    void validate() const;
    // Cells per unit interval (2^q).
    long steps_per_unit() const;
};

using CellIndex = std::array<long, 2>;

// Inclusive cell range [lo, hi] of cells whose midpoints lie in
// [-R/2, R/2]; exact for dyadic-rational R.
std::pair<long, long> cube_cell_range(double R, double h);

// A function sampled at cell midpoints over a finite window, with the
// discrete inner product <f,g> = h^dim * sum f*g. For dim == 1 the second
// axis is the single cell 0.
class GridFunction {
public:
    GridFunction() = default;
    static GridFunction zeros(int dim, double h, CellIndex lo, CellIndex hi);
    // 2-D tensor product of two 1-D functions on the same grid step.
    static GridFunction outer(const GridFunction& a, const GridFunction& b);

    int dim() const { return dim_; }
    double h() const { return h_; }
    const CellIndex& lo() const { return lo_; }
    const CellIndex& hi() const { return hi_; }
    long count(int axis) const { return hi_[axis] - lo_[axis] + 1; }
    long size() const { return static_cast<long>(values_.size()); }
    bool empty() const { return values_.empty(); }

    double& at(long i0, long i1 = 0) { return values_[flat(i0, i1)]; }
    double at(long i0, long i1 = 0) const { return values_[flat(i0, i1)]; }
    // Value at a cell, 0 outside the window.
    double value_or_zero(long i0, long i1 = 0) const;
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double cell_weight() const;  // h^dim
    double center(int axis, long i) const {
        (void)axis;
        return (double(i) + 0.5) * h_;
    }

    double inner(const GridFunction& other) const;
    double squared_norm() const;
    double sup_norm() const;
    // Energy of the restriction to the cube [-R/2, R/2]^dim.
    double squared_norm_in_cube(double R) const;

    void scale(double w);
    // Accumulate w * g shifted by whole cells; parts of g falling outside
    // this window are dropped (callers size windows to avoid that).
    void add_scaled_shifted(const GridFunction& g, CellIndex shift_cells, double w);

private:
    long flat(long i0, long i1) const {
        return (i0 - lo_[0]) * count(1) + (i1 - lo_[1]);
    }

    int dim_ = 1;
    double h_ = 1.0;
    CellIndex lo_{0, 0};
    CellIndex hi_{-1, 0};
    std::vector<double> values_;
};

// <shift(a, sa), shift(b, sb)> restricted to the cube [-R/2, R/2]^dim,
// in the discrete inner product. Shifts are in whole cells.
double cube_shifted_inner(const GridFunction& a, CellIndex shift_a,
                          const GridFunction& b, CellIndex shift_b, double R);

// Same but unrestricted (over the windows' overlap).
double shifted_inner(const GridFunction& a, CellIndex shift_a,
                     const GridFunction& b, CellIndex shift_b);

}  // namespace sis
