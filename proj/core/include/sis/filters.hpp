#pragma once

#include <vector>

#include "sis/grid.hpp"

namespace sis {

// Real coefficients on a finite window of the integer lattice Z^dim.
// Used both as shift-expansion taps (f = sum_m w[m] T_m phi) and as the
// coefficient array of a function in the space. For dim == 1 the second
// axis is the single index 0.
struct LatticeFilter {
    int dim = 1;
    CellIndex lo{0, 0};
    CellIndex hi{-1, 0};
    std::vector<double> w;

    static LatticeFilter zeros(int dim, CellIndex lo, CellIndex hi);
    static LatticeFilter delta(int dim);
    static LatticeFilter from_1d(std::vector<double> coeffs, long lo);
    // 2-D tensor product of two 1-D filters.
    static LatticeFilter outer(const LatticeFilter& a, const LatticeFilter& b);

    long count(int axis) const { return hi[axis] - lo[axis] + 1; }
    long size() const { return static_cast<long>(w.size()); }
    bool empty() const { return w.empty(); }

    double& ref(long k0, long k1 = 0) { return w[flat(k0, k1)]; }
    double at(long k0, long k1 = 0) const {
        if (k0 < lo[0] || k0 > hi[0] || k1 < lo[1] || k1 > hi[1]) return 0.0;
        return w[flat(k0, k1)];
    }

    double max_abs() const;
    double sum_abs() const;
    double sum_squares() const;

    // Drops entries below rel_cutoff * max_abs and shrinks the window.
    LatticeFilter truncated(double rel_cutoff) const;

    template <class F>
    void for_each(F&& f) const {
        long idx = 0;
        for (long k0 = lo[0]; k0 <= hi[0]; ++k0)
            for (long k1 = lo[1]; k1 <= hi[1]; ++k1) f(k0, k1, w[idx++]);
    }

private:
    long flat(long k0, long k1) const { return (k0 - lo[0]) * count(1) + (k1 - lo[1]); }
};

// 1-D convolution (dim == 1 filters only).
LatticeFilter convolve1d(const LatticeFilter& a, const LatticeFilter& b);

}  // namespace sis
