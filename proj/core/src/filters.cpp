#include "sis/filters.hpp"

#include <algorithm>
#include <cmath>

#include "sis/errors.hpp"

namespace sis {

LatticeFilter LatticeFilter::zeros(int dim, CellIndex lo, CellIndex hi) {
    LatticeFilter f;
    f.dim = dim;
    f.lo = lo;
    f.hi = hi;
    if (dim == 1) {
        f.lo[1] = 0;
        f.hi[1] = 0;
    }
    long n0 = f.hi[0] - f.lo[0] + 1;
    long n1 = f.hi[1] - f.lo[1] + 1;
    if (n0 <= 0 || n1 <= 0) throw InvariantViolation("empty filter window");
    f.w.assign(static_cast<size_t>(n0 * n1), 0.0);
    return f;
}

LatticeFilter LatticeFilter::delta(int dim) {
    LatticeFilter f = zeros(dim, {0, 0}, {0, 0});
    f.w[0] = 1.0;
    return f;
}

LatticeFilter LatticeFilter::from_1d(std::vector<double> coeffs, long lo) {
    LatticeFilter f;
    f.dim = 1;
    f.lo = {lo, 0};
    f.hi = {lo + static_cast<long>(coeffs.size()) - 1, 0};
    f.w = std::move(coeffs);
    if (f.w.empty()) throw InvariantViolation("empty filter");
    return f;
}

LatticeFilter LatticeFilter::outer(const LatticeFilter& a, const LatticeFilter& b) {
    if (a.dim != 1 || b.dim != 1) throw InvariantViolation("outer() needs 1-D filters");
    LatticeFilter f;
    f.dim = 2;
    f.lo = {a.lo[0], b.lo[0]};
    f.hi = {a.hi[0], b.hi[0]};
    f.w.resize(static_cast<size_t>(a.size()) * static_cast<size_t>(b.size()));
    long idx = 0;
    for (long i = 0; i < a.size(); ++i)
        for (long j = 0; j < b.size(); ++j) f.w[idx++] = a.w[i] * b.w[j];
    return f;
}

double LatticeFilter::max_abs() const {
    double m = 0.0;
    for (double v : w) m = std::max(m, std::fabs(v));
    return m;
}

double LatticeFilter::sum_abs() const {
    double s = 0.0;
    for (double v : w) s += std::fabs(v);
    return s;
}

double LatticeFilter::sum_squares() const {
    double s = 0.0;
    for (double v : w) s += v * v;
    return s;
}

LatticeFilter LatticeFilter::truncated(double rel_cutoff) const {
    double cut = rel_cutoff * max_abs();
    CellIndex new_lo{0, 0}, new_hi{-1, 0};
    bool any = false;
    for_each([&](long k0, long k1, double v) {
        if (std::fabs(v) <= cut) return;
        if (!any) {
            new_lo = {k0, k1};
            new_hi = {k0, k1};
            any = true;
        } else {
            new_lo[0] = std::min(new_lo[0], k0);
            new_lo[1] = std::min(new_lo[1], k1);
            new_hi[0] = std::max(new_hi[0], k0);
            new_hi[1] = std::max(new_hi[1], k1);
        }
    });
    if (!any) return zeros(dim, {0, 0}, {0, 0});  // numerically zero filter
    LatticeFilter out = zeros(dim, new_lo, new_hi);
    for_each([&](long k0, long k1, double v) {
        if (std::fabs(v) > cut) out.ref(k0, k1) = v;
    });
    return out;
}

LatticeFilter convolve1d(const LatticeFilter& a, const LatticeFilter& b) {
    if (a.dim != 1 || b.dim != 1) throw InvariantViolation("convolve1d needs 1-D filters");
    LatticeFilter out = LatticeFilter::zeros(1, {a.lo[0] + b.lo[0], 0}, {a.hi[0] + b.hi[0], 0});
    for (long i = a.lo[0]; i <= a.hi[0]; ++i) {
        double ai = a.at(i);
        if (ai == 0.0) continue;
        for (long j = b.lo[0]; j <= b.hi[0]; ++j) out.ref(i + j) += ai * b.at(j);
    }
    return out;
}

}  // namespace sis
