#pragma once

#include <array>
#include <string>
#include <string_view>

namespace sis {

// A point in R^n for n in {1, 2}; only the first n coordinates are used.
using Point = std::array<double, 2>;

enum class GeneratorKind { box, bspline, truncated_sinc, truncated_gaussian };

// One generator of a shift-invariant space. Multivariate generators are
// tensor products of the 1-D profile, so a spec is the profile plus n.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::box;
    int dim = 1;
    int order = 0;       // bspline order p >= 1, support [0, p]
    int half_width = 0;  // truncation radius L for sinc / gaussian
    double sigma = 0.0;  // gaussian width

    // Parses "box", "bspline:2", "sinc:64", "gauss:1.0:8".
    static GeneratorSpec parse(std::string_view text, int dim);

    void validate() const;

    // The profile vanishes identically outside [-radius, radius]; evaluation
    // outside the sup-norm ball of this radius returns exactly 0.
    double support_radius() const;

    // The 1-D profile.
    double profile(double t) const;

    // Tensor-product evaluation at x in R^dim.
    double operator()(const Point& x) const;

    std::string to_string() const;
};

// Cardinal B-spline N_p via the truncated-power closed form; support [0, p].
// N_1 is the half-open unit box.
double bspline_value(int p, double t);

}  // namespace sis
