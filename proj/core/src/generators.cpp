#include "sis/generators.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "sis/errors.hpp"

namespace sis {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * double(n - i) / double(i + 1);
    return b;
}

std::vector<std::string> split_colon(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

int parse_int(const std::string& tok, const std::string& what) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw UsageError("generator parameter '" + tok + "' is not an integer (" + what + ")");
    }
}

double parse_real(const std::string& tok, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw UsageError("generator parameter '" + tok + "' is not a number (" + what + ")");
    }
}

}  // namespace

double bspline_value(int p, double t) {
    if (p == 1) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    if (t <= 0.0 || t >= double(p)) return 0.0;
    // N_p(t) = (1/(p-1)!) sum_k (-1)^k C(p,k) (t-k)_+^{p-1}
    double acc = 0.0;
    double sign = 1.0;
    for (int k = 0; k <= p && double(k) < t; ++k) {
        acc += sign * binomial(p, k) * std::pow(t - double(k), p - 1);
        sign = -sign;
    }
    double fact = 1.0;
    for (int i = 2; i < p; ++i) fact *= double(i);
    return acc / fact;
}

GeneratorSpec GeneratorSpec::parse(std::string_view text, int dim) {
    auto parts = split_colon(text);
    const std::string& name = parts[0];
    GeneratorSpec spec;
    spec.dim = dim;
    if (name == "box") {
        if (parts.size() != 1) throw UsageError("'box' takes no parameters, got '" + std::string(text) + "'");
        spec.kind = GeneratorKind::box;
    } else if (name == "bspline") {
        if (parts.size() != 2) throw UsageError("'bspline' needs an order, e.g. bspline:2");
        spec.kind = GeneratorKind::bspline;
        spec.order = parse_int(parts[1], "bspline order");
    } else if (name == "sinc") {
        if (parts.size() > 2) throw UsageError("'sinc' takes at most one parameter, got '" + std::string(text) + "'");
        spec.kind = GeneratorKind::truncated_sinc;
        spec.half_width = parts.size() == 2 ? parse_int(parts[1], "sinc half-width") : 64;
    } else if (name == "gauss") {
        if (parts.size() > 3) throw UsageError("'gauss' takes at most two parameters, got '" + std::string(text) + "'");
        spec.kind = GeneratorKind::truncated_gaussian;
        spec.sigma = parts.size() >= 2 ? parse_real(parts[1], "gaussian sigma") : 1.0;
        spec.half_width = parts.size() >= 3 ? parse_int(parts[2], "gaussian half-width") : 8;
    } else {
        throw UsageError("unknown generator kind '" + name + "'");
    }
    spec.validate();
    return spec;
}

void GeneratorSpec::validate() const {
    if (dim != 1 && dim != 2) throw UsageError("dimension must be 1 or 2, got " + std::to_string(dim));
    switch (kind) {
        case GeneratorKind::box:
            break;
        case GeneratorKind::bspline:
            if (order < 1) throw UsageError("bspline order must be >= 1, got " + std::to_string(order));
            break;
        case GeneratorKind::truncated_sinc:
            if (half_width < 1) throw UsageError("sinc half-width must be >= 1, got " + std::to_string(half_width));
            break;
        case GeneratorKind::truncated_gaussian:
            if (half_width < 1) throw UsageError("gaussian half-width must be >= 1, got " + std::to_string(half_width));
            if (!(sigma > 0.0)) throw UsageError("gaussian sigma must be > 0");
            break;
    }
}

double GeneratorSpec::support_radius() const {
    switch (kind) {
        case GeneratorKind::box: return 1.0;
        case GeneratorKind::bspline: return double(order);
        case GeneratorKind::truncated_sinc: return double(half_width);
        case GeneratorKind::truncated_gaussian: return double(half_width);
    }
    return 0.0;
}

double GeneratorSpec::profile(double t) const {
    switch (kind) {
        case GeneratorKind::box:
            return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
        case GeneratorKind::bspline:
            return bspline_value(order, t);
        case GeneratorKind::truncated_sinc: {
            if (std::fabs(t) > double(half_width)) return 0.0;
            if (t == 0.0) return 1.0;
            return std::sin(kPi * t) / (kPi * t);
        }
        case GeneratorKind::truncated_gaussian: {
            if (std::fabs(t) > double(half_width)) return 0.0;
            return std::exp(-t * t / (2.0 * sigma * sigma));
        }
    }
    return 0.0;
}

double GeneratorSpec::operator()(const Point& x) const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= profile(x[d]);
    return v;
}

std::string GeneratorSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case GeneratorKind::box: os << "box"; break;
        case GeneratorKind::bspline: os << "bspline:" << order; break;
        case GeneratorKind::truncated_sinc: os << "sinc:" << half_width; break;
        case GeneratorKind::truncated_gaussian: os << "gauss:" << sigma << ":" << half_width; break;
    }
    return os.str();
}

}  // namespace sis
