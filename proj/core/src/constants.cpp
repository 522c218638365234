#include "sis/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "sis/errors.hpp"
#include "sis/rng.hpp"
#include "sis/symbol.hpp"

namespace sis {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Golden-section maximization on [a, b] for a continuous scalar function.
template <typename F>
double golden_max(F&& f, double a, double b, int iters) {
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best = std::max(f1, f2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

// Sliding-window maxima over a 1-D array with window [i-win, i+win],
// clamped at the edges. Monotone-deque, O(n).
void sliding_max_1d(const double* in, double* out, long n, long win) {
    std::deque<long> dq;
    long next = 0;
    for (long i = 0; i < n; ++i) {
        const long hi = std::min(n - 1, i + win);
        for (; next <= hi; ++next) {
            while (!dq.empty() && in[dq.back()] <= in[next]) dq.pop_back();
            dq.push_back(next);
        }
        while (dq.front() < i - win) dq.pop_front();
        out[i] = in[dq.front()];
    }
}

void sliding_min_1d(const double* in, double* out, long n, long win) {
    std::deque<long> dq;
    long next = 0;
    for (long i = 0; i < n; ++i) {
        const long hi = std::min(n - 1, i + win);
        for (; next <= hi; ++next) {
            while (!dq.empty() && in[dq.back()] >= in[next]) dq.pop_back();
            dq.push_back(next);
        }
        while (dq.front() < i - win) dq.pop_front();
        out[i] = in[dq.front()];
    }
}

// Applies the 1-D sliding pass along both axes of a row-major grid.
void sliding_pass_2d(std::vector<double>& v, long rows, long cols, long win, bool want_max) {
    std::vector<double> buf(std::max(rows, cols));
    std::vector<double> line(std::max(rows, cols));
    for (long r = 0; r < rows; ++r) {
        double* row = v.data() + r * cols;
        if (want_max)
            sliding_max_1d(row, buf.data(), cols, win);
        else
            sliding_min_1d(row, buf.data(), cols, win);
        std::copy(buf.begin(), buf.begin() + cols, row);
    }
    if (rows == 1) return;
    for (long c = 0; c < cols; ++c) {
        for (long r = 0; r < rows; ++r) line[r] = v[r * cols + c];
        if (want_max)
            sliding_max_1d(line.data(), buf.data(), rows, win);
        else
            sliding_min_1d(line.data(), buf.data(), rows, win);
        for (long r = 0; r < rows; ++r) v[r * cols + c] = buf[r];
    }
}

double wiener_amalgam_norm_1d(const GeneratorSet& gen, int i) {
    const GridFunction& prof = gen.profile_1d(i);
    const long steps = gen.grid().steps_per_unit();
    const long unit_lo = static_cast<long>(std::floor(static_cast<double>(prof.lo()[0]) / steps));
    const long unit_hi = static_cast<long>(std::floor(static_cast<double>(prof.hi()[0]) / steps));
    double total = 0.0;
    for (long u = unit_lo; u <= unit_hi; ++u) {
        double sup = 0.0;
        for (long c = u * steps; c < (u + 1) * steps; ++c)
            sup = std::max(sup, std::abs(prof.value_or_zero(c)));
        // Sample the closed-form profile at both unit endpoints as well;
        // cell centers alone can miss a peak sitting on the boundary.
        sup = std::max(sup, std::abs(gen.spec(i).profile(static_cast<double>(u))));
        sup = std::max(sup, std::abs(gen.spec(i).profile(static_cast<double>(u + 1))));
        total += sup;
    }
    return total;
}

}  // namespace

FrameBounds frame_bounds(const GeneratorSet& gen) {
    const AutocorrTable table = gen.autocorr();
    const int coarse = gen.freq_points();
    const SymbolExtrema e1 = symbol_extrema(table, gen.dim(), coarse);
    const SymbolExtrema e2 = symbol_extrema(table, gen.dim(), 2 * coarse);
    FrameBounds out;
    out.A_frame = std::min(e1.min_eig, e2.min_eig);
    out.C0 = std::max(e1.max_eig, e2.max_eig);
    out.self_check = std::max(std::abs(e1.min_eig - e2.min_eig),
                              std::abs(e1.max_eig - e2.max_eig));
    if (out.self_check >= 1e-6)
        throw DiagnosticFailure("frequency grid too coarse for frame bounds: doubling moved "
                                "the extrema by " + fmt(out.self_check));
    if (out.A_frame < 1e-8)
        throw RieszViolation("lower frame bound " + fmt(out.A_frame) + " is degenerate");
    return out;
}

double kernel_norm_at(const GeneratorSet& gen, const DualGeneratorSet& dual, const Point& x) {
    // ||v_x||^2 equals v_x(x) = sum_{i,k} dual_i(x-k) phi_i(x-k): the kernel
    // reproduces every function of the space, v_x included.
    double acc = 0.0;
    const int dim = gen.dim();
    for (int i = 0; i < gen.r(); ++i) {
        const double rad = gen.spec(i).support_radius();
        long lo[2] = {0, 0}, hi[2] = {0, 0};
        for (int d = 0; d < dim; ++d) {
            lo[d] = static_cast<long>(std::ceil(x[d] - rad));
            hi[d] = static_cast<long>(std::floor(x[d] + rad));
        }
        for (long k0 = lo[0]; k0 <= hi[0]; ++k0) {
            for (long k1 = lo[1]; k1 <= hi[1]; ++k1) {
                Point y = x;
                y[0] -= static_cast<double>(k0);
                if (dim == 2) y[1] -= static_cast<double>(k1);
                const double p = gen.eval(i, y);
                if (p == 0.0) continue;
                acc += p * dual.eval(gen, i, y);
            }
        }
    }
    return std::sqrt(std::max(0.0, acc));
}

C1Estimate estimate_C1(const GeneratorSet& gen, const DualGeneratorSet& dual) {
    const int dim = gen.dim();
    const double h = gen.grid().h;
    const long steps = gen.grid().steps_per_unit();

    // Dense scan of one period cell [0,1)^n.
    double best = 0.0;
    Point best_x{0.0, 0.0};
    if (dim == 1) {
        for (long c = 0; c < steps; ++c) {
            const Point x{(c + 0.5) * h, 0.0};
            const double v = kernel_norm_at(gen, dual, x);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
    } else {
        const long side = std::min<long>(steps, 128);
        const double step = 1.0 / static_cast<double>(side);
        for (long a = 0; a < side; ++a) {
            for (long b = 0; b < side; ++b) {
                const Point x{(a + 0.5) * step, (b + 0.5) * step};
                const double v = kernel_norm_at(gen, dual, x);
                if (v > best) {
                    best = v;
                    best_x = x;
                }
            }
        }
    }

    // Local refinement around the scan winner.
    double polished = best;
    if (dim == 1) {
        auto f = [&](double x) { return kernel_norm_at(gen, dual, {x, 0.0}); };
        polished = std::max(polished, golden_max(f, best_x[0] - h, best_x[0] + h, 60));
    } else {
        Point x = best_x;
        double span = 1.0 / 64.0;
        for (int round = 0; round < 4; ++round) {
            for (int d = 0; d < 2; ++d) {
                double lo = x[d] - span, hi = x[d] + span;
                auto f = [&](double t) {
                    Point y = x;
                    y[d] = t;
                    return kernel_norm_at(gen, dual, y);
                };
                const double inv_phi = 0.6180339887498949;
                double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
                double f1 = f(x1), f2 = f(x2);
                for (int it = 0; it < 40; ++it) {
                    if (f1 < f2) {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + inv_phi * (hi - lo);
                        f2 = f(x2);
                    } else {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - inv_phi * (hi - lo);
                        f1 = f(x1);
                    }
                }
                x[d] = (f1 > f2) ? x1 : x2;
            }
            polished = std::max(polished, kernel_norm_at(gen, dual, x));
            span *= 0.25;
        }
    }

    C1Estimate out;
    out.direct = std::max(best, polished);

    const FrameBounds fb = frame_bounds(gen);
    double sum_sq = 0.0;
    for (int i = 0; i < gen.r(); ++i) {
        double w = wiener_amalgam_norm_1d(gen, i);
        if (dim == 2) w = w * w;  // tensor profile: the amalgam norm factorizes
        sum_sq += w * w;
    }
    out.amalgam_bound = std::sqrt(fb.C0 * sum_sq);
    return out;
}

GridFunction osc_grid(const GridFunction& f) {
    const long steps = std::lround(1.0 / f.h());
    const long win = steps / 2;
    const bool flat = (f.dim() == 1);
    const long rows = flat ? 1 : f.count(0);
    const long cols = flat ? f.count(0) : f.count(1);

    // Pad by the window so that the comparison against surrounding zeros is
    // explicit rather than clamped away.
    const long prows = flat ? 1 : rows + 2 * win;
    const long pcols = cols + 2 * win;
    std::vector<double> padded(static_cast<std::size_t>(prows) * pcols, 0.0);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c)
            padded[(r + (flat ? 0 : win)) * pcols + (c + win)] =
                f.values()[static_cast<std::size_t>(r) * cols + c];

    std::vector<double> wmax = padded, wmin = padded;
    sliding_pass_2d(wmax, prows, pcols, win, true);
    sliding_pass_2d(wmin, prows, pcols, win, false);

    CellIndex lo{f.lo()[0] - win, flat ? 0 : f.lo()[1] - win};
    CellIndex hi{f.hi()[0] + win, flat ? 0 : f.hi()[1] + win};
    GridFunction out = GridFunction::zeros(f.dim(), f.h(), lo, hi);
    for (std::size_t idx = 0; idx < out.values().size(); ++idx)
        out.values()[idx] = std::max(wmax[idx] - padded[idx], padded[idx] - wmin[idx]);
    return out;
}

C2Estimate estimate_C2(const GeneratorSet& gen, int trials, std::uint64_t seed) {
    if (trials < 1) throw UsageError("oscillation estimate needs at least one trial");
    // Each trial owns a derived stream and the reduction is a max, so the
    // trials can run concurrently without affecting the result. A smaller
    // coefficient window in 2-D keeps the per-trial grids affordable; the
    // oscillation ratio is local and does not grow with the window.
    const long radius = gen.dim() == 2 ? 4 : 8;
    auto trial_ratio = [&](int t) {
        const SIFunction f = random_si_function(gen, radius, derive_stream(seed, t));
        const GridFunction g = f.to_grid(0.5);
        const GridFunction osc = osc_grid(g);
        return std::sqrt(osc.squared_norm() / g.squared_norm());
    };
    std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<long>(trials, std::min(hw, 16u)));
    if (workers > 1) {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::mutex fail_mutex;
        std::exception_ptr failure;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= trials) return;
                    try {
                        ratios[static_cast<std::size_t>(t)] = trial_ratio(t);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(fail_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    } else {
        for (int t = 0; t < trials; ++t) ratios[static_cast<std::size_t>(t)] = trial_ratio(t);
    }
    const double M = *std::max_element(ratios.begin(), ratios.end());
    C2Estimate out;
    out.M_osc = M;
    out.C2 = (M + 1.0) * (M + 1.0);
    return out;
}

DecayFit fit_decay(const GeneratorSet& gen) {
    DecayFit fit;
    const int n = gen.dim();
    for (double R = 2.0; R <= 64.0; R *= 2.0) {
        double t = 0.0;
        for (int i = 0; i < gen.r(); ++i) {
            const GridFunction& s = gen.sampled(i);
            const double tail = s.squared_norm() - s.squared_norm_in_cube(R);
            t = std::max(t, tail);
        }
        if (t <= 1e-14) continue;
        fit.R.push_back(R);
        fit.t.push_back(t);
    }

    if (fit.R.empty()) {
        fit.compact_support = true;
        fit.alpha = static_cast<double>(n);
        fit.C3 = 0.0;
        return fit;
    }
    if (fit.R.size() == 1) {
        fit.single_point = true;
        fit.alpha = static_cast<double>(n);
        fit.C3 = fit.t[0] * std::pow(fit.R[0], fit.alpha);
        return fit;
    }

    // Least squares for log t = log C3 - alpha log R, then raise C3 until the
    // bound covers every measured point.
    const std::size_t m = fit.R.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = std::log(fit.R[k]);
        const double y = std::log(fit.t[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw DomainError("degenerate decay fit abscissae");
    const double slope = (m * sxy - sx * sy) / denom;
    fit.alpha = -slope;
    if (!(fit.alpha > 0.0))
        throw DomainError("tail energies do not decay: fitted exponent " + fmt(fit.alpha));
    double c3 = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        c3 = std::max(c3, fit.t[k] * std::pow(fit.R[k], fit.alpha));
    fit.C3 = c3;
    return fit;
}

void derived_constants(ConstantsReport& report) {
    const int n = report.dim;
    report.alpha_prime = std::min(static_cast<double>(n), report.alpha);
    const double radicand = std::pow(2.0, n + 2) * report.r * report.C0 *
                            report.C0_tilde * report.C0_tilde * report.C3;
    const double beta = 3.0 + 2.0 * std::pow(radicand, 1.0 / report.alpha);
    if (!std::isfinite(beta))
        throw OverflowError("beta overflows for radicand " + fmt(radicand) +
                            " and alpha " + fmt(report.alpha));
    report.beta = beta;
    const double r0 = std::max({1.0, std::pow(2.0 * report.C3, 1.0 / report.alpha),
                                std::pow(report.C1, 2.0 / n)});
    if (!std::isfinite(r0)) throw OverflowError("R0 overflows");
    report.R0 = r0;
}

ConstantsReport compute_constants(const GeneratorSet& gen, const DualGeneratorSet& dual,
                                  std::uint64_t seed, int c2_trials) {
    ConstantsReport rep;
    rep.dim = gen.dim();
    rep.r = gen.r();

    const FrameBounds fb = frame_bounds(gen);
    rep.A_frame = fb.A_frame;
    rep.C0 = fb.C0;
    rep.C0_tilde = 1.0 / fb.A_frame;
    rep.frame_grid_self_check = fb.self_check;

    const C1Estimate c1 = estimate_C1(gen, dual);
    rep.C1 = c1.direct;
    rep.C1_amalgam_bound = c1.amalgam_bound;

    const C2Estimate c2 = estimate_C2(gen, c2_trials, seed);
    rep.M_osc = c2.M_osc;
    rep.C2 = c2.C2;

    const DecayFit fit = fit_decay(gen);
    rep.C3 = fit.C3;
    rep.alpha = fit.alpha;
    rep.compact_support = fit.compact_support;
    rep.decay_single_point = fit.single_point;
    rep.tail_R = fit.R;
    rep.tail_energy = fit.t;

    derived_constants(rep);
    return rep;
}

std::vector<std::string> check_constraints(const ConstantsReport& report,
                                           const TheoremParams& params) {
    std::vector<std::string> violations;
    if (params.R < report.R0)
        violations.push_back("R >= R0 fails: R = " + fmt(params.R) + " < R0 = " +
                             fmt(report.R0));
    const double delta_cap = 1.0 / (2.0 * (1.0 + 12.0 * report.C2));
    if (!(params.delta < delta_cap))
        violations.push_back("delta < 1/(2(1+12 C2)) fails: delta = " + fmt(params.delta) +
                             " >= " + fmt(delta_cap));
    if (!(params.A_lower > 0.0))
        violations.push_back("nu < 1/2 - delta(1+12 C2) fails: lower constant A = " +
                             fmt(params.A_lower) + " is not positive");
    const double lhs = params.nu * params.nu /
                       (report.C1 * report.C1 * (1.0 + params.nu / 3.0));
    const double rhs = 3.0 * std::log(3.0) - 2.0;
    if (!(lhs <= rhs))
        violations.push_back("nu^2/(C1^2 (1+nu/3)) <= 3 log 3 - 2 fails: " + fmt(lhs) +
                             " > " + fmt(rhs));
    return violations;
}

std::pair<TheoremParams, std::vector<std::string>> plan_experiment_unchecked(
    const ConstantsReport& report, double R, double delta, double nu, double epsilon,
    double gamma) {
    if (!(R > 0.0)) throw UsageError("cube side must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0,1)");
    if (!(nu > 0.0 && nu < 1.0)) throw UsageError("nu must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must lie in (0,1)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw UsageError("gamma must lie in (0,1)");

    TheoremParams p;
    p.R = R;
    p.delta = delta;
    p.nu = nu;
    p.epsilon = epsilon;
    p.gamma = gamma;
    p.A_lower = 0.5 - delta - nu - 12.0 * delta * report.C2;

    const int n = report.dim;
    const double rn = std::pow(R, n);
    const double count_bound = std::pow(report.beta, n) *
                               std::pow(R, n * n / report.alpha_prime);
    const double log_arg = 2.0 * count_bound / epsilon;
    if (!std::isfinite(log_arg) || log_arg <= 0.0)
        throw OverflowError("eigenvalue count bound overflows: beta = " + fmt(report.beta));
    const double s_real = rn * ((1.0 + nu / 3.0) / (nu * nu)) * std::log(log_arg);
    if (!std::isfinite(s_real) || s_real > 1e12)
        throw OverflowError("required sample count overflows: " + fmt(s_real));
    p.s_min = static_cast<long>(std::ceil(s_real));
    p.N0_budget = 3.0 * static_cast<double>(p.s_min) / rn;

    return {p, check_constraints(report, p)};
}

TheoremParams plan_experiment(const ConstantsReport& report, double R, double delta, double nu,
                              double epsilon, double gamma) {
    auto [params, violations] = plan_experiment_unchecked(report, R, delta, nu, epsilon, gamma);
    if (!violations.empty()) {
        std::string msg = "experiment parameters violate the sampling theorem:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw ConstraintViolation(msg);
    }
    return params;
}

}  // namespace sis
