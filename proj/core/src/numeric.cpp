#include "ratingforge/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace ratingforge {

const char* to_string(solver_errc c) {
    switch (c) {
        case solver_errc::bracket_failure: return "bracket-failure";
        case solver_errc::no_root: return "no-root";
        case solver_errc::grid_too_large: return "grid-too-large";
        case solver_errc::precondition_violated: return "precondition-violated";
        case solver_errc::degenerate_cost: return "degenerate-cost";
        case solver_errc::malformed_scheme: return "malformed-scheme";
        case solver_errc::divergence: return "divergence";
        case solver_errc::validity_violated: return "validity-violated";
    }
    return "unknown";
}

std::size_t worker_count() {
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RATING_FORGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return std::min<std::size_t>(hw, static_cast<std::size_t>(v));
    }
    return hw;
}

namespace num {

double find_root(const Fn& f, double lo, double hi, double tol_resid) {
    double flo = f(lo);
    double fhi = f(hi);
    if (std::abs(flo) <= tol_resid) return lo;
    if (std::abs(fhi) <= tol_resid) return hi;
    if ((flo > 0) == (fhi > 0))
        throw solver_error(solver_errc::bracket_failure,
                           "find_root: endpoints do not bracket a sign change");
    for (int it = 0; it < 200; ++it) {
        // secant proposal, clipped into the bracket; fall back to midpoint
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        double mid = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = mid;
        // alternate with plain bisection so the bracket keeps shrinking
        if (it % 2 == 1) x = mid;
        double fx = f(x);
        if (std::abs(fx) <= tol_resid || hi - lo < 1e-15 * (1.0 + std::abs(x)))
            return x;
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    return 0.5 * (lo + hi);
}

double find_crossing_increasing(const Fn& g, double lo, double hi, double target,
                                double tol_resid) {
    if (g(lo) >= target) return lo;
    if (g(hi) < target - tol_resid)
        throw solver_error(solver_errc::bracket_failure,
                           "find_crossing_increasing: level never reached on bracket");
    // bisect on the predicate g(x) >= target; converges to the infimum of the
    // solution set even when g is flat at the level
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const Fn& f, double a, double fa, double m, double fm, double b,
                double fb, double whole, double rel_tol, double abs_tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, flm, m, fm);
    double right = simpson(m, fm, frm, b, fb);
    double delta = left + right - whole;
    if (!std::isfinite(delta)) return left + right;
    if (depth <= 0 ||
        std::abs(delta) <= 15.0 * std::max(abs_tol, rel_tol * std::abs(left + right)))
        return left + right + delta / 15.0;
    return adaptive(f, a, fa, lm, flm, m, fm, left, rel_tol, 0.5 * abs_tol, depth - 1) +
           adaptive(f, m, fm, rm, frm, b, fb, right, rel_tol, 0.5 * abs_tol, depth - 1);
}

double integrate_panel(const Fn& f, double a, double b, double rel_tol,
                       double abs_tol) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(a, fa, fm, b, fb);
    return adaptive(f, a, fa, m, fm, b, fb, whole, rel_tol, abs_tol, 50);
}

}  // namespace

double integrate(const Fn& f, double a, double b, const std::vector<double>& breakpoints,
                 double rel_tol, double abs_tol) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a, b};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate_panel(f, cuts[i], cuts[i + 1], rel_tol, abs_tol);
    return sign * total;
}

std::vector<double> cumulative(const Fn& f, const std::vector<double>& xs,
                               double rel_tol, double abs_tol) {
    std::vector<double> out(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i)
        out[i] = out[i - 1] + integrate_panel(f, xs[i - 1], xs[i], rel_tol, abs_tol);
    return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
    std::vector<double> out(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
    return out;
}

std::vector<double> cumulative_parabolic(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) return cumulative_trapezoid(xs, ys);
    auto quad_piece = [&](std::size_t i0, std::size_t i1, std::size_t i2, double a,
                          double b) {
        // integral over [a,b] of the parabola through the three nodes, in
        // cell-local coordinates to avoid cancellation on fine grids
        double c = xs[i1];
        double x0 = xs[i0] - c, x1 = 0.0, x2 = xs[i2] - c;
        double y0 = ys[i0], y1 = ys[i1], y2 = ys[i2];
        double d0 = (x0 - x1) * (x0 - x2);
        double d1 = (x1 - x0) * (x1 - x2);
        double d2 = (x2 - x0) * (x2 - x1);
        auto I = [&](double x) {
            double t0 = (x * x * x / 3.0 - (x1 + x2) * x * x / 2.0 + x1 * x2 * x) / d0;
            double t1 = (x * x * x / 3.0 - (x0 + x2) * x * x / 2.0 + x0 * x2 * x) / d1;
            double t2 = (x * x * x / 3.0 - (x0 + x1) * x * x / 2.0 + x0 * x1 * x) / d2;
            return y0 * t0 + y1 * t1 + y2 * t2;
        };
        return I(b - c) - I(a - c);
    };
    for (std::size_t i = 1; i < n; ++i) {
        // average the two parabolas that cover the gap (one-sided at the ends)
        double left = (i >= 2) ? quad_piece(i - 2, i - 1, i, xs[i - 1], xs[i])
                               : quad_piece(0, 1, 2, xs[i - 1], xs[i]);
        double right = (i + 1 < n) ? quad_piece(i - 1, i, i + 1, xs[i - 1], xs[i])
                                   : quad_piece(n - 3, n - 2, n - 1, xs[i - 1], xs[i]);
        out[i] = out[i - 1] + 0.5 * (left + right);
    }
    return out;
}

double golden_minimize(const Fn& f, double lo, double hi, double tol_x) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol_x * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = a;
        return xs;
    }
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    xs.back() = b;
    return xs;
}

GridMin min_scan(const Fn& f, double a, double b, std::size_t n, int refine_factor) {
    GridMin best;
    if (!(b > a)) {
        best.x = a;
        best.value = f(a);
        return best;
    }
    n = std::max<std::size_t>(n, 3);
    std::vector<double> xs = linspace(a, b, n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = f(xs[i]);
    std::size_t imin = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (ys[i] < ys[imin]) imin = i;
    best.x = xs[imin];
    best.value = ys[imin];

    auto refine_cell = [&](std::size_t i) {
        double lo = xs[i], hi = xs[i + 1];
        for (int k = 1; k < refine_factor; ++k) {
            double x = lo + (hi - lo) * k / refine_factor;
            double y = f(x);
            if (y < best.value) {
                best.value = y;
                best.x = x;
            }
        }
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bool sign_change = (ys[i] < 0) != (ys[i + 1] < 0);
        bool near_min = (i + 1 >= imin && i <= imin + 1);
        if (sign_change || near_min) refine_cell(i);
    }
    return best;
}

Pchip::Pchip(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw spec_error("Pchip: need >= 2 nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw spec_error("Pchip: abscissae must be strictly increasing");
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs_[i + 1] - xs_[i];
        s[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    // Fritsch-Carlson node slopes: shape-preserving weighted harmonic means
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    };
    d_[0] = (n == 2) ? s[0] : end_slope(h[0], h[1], s[0], s[1]);
    d_[n - 1] = (n == 2) ? s[0] : end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
}

std::size_t Pchip::segment(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    if (i == 0) return 0;
    if (i >= xs_.size()) return xs_.size() - 2;
    return i - 1;
}

double Pchip::operator()(double x) const {
    x = std::clamp(x, xs_.front(), xs_.back());
    std::size_t i = segment(x);
    double h = xs_[i + 1] - xs_[i];
    double t = (x - xs_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * ys_[i] + h10 * h * d_[i] + h01 * ys_[i + 1] + h11 * h * d_[i + 1];
}

double Pchip::derivative(double x) const {
    x = std::clamp(x, xs_.front(), xs_.back());
    std::size_t i = segment(x);
    double h = xs_[i + 1] - xs_[i];
    double t = (x - xs_[i]) / h;
    double g00 = (6 * t * t - 6 * t) / h;
    double g10 = 3 * t * t - 4 * t + 1;
    double g01 = (6 * t - 6 * t * t) / h;
    double g11 = 3 * t * t - 2 * t;
    return g00 * ys_[i] + g10 * d_[i] + g01 * ys_[i + 1] + g11 * d_[i + 1];
}

std::vector<double> rk4(const std::function<double(double, double)>& f,
                        const std::vector<double>& xs, double y0) {
    std::vector<double> ys(xs.size());
    if (xs.empty()) return ys;
    ys[0] = y0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double x = xs[i - 1], y = ys[i - 1];
        double h = xs[i] - x;
        double k1 = f(x, y);
        double k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
        double k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
        double k4 = f(x + h, y + h * k3);
        ys[i] = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return ys;
}

}  // namespace num
}  // namespace ratingforge
