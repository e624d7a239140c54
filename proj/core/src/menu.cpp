#include "ratingforge/menu.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "ratingforge/numeric.hpp"

namespace ratingforge {

double best_response(const CostFn& cost, const Menu& menu, double theta) {
    double best_q = 0.0, best_u = 0.0;  // outside option
    for (double q : menu.levels) {
        double u = theta * q - cost.c(q);
        if (u >= best_u) {  // ties go to the larger quality (ascending scan)
            best_u = u;
            best_q = q;
        }
    }
    return best_q;
}

namespace {

// Shared threshold/payoff engine for the menu oracles. Item -1 is the outside
// option; thresholds between items are the agent indifference types
// (c(q_b) - c(q_a)) / (q_b - q_a). Payoffs fold right-to-left so the brute
// force and the DP produce bit-identical sums for identical item sequences.
class MenuEngine {
public:
    MenuEngine(const ProblemSpec& spec, std::vector<double> grid)
        : spec_(spec), q_(std::move(grid)) {
        const std::size_t n = q_.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(q_[i + 1] > q_[i]))
                throw spec_error("menu grid must be strictly increasing");
        for (double q : q_)
            if (!(q > 0.0)) throw spec_error("menu grid levels must be positive");

        tau_.assign(n + 1, std::vector<double>(n, 0.0));
        for (std::size_t j = 0; j < n; ++j)
            tau_[0][j] = spec.cost().c(q_[j]) / q_[j];  // outside-option threshold
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                tau_[i + 1][j] =
                    (spec.cost().c(q_[j]) - spec.cost().c(q_[i])) / (q_[j] - q_[i]);

        // prefix payoff integral per item at every threshold it can meet
        const double lo = spec.theta_lo(), hi = spec.theta_hi();
        auto breaks = spec.dist().breakpoints();
        C_.assign(n, {});
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> cuts;
            for (std::size_t i = 0; i <= j; ++i) cuts.push_back(clamp(tau_[i][j]));
            for (std::size_t k = j + 1; k < n; ++k) cuts.push_back(clamp(tau_[j + 1][k]));
            cuts.push_back(hi);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            std::vector<double> vals(cuts.size(), 0.0);
            double acc = 0.0, prev = lo;
            for (std::size_t m = 0; m < cuts.size(); ++m) {
                acc += num::integrate(
                    [&](double t) { return spec.psi(q_[j], t) * spec.dist().pdf(t); },
                    prev, cuts[m], breaks, spec.options().quad_rel, spec.options().quad_abs);
                vals[m] = acc;
                prev = cuts[m];
            }
            C_[j] = {std::move(cuts), std::move(vals)};
        }
    }

    std::size_t size() const { return q_.size(); }
    const std::vector<double>& levels() const { return q_; }
    // threshold between i (or outside when i == -1) and j > i
    double tau(int i, std::size_t j) const { return tau_[static_cast<std::size_t>(i + 1)][j]; }
    double theta_hi() const { return spec_.theta_hi(); }

    double prefix(std::size_t j, double x) const {
        const auto& [cuts, vals] = C_[j];
        double cx = clamp(x);
        auto it = std::lower_bound(cuts.begin(), cuts.end(), cx);
        // thresholds are always pre-registered, so an exact hit is guaranteed
        return vals[static_cast<std::size_t>(it - cuts.begin())];
    }

    // contribution of item j chosen on [tau(i,j), exit)
    double contrib(int i, std::size_t j, double exit) const {
        return prefix(j, exit) - prefix(j, tau(i, j));
    }

    // payoff of a sorted item sequence under envelope (domination) semantics;
    // identical fold order to the DP recursion
    double sequence_payoff(const std::vector<std::size_t>& items) const {
        thread_local std::vector<std::size_t> stack;
        thread_local std::vector<double> entry;
        stack.clear();
        entry.clear();
        for (std::size_t j : items) {
            while (!stack.empty() && tau(static_cast<int>(stack.back()), j) <= entry.back()) {
                stack.pop_back();
                entry.pop_back();
            }
            int prev = stack.empty() ? -1 : static_cast<int>(stack.back());
            stack.push_back(j);
            entry.push_back(tau(prev, j));
        }
        double acc = 0.0;
        for (std::size_t t = stack.size(); t-- > 0;) {
            double exit = (t + 1 < stack.size()) ? entry[t + 1] : theta_hi();
            int prev = (t == 0) ? -1 : static_cast<int>(stack[t - 1]);
            acc = contrib(prev, stack[t], exit) + acc;
        }
        return acc;
    }

private:
    double clamp(double x) const {
        return std::min(std::max(x, spec_.theta_lo()), spec_.theta_hi());
    }

    const ProblemSpec& spec_;
    std::vector<double> q_;
    std::vector<std::vector<double>> tau_;  // [i+1][j]
    std::vector<std::pair<std::vector<double>, std::vector<double>>> C_;
};

// (value desc, size asc, lexicographic asc) with exact value comparison: the
// shared tie-break of both oracles
bool menu_better(double va, const std::vector<double>& ma, double vb,
                 const std::vector<double>& mb) {
    if (va != vb) return va > vb;
    if (ma.size() != mb.size()) return ma.size() < mb.size();
    return ma < mb;
}

}  // namespace

double menu_payoff(const ProblemSpec& spec, const Menu& menu) {
    std::vector<double> levels = menu.levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty()) return 0.0;
    MenuEngine eng(spec, levels);
    std::vector<std::size_t> all(levels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return eng.sequence_payoff(all);
}

MenuSolution brute_force_menus(const ProblemSpec& spec, const std::vector<double>& grid) {
    if (grid.size() > 20)
        throw solver_error(solver_errc::grid_too_large,
                           "brute_force_menus: grid size > 20 (2^n enumeration)");
    MenuEngine eng(spec, grid);
    const std::size_t n = eng.size();
    const std::uint64_t total = std::uint64_t(1) << n;

    auto scan_block = [&](std::uint64_t begin, std::uint64_t end) {
        double best_v = 0.0;
        std::vector<double> best_m;  // empty menu payoff 0
        std::vector<std::size_t> items;
        std::vector<double> levels;
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            items.clear();
            levels.clear();
            for (std::size_t b = 0; b < n; ++b)
                if (mask & (std::uint64_t(1) << b)) {
                    items.push_back(b);
                    levels.push_back(eng.levels()[b]);
                }
            double v = eng.sequence_payoff(items);
            if (menu_better(v, levels, best_v, best_m)) {
                best_v = v;
                best_m = levels;
            }
        }
        return std::make_pair(best_v, best_m);
    };

    const std::size_t workers = std::min<std::size_t>(worker_count(), 8);
    std::vector<std::future<std::pair<double, std::vector<double>>>> futs;
    if (workers > 1 && total > 4096) {
        std::uint64_t chunk = (total + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::uint64_t b = w * chunk, e = std::min(total, b + chunk);
            if (b >= e) break;
            futs.push_back(std::async(std::launch::async, scan_block, b, e));
        }
    } else {
        futs.push_back(std::async(std::launch::deferred, scan_block, std::uint64_t(0), total));
    }
    double best_v = 0.0;
    std::vector<double> best_m;
    for (auto& f : futs) {
        auto [v, m] = f.get();
        if (menu_better(v, m, best_v, best_m)) {
            best_v = v;
            best_m = m;
        }
    }
    return {Menu{best_m}, best_v};
}

MenuSolution dp_optimal_menu(const ProblemSpec& spec, const std::vector<double>& grid) {
    MenuEngine eng(spec, grid);
    const std::size_t n = eng.size();
    if (n == 0) return {Menu{}, 0.0};

    // state (i, j): item j follows item i (i == -1 for the outside option);
    // best[i+1][j] = value of the optimal continuation startingwith j's interval
    struct Cell {
        double value = 0.0;
        std::size_t count = 1;   // items from j on
        int next = -1;           // chosen successor, -1 = stop
    };
    std::vector<std::vector<Cell>> best(n + 1, std::vector<Cell>(n));

    for (std::size_t j = n; j-- > 0;) {
        for (int i = static_cast<int>(j) - 1; i >= -1; --i) {
            double entry = eng.tau(i, j);
            Cell cell;  // stop: j is the last item
            cell.value = eng.contrib(i, j, eng.theta_hi());
            cell.count = 1;
            cell.next = -1;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (!(eng.tau(static_cast<int>(j), k) > entry)) continue;  // j dominated
                const Cell& cont = best[j + 1][k];
                double v = eng.contrib(i, j, eng.tau(static_cast<int>(j), k)) + cont.value;
                std::size_t cnt = 1 + cont.count;
                // tie-break mirrors the subset comparator: value, then menu
                // size, then first differing level (k ascending)
                bool better = v > cell.value ||
                              (v == cell.value &&
                               (cnt < cell.count ||
                                (cnt == cell.count && cell.next != -1 &&
                                 static_cast<int>(k) < cell.next)));
                if (better) {
                    cell.value = v;
                    cell.count = cnt;
                    cell.next = static_cast<int>(k);
                }
            }
            best[static_cast<std::size_t>(i + 1)][j] = cell;
        }
    }

    double best_v = 0.0;
    std::vector<double> best_m;
    for (std::size_t j = 0; j < n; ++j) {
        const Cell& c = best[0][j];
        std::vector<double> m;
        m.reserve(c.count);
        int cur = static_cast<int>(j);
        int prev = -1;
        while (cur != -1) {
            m.push_back(eng.levels()[static_cast<std::size_t>(cur)]);
            int nxt = best[static_cast<std::size_t>(prev + 1)][static_cast<std::size_t>(cur)].next;
            prev = cur;
            cur = nxt;
        }
        if (menu_better(c.value, m, best_v, best_m)) {
            best_v = c.value;
            best_m = m;
        }
    }
    return {Menu{best_m}, best_v};
}

std::vector<double> anchored_quality_grid(const ProblemSpec& spec, double cutoff,
                                          std::size_t n) {
    std::vector<double> grid;
    double q_std = spec.q_indiff(cutoff);
    double q_top = spec.q_full(spec.theta_hi());
    if (q_std > 0) grid.push_back(q_std);
    if (q_top > q_std + 1e-9) {
        // revealing-range levels q_f(theta) spread over (theta_L, theta_hi]
        double thetaL = spec.theta_L(cutoff);
        std::size_t m = n > grid.size() ? n - grid.size() : 1;
        for (std::size_t k = 1; k <= m; ++k) {
            double t = thetaL + (spec.theta_hi() - thetaL) * double(k) / double(m);
            grid.push_back(spec.q_full(t));
        }
    } else {
        // pass/fail range: bracket the standard from both sides
        while (grid.size() < n) {
            double frac = double(grid.size()) / double(n);
            grid.push_back(q_std * (0.5 + 0.6 * frac));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
    return grid;
}

IcAuditReport ic_audit(const ProblemSpec& spec, const DeterministicScheme& scheme) {
    IcAuditReport rep;
    scheme.validate_basic(spec);
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    auto add = [&](const std::string& what, double at, double resid) {
        rep.checks.push_back({what, at, std::abs(resid)});
        rep.max_residual = std::max(rep.max_residual, std::abs(resid));
    };

    for (std::size_t i = 0; i < scheme.segments.size(); ++i) {
        const Segment& s = scheme.segments[i];
        if (s.kind == SegmentKind::pooling) {
            // backward width: pooling must reach the clamped c' inverse of its
            // own standard before any jump up
            double reach = std::min(spec.cost().cp(s.standard), hi);
            add("pooling-width", s.hi, std::max(0.0, reach - s.hi));
        }
        if (s.kind == SegmentKind::reveal) {
            for (double t : {s.lo, 0.5 * (s.lo + s.hi), s.hi}) {
                double q = spec.q_full(t);
                add("reveal-foc", t, spec.cost().cp(q) - t);
            }
        }
    }

    // jump conditions at interior discontinuities
    for (std::size_t i = 1; i < scheme.segments.size(); ++i) {
        const Segment& a = scheme.segments[i - 1];
        const Segment& b = scheme.segments[i];
        double t = b.lo;
        double q_left = a.kind == SegmentKind::reveal ? spec.q_full(t)
                        : a.kind == SegmentKind::pooling ? a.standard
                                                         : 0.0;
        double q_right = b.kind == SegmentKind::reveal ? spec.q_full(t) : b.standard;
        if (std::abs(q_right - q_left) <= 1e-10) continue;  // continuous boundary
        double u_left = t * q_left - spec.cost().c(q_left);
        double u_right = t * q_right - spec.cost().c(q_right);
        add("jump-indifference", t, u_right - u_left);
        if (a.kind == SegmentKind::exclusion) {
            // participation jump: the standard equals q_i at the cutoff
            add("participation-standard", t, q_right - spec.q_indiff(t));
        }
    }

    // no exclusion: IR of the lowest type must hold at the bottom standard
    const Segment& first = scheme.segments.front();
    if (first.kind == SegmentKind::pooling)
        add("bottom-ir", lo, std::max(0.0, first.standard - spec.q_indiff(lo)));

    rep.ok = rep.max_residual <= 1e-8;
    return rep;
}

void ic_audit_or_throw(const ProblemSpec& spec, const DeterministicScheme& scheme) {
    IcAuditReport rep = ic_audit(spec, scheme);
    if (!rep.ok)
        throw solver_error(solver_errc::malformed_scheme,
                           "scheme fails the IC audit (max residual " +
                               std::to_string(rep.max_residual) + ")");
}

std::pair<double, double> additive_cost_constants(const CostFn& cost) {
    double hi = 1.0;
    for (int k = 0; k < 60 && cost.cp(hi) < 1.0; ++k) hi *= 2.0;
    double e_f = num::find_crossing_increasing([&](double e) { return cost.cp(e); }, 0.0,
                                               hi, 1.0, 1e-12);
    // c(e) - e is negative near 0 (c'(0) = 0) and positive for large e
    double lo2 = 1e-9, hi2 = std::max(2.0 * e_f, 1.0);
    for (int k = 0; k < 60 && cost.c(hi2) - hi2 < 0.0; ++k) hi2 *= 2.0;
    double e_i =
        num::find_root([&](double e) { return cost.c(e) - e; }, lo2, hi2, 1e-12);
    return {e_f, e_i};
}

double additive_cutoff_margin(const Distribution& dist, double theta0) {
    return 2.0 * dist.pdf(theta0) - (dist.cdf(theta0 + 1.0) - dist.cdf(theta0 - 1.0));
}

}  // namespace ratingforge
