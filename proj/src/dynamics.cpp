#include <ellidyn/dynamics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <ellidyn/errors.hpp>

namespace ellidyn
{

std::optional<int> OrbitTrace::capture_step() const
{
    if (const auto *p = std::get_if<OrbitPoleHit>(&outcome)) {
        return p->step;
    }
    if (const auto *e = std::get_if<EscapedSphericalBall>(&outcome)) {
        return e->step;
    }
    return std::nullopt;
}

double escape_radius(const Lattice &lat, const ToleranceConfig &cfg)
{
    const double r = cfg.pole_eps * std::abs(lat.lambda);
    return 1.0 / (r * r);
}

OrbitTrace iterate(const Lattice &lat, Complex z0, int max_iter, const ToleranceConfig &cfg)
{
    OrbitTrace trace;
    trace.start = z0;
    trace.points.reserve(static_cast<std::size_t>(std::max(max_iter, 0)) + 1);
    trace.points.push_back(z0);
    const double r_esc = escape_radius(lat, cfg);
    for (int k = 0;; ++k) {
        const Complex z = trace.points.back();
        if (!is_finite(z) || std::abs(z) > r_esc) {
            trace.outcome = EscapedSphericalBall{k};
            break;
        }
        const Reduced r = reduce(z, lat);
        if (pole_distance(r, lat) < cfg.pole_eps) {
            trace.outcome = OrbitPoleHit{k, r.m, r.n};
            break;
        }
        if (k >= max_iter) {
            trace.outcome = BudgetExhausted{};
            break;
        }
        const WpValue v = wp_with_derivative(z, lat, cfg);
        trace.derivs.push_back(v.derivative);
        trace.sph_derivs.push_back(sph_deriv(v.derivative, z, v.value));
        trace.points.push_back(v.value);
    }
    return trace;
}

namespace
{

struct IterateResult {
    Complex value;
    Complex derivative;
};

IterateResult iterate_with_derivative(Complex w, int p, const Lattice &lat, const ToleranceConfig &cfg)
{
    Complex d = 1.0;
    for (int i = 0; i < p; ++i) {
        const WpValue v = wp_with_derivative(w, lat, cfg);
        d *= v.derivative;
        w = v.value;
    }
    return {w, d};
}

double point_scale(Complex z)
{
    return std::max(1.0, std::abs(z));
}

} // namespace

std::optional<Cycle> find_cycle(const OrbitTrace &trace, const Lattice &lat, double tol, int max_period,
                                const ToleranceConfig &cfg)
{
    if (!trace.exhausted()) {
        return std::nullopt;
    }
    const std::size_t len = trace.points.size();
    if (max_period < 1 || len < 2 * static_cast<std::size_t>(max_period)) {
        throw std::invalid_argument("find_cycle needs at least 2*max_period orbit points");
    }
    const std::size_t last = len - 1;
    const Complex tail = trace.points[last];
    int period = 0;
    for (int p = 1; p <= max_period; ++p) {
        const std::size_t up = static_cast<std::size_t>(p);
        if (std::abs(trace.points[last - up] - tail) < tol * point_scale(tail)
            && std::abs(trace.points[last - 1 - up] - trace.points[last - 1]) < tol * point_scale(tail)) {
            period = p;
            break;
        }
    }
    if (period == 0) {
        return std::nullopt;
    }

    Complex w = tail;
    bool converged = false;
    try {
        for (int it = 0; it < 50; ++it) {
            const IterateResult r = iterate_with_derivative(w, period, lat, cfg);
            const Complex residual = r.value - w;
            if (std::abs(residual) < 1e-3 * cfg.newton_tol * point_scale(w)) {
                converged = true;
                break;
            }
            const Complex slope = r.derivative - 1.0;
            if (std::abs(slope) == 0.0) {
                break;
            }
            const Complex step = residual / slope;
            w -= step;
            if (std::abs(step) < 1e-3 * cfg.newton_tol * point_scale(w)) {
                converged = true;
                break;
            }
        }
    } catch (const PoleHit &) {
        throw NewtonDivergence("cycle refinement ran into a pole");
    }
    if (!converged) {
        throw NewtonDivergence("cycle refinement did not converge in 50 steps");
    }
    const IterateResult final = iterate_with_derivative(w, period, lat, cfg);
    if (!(std::abs(final.value - w) < cfg.newton_tol)) {
        throw NewtonDivergence("refined cycle point fails the return test");
    }
    return Cycle{period, w, final.derivative};
}

std::vector<Complex> cycle_orbit(const Cycle &cycle, const Lattice &lat, const ToleranceConfig &cfg)
{
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(cycle.period));
    Complex z = cycle.point;
    for (int i = 0; i < cycle.period; ++i) {
        pts.push_back(z);
        z = wp(z, lat, cfg);
    }
    return pts;
}

namespace
{

bool same_cycle(const std::vector<Complex> &a, const std::vector<Complex> &b, double sep)
{
    double best = std::numeric_limits<double>::infinity();
    for (const Complex &x : a) {
        for (const Complex &y : b) {
            best = std::min(best, sph_dist(x, y));
        }
    }
    return best <= sep;
}

} // namespace

Verdict classify(LatticeKind kind, Complex lambda, int budget, const ToleranceConfig &cfg, const ClassifyOptions &opts)
{
    const Lattice lat = make_lattice(kind, lambda, cfg);
    // e_2 = -e_1 shares the orbit of e_1 after one step and e_3 = 0 is a
    // pole, so the square family only needs e_1.
    const std::size_t n_starts = kind == LatticeKind::Triangular ? 3 : 1;

    std::vector<OrbitTrace> traces;
    traces.reserve(n_starts);
    for (std::size_t i = 0; i < n_starts; ++i) {
        traces.push_back(iterate(lat, lat.crit_values[i], budget, cfg));
    }

    const bool all_captured =
        std::all_of(traces.begin(), traces.end(), [](const OrbitTrace &t) { return t.capture_step().has_value(); });
    if (all_captured) {
        AllCriticalPrepole out;
        for (const OrbitTrace &t : traces) {
            out.steps.push_back(*t.capture_step());
        }
        if (kind == LatticeKind::Square) {
            out.steps.push_back(out.steps.front());
            out.steps.push_back(0);
        }
        return out;
    }

    const Indeterminate undecided{budget};
    const bool all_exhausted = std::all_of(traces.begin(), traces.end(), [](const OrbitTrace &t) { return t.exhausted(); });
    if (!all_exhausted || traces.front().points.size() < 2 * static_cast<std::size_t>(opts.max_period)) {
        return undecided;
    }

    std::vector<Cycle> cycles;
    for (const OrbitTrace &t : traces) {
        std::optional<Cycle> c;
        try {
            c = find_cycle(t, lat, opts.cycle_tol, opts.max_period, cfg);
        } catch (const NewtonDivergence &) {
            return undecided;
        }
        if (!c || !(std::abs(c->multiplier) < 1.0 - opts.parabolic_margin)) {
            return undecided;
        }
        cycles.push_back(*c);
    }

    const double sep = 10.0 * cfg.newton_tol;
    std::vector<std::vector<Complex>> orbits;
    for (const Cycle &c : cycles) {
        orbits.push_back(cycle_orbit(c, lat, cfg));
    }
    int distinct = 0;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) {
            seen = seen || same_cycle(orbits[i], orbits[j], sep);
        }
        distinct += seen ? 0 : 1;
    }
    if (kind == LatticeKind::Triangular && distinct != 1 && distinct != 3) {
        return undecided;
    }
    return AttractingCycles{distinct, cycles.front(), cycles};
}

const char *verdict_tag(const Verdict &v)
{
    if (std::holds_alternative<AttractingCycles>(v)) {
        return "AttractingCycles";
    }
    if (std::holds_alternative<AllCriticalPrepole>(v)) {
        return "AllCriticalPrepole";
    }
    return "Indeterminate";
}

} // namespace ellidyn
