#include <ellidyn/misiurewicz.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <ellidyn/dynamics.hpp>
#include <ellidyn/errors.hpp>
#include <ellidyn/numerics.hpp>

namespace ellidyn
{

Complex pole_location(LatticeKind kind, Complex lambda, long j, long k)
{
    return (static_cast<double>(j) + static_cast<double>(k) * generator_ratio(kind)) * lambda;
}

Complex prepole_residual(LatticeKind kind, Complex lambda, int n, long j, long k, const ToleranceConfig &cfg)
{
    if (n < 0) {
        throw std::invalid_argument("prepole order must be >= 0");
    }
    const Lattice lat = make_lattice(kind, lambda, cfg);
    Complex z = lat.crit_values[0];
    for (int step = 0; step < n; ++step) {
        if (!is_finite(z) || is_pole_hit(z, lat, cfg)) {
            throw PrematurePole(step);
        }
        z = wp(z, lat, cfg);
    }
    if (!is_finite(z)) {
        throw PrematurePole(n);
    }
    return z - pole_location(kind, lambda, j, k);
}

namespace
{

double abs_residual_or_inf(LatticeKind kind, Complex lambda, int n, long j, long k, const ToleranceConfig &cfg)
{
    try {
        return std::abs(prepole_residual(kind, lambda, n, j, k, cfg));
    } catch (const Error &) {
        return std::numeric_limits<double>::infinity();
    }
}

std::optional<Complex> polish(LatticeKind kind, int n, long j, long k, Complex lambda, const Region &region,
                              const ToleranceConfig &cfg, const FindOptions &opts)
{
    const double h = 1e-7 * region.diameter();
    const double slack = 0.1 * region.diameter();
    const Region outer{region.re_min - slack, region.re_max + slack, region.im_min - slack, region.im_max + slack};
    try {
        for (int it = 0; it < opts.max_newton; ++it) {
            const Complex g = prepole_residual(kind, lambda, n, j, k, cfg);
            if (g == Complex{}) {
                return lambda;
            }
            const Complex dg = (prepole_residual(kind, lambda + h, n, j, k, cfg)
                                - prepole_residual(kind, lambda - h, n, j, k, cfg))
                               / (2.0 * h);
            if (std::abs(dg) == 0.0) {
                return std::nullopt;
            }
            const Complex step = g / dg;
            lambda -= step;
            if (!is_finite(lambda) || !outer.contains(lambda) || lambda == Complex{}) {
                return std::nullopt;
            }
            if (std::abs(step) <= 1e-3 * cfg.newton_tol * std::max(1.0, std::abs(lambda))) {
                return lambda;
            }
        }
    } catch (const Error &) {
    }
    return std::nullopt;
}

} // namespace

std::optional<int> zero_count(LatticeKind kind, int n, long j, long k, Complex center, double rho,
                              const ToleranceConfig &cfg, int max_samples)
{
    const auto g = [&](Complex lambda) { return prepole_residual(kind, lambda, n, j, k, cfg); };
    try {
        for (int samples = 64; samples <= max_samples; samples *= 2) {
            const WindingResult w = winding_on_circle(g, center, rho, samples);
            if (!(w.min_modulus > 0.0) || !std::isfinite(w.min_modulus)) {
                return std::nullopt;
            }
            if (w.max_increment < 0.25 * std::numbers::pi) {
                return w.winding;
            }
        }
    } catch (const Error &) {
    }
    return std::nullopt;
}

std::vector<PrepoleRoot> find_prepole_params(LatticeKind kind, int n, long j, long k, const Region &region, int grid,
                                             const ToleranceConfig &cfg, const FindOptions &opts)
{
    if (grid < 8) {
        throw std::invalid_argument("find_prepole_params needs grid >= 8");
    }
    if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max)) {
        throw std::invalid_argument("empty parameter region");
    }
    if (region.contains(Complex{})) {
        throw std::invalid_argument("parameter region must exclude lambda = 0");
    }
    const double dx = (region.re_max - region.re_min) / (grid - 1);
    const double dy = (region.im_max - region.im_min) / (grid - 1);
    const auto node = [&](int a, int b) { return Complex{region.re_min + a * dx, region.im_min + b * dy}; };

    std::vector<double> mag(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
#pragma omp parallel for schedule(dynamic, 4)
    for (int b = 0; b < grid; ++b) {
        for (int a = 0; a < grid; ++a) {
            mag[static_cast<std::size_t>(b) * grid + a] = abs_residual_or_inf(kind, node(a, b), n, j, k, cfg);
        }
    }

    std::vector<Complex> seeds;
    for (int b = 0; b < grid; ++b) {
        for (int a = 0; a < grid; ++a) {
            const double v = mag[static_cast<std::size_t>(b) * grid + a];
            if (!(v < opts.seed_threshold)) {
                continue;
            }
            bool minimum = true;
            for (int db = -1; db <= 1 && minimum; ++db) {
                for (int da = -1; da <= 1; ++da) {
                    const int na = a + da;
                    const int nb = b + db;
                    if ((da == 0 && db == 0) || na < 0 || nb < 0 || na >= grid || nb >= grid) {
                        continue;
                    }
                    if (mag[static_cast<std::size_t>(nb) * grid + na] < v) {
                        minimum = false;
                        break;
                    }
                }
            }
            if (minimum) {
                seeds.push_back(node(a, b));
            }
        }
    }

    std::vector<std::optional<Complex>> polished(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        polished[i] = polish(kind, n, j, k, seeds[i], region, cfg, opts);
    }

    const double reach = opts.max_seed_cells * std::max(dx, dy);
    std::vector<Complex> found;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto &p = polished[i];
        if (p && region.contains(*p) && std::abs(*p - seeds[i]) <= reach) {
            found.push_back(*p);
        }
    }
    std::sort(found.begin(), found.end(), [](Complex x, Complex y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    std::vector<Complex> unique;
    for (const Complex &z : found) {
        const bool dup = std::any_of(unique.begin(), unique.end(),
                                     [&](Complex u) { return std::abs(u - z) <= 10.0 * cfg.newton_tol; });
        if (!dup) {
            unique.push_back(z);
        }
    }

    std::vector<PrepoleRoot> roots;
    const double max_radius = 0.25 * region.diameter();
    for (const Complex &z : unique) {
        const double residual = abs_residual_or_inf(kind, z, n, j, k, cfg);
        if (!(residual < cfg.newton_tol)) {
            continue;
        }
        double rho = 10.0 * cfg.newton_tol;
        const std::optional<int> mult = zero_count(kind, n, j, k, z, rho, cfg, opts.max_winding_samples);
        if (!mult || *mult < 1) {
            continue;
        }
        for (int step = 0; step < opts.max_doublings && 2.0 * rho <= max_radius; ++step) {
            const std::optional<int> c = zero_count(kind, n, j, k, z, 2.0 * rho, cfg, opts.max_winding_samples);
            if (c != mult) {
                break;
            }
            rho *= 2.0;
        }
        roots.push_back({z, n, j, k, residual, rho, *mult});
    }
    return roots;
}

std::vector<std::optional<int>> critical_capture_steps(LatticeKind kind, Complex lambda, int max_iter,
                                                       const ToleranceConfig &cfg)
{
    const Lattice lat = make_lattice(kind, lambda, cfg);
    const std::size_t starts = kind == LatticeKind::Triangular ? 3 : 1;
    std::vector<std::optional<int>> steps;
    for (std::size_t i = 0; i < starts; ++i) {
        steps.push_back(iterate(lat, lat.crit_values[i], max_iter, cfg).capture_step());
    }
    return steps;
}

const char *to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::NearCritical:
        return "NearCritical";
    case ViolationKind::NearInfinity:
        return "NearInfinity";
    case ViolationKind::PoleHit:
        return "PoleHit";
    }
    return "?";
}

CheckReport misiurewicz_check(LatticeKind kind, Complex lambda, double delta, int M, const ToleranceConfig &cfg)
{
    if (!(delta >= 0.0) || M < 1) {
        throw std::invalid_argument("misiurewicz_check needs delta >= 0 and M >= 1");
    }
    const Lattice lat = make_lattice(kind, lambda, cfg);
    // The square family exempts e_3 = 0, the pole; e_2 = -e_1 follows e_1.
    const std::size_t starts = kind == LatticeKind::Triangular ? 3 : 1;
    std::optional<Violation> first;
    for (std::size_t i = 0; i < starts; ++i) {
        const int limit = first ? first->step - 1 : M;
        if (limit < 0) {
            break;
        }
        const OrbitTrace t = iterate(lat, lat.crit_values[i], limit, cfg);
        const std::optional<int> captured = t.capture_step();
        for (int s = 0; s < static_cast<int>(t.points.size()); ++s) {
            if (captured && s == *captured) {
                first = Violation{s, ViolationKind::PoleHit};
                break;
            }
            const Complex z = t.points[static_cast<std::size_t>(s)];
            if (dist_to_critical(z, lat) < delta) {
                first = Violation{s, ViolationKind::NearCritical};
                break;
            }
            if (sph_dist(z, kInfinity) < delta) {
                first = Violation{s, ViolationKind::NearInfinity};
                break;
            }
        }
    }
    if (first) {
        return {false, first->step + 1, first};
    }
    return {true, M + 1, std::nullopt};
}

std::vector<DensityRow> density_scan(LatticeKind kind, Complex lambda0, const std::vector<double> &radii,
                                     int n_samples, double delta, int M, std::uint64_t seed,
                                     const ToleranceConfig &cfg, Execution exec)
{
    if (n_samples < 100) {
        throw std::invalid_argument("density_scan needs n_samples >= 100");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
            throw std::invalid_argument("radii must be positive and strictly decreasing");
        }
    }
    const auto fails = [&](std::size_t ri, int i) -> long {
        CounterRng rng(seed, ri, static_cast<std::uint64_t>(i));
        const Complex lambda = lambda0 + radii[ri] * uniform_in_unit_disc(rng);
        try {
            return misiurewicz_check(kind, lambda, delta, M, cfg).passed ? 0 : 1;
        } catch (const Error &) {
            return 1;
        }
    };

    std::vector<DensityRow> rows;
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        long failed = 0;
        if (exec == Execution::Parallel) {
#pragma omp parallel for reduction(+ : failed) schedule(dynamic, 16)
            for (int i = 0; i < n_samples; ++i) {
                failed += fails(ri, i);
            }
        } else {
            for (int i = 0; i < n_samples; ++i) {
                failed += fails(ri, i);
            }
        }
        rows.push_back({radii[ri], n_samples, static_cast<double>(failed) / n_samples, seed});
    }
    return rows;
}

namespace
{

struct SourceCell {
    Complex z;
    Complex deriv;
    bool alive;
};

} // namespace

std::optional<int> covering_steps(const Lattice &lat, Complex center, double d, double delta, int maxN, int grid,
                                  const ToleranceConfig &cfg)
{
    if (grid < 64) {
        throw std::invalid_argument("covering_steps needs grid >= 64");
    }
    if (!(d > 0.0) || !(delta > 0.0) || maxN < 0) {
        throw std::invalid_argument("covering_steps needs d > 0, delta > 0 and maxN >= 0");
    }
    if (dist_to_critical(center, lat) < delta || sph_dist(center, kInfinity) < delta
        || is_pole_hit(center, lat, cfg)) {
        throw DiscTouchesU("disc center lies in U_delta");
    }
    if (maxN == 0) {
        return std::nullopt;
    }

    // Critical-ball targets inside the central fundamental cell.
    std::vector<Complex> crit_targets;
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const double s = -0.5 + (a + 0.5) / grid;
            const double t = -0.5 + (b + 0.5) / grid;
            const Complex w = s * lat.gen1 + t * lat.gen2;
            if (dist_to_critical(w, lat) <= delta) {
                crit_targets.push_back(w);
            }
        }
    }
    // Targets in the ball at infinity, in the coordinate zeta = 1/z.
    std::vector<Complex> inf_targets;
    const double zeta_max = delta >= 2.0 ? 1.0 : 1.0 / std::sqrt(4.0 / (delta * delta) - 1.0);
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const Complex zeta{zeta_max * (-1.0 + (2.0 * a + 1.0) / grid),
                               zeta_max * (-1.0 + (2.0 * b + 1.0) / grid)};
            if (std::abs(zeta) <= zeta_max) {
                inf_targets.push_back(zeta);
            }
        }
    }

    const double h = 2.0 * d / grid;
    std::vector<SourceCell> cells;
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const Complex c = center + Complex{-d + (a + 0.5) * h, -d + (b + 0.5) * h};
            if (std::abs(c - center) <= d) {
                cells.push_back({c, 1.0, true});
            }
        }
    }

    for (int m = 1; m <= maxN; ++m) {
        for (SourceCell &c : cells) {
            if (!c.alive) {
                continue;
            }
            if (is_pole_hit(c.z, lat, cfg)) {
                c.alive = false;
                continue;
            }
            const WpValue v = wp_with_derivative(c.z, lat, cfg);
            c.deriv *= v.derivative;
            c.z = v.value;
            c.alive = is_finite(c.z) && is_finite(c.deriv);
        }
        const auto covered_flat = [&](Complex t) {
            for (const SourceCell &c : cells) {
                const double rho = h * std::abs(c.deriv);
                if (c.alive && rho <= 0.5 && std::abs(c.z - t) <= rho) {
                    return true;
                }
            }
            return false;
        };
        const auto covered_inf = [&](Complex zeta) {
            for (const SourceCell &c : cells) {
                if (!c.alive || c.z == Complex{}) {
                    continue;
                }
                const double rho = h * std::abs(c.deriv) / std::norm(c.z);
                if (rho <= 0.5 && std::abs(1.0 / c.z - zeta) <= rho) {
                    return true;
                }
            }
            return false;
        };
        if (std::all_of(crit_targets.begin(), crit_targets.end(), covered_flat)
            && std::all_of(inf_targets.begin(), inf_targets.end(), covered_inf)) {
            return m;
        }
    }
    return std::nullopt;
}

} // namespace ellidyn
