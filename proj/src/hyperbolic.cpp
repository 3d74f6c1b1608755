#include <ellidyn/hyperbolic.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <ellidyn/errors.hpp>
#include <ellidyn/numerics.hpp>

namespace ellidyn
{

HyperbolicSample build_sample(LatticeKind kind, Complex lambda0, int M, double delta, const ToleranceConfig &cfg,
                              const SampleOptions &opts)
{
    if (M < 0 || !(delta >= 0.0)) {
        throw std::invalid_argument("build_sample needs M >= 0 and delta >= 0");
    }
    HyperbolicSample s{kind, lambda0, make_lattice(kind, lambda0, cfg), {}, delta, 0.0, 0.0, 0, opts.a_tilde, {}};
    s.orbit = iterate(s.lattice, s.lattice.crit_values[0], M + opts.extension, cfg);
    const auto captured = s.orbit.capture_step();
    if (captured && *captured <= M) {
        throw SeparationViolated(*captured, SeparationKind::Infinity);
    }

    s.min_crit_dist = std::numeric_limits<double>::infinity();
    s.min_inf_dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= M; ++k) {
        const Complex z = s.orbit.points[static_cast<std::size_t>(k)];
        const double dc = dist_to_critical(z, s.lattice);
        const double di = sph_dist(z, kInfinity);
        if (dc < delta) {
            throw SeparationViolated(k, SeparationKind::Critical);
        }
        if (di < delta) {
            throw SeparationViolated(k, SeparationKind::Infinity);
        }
        s.min_crit_dist = std::min(s.min_crit_dist, dc);
        s.min_inf_dist = std::min(s.min_inf_dist, di);
        s.points.push_back(z);
    }

    // prefix[i] = sum_{j<i} log sph_derivs[j]
    const auto &f = s.orbit.sph_derivs;
    std::vector<double> prefix(f.size() + 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        prefix[i + 1] = prefix[i] + std::log(f[i]);
    }
    const double target = std::log(opts.a_tilde);
    for (int N = 1; N <= opts.max_n_exp; ++N) {
        if (static_cast<std::size_t>(M + N) > f.size()) {
            break;
        }
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= M; ++k) {
            worst = std::min(worst, prefix[static_cast<std::size_t>(k + N)] - prefix[static_cast<std::size_t>(k)]);
        }
        if (worst >= target) {
            s.n_exp = N;
            return s;
        }
    }
    throw NoExpansion("no window N <= " + std::to_string(opts.max_n_exp) + " expands by "
                      + std::to_string(opts.a_tilde) + " on the whole sample");
}

double adapted_metric(Complex z, const Lattice &lat, int N, const ToleranceConfig &cfg)
{
    if (N < 1) {
        throw std::invalid_argument("adapted_metric needs N >= 1");
    }
    const OrbitTrace t = iterate(lat, z, N - 1, cfg);
    if (const auto c = t.capture_step(); c && *c < N - 1) {
        throw PoleOnOrbit(*c);
    }
    double sum = 1.0;
    double prod = 1.0;
    for (int n = 1; n < N; ++n) {
        prod *= t.sph_derivs[static_cast<std::size_t>(n - 1)];
        sum += prod;
    }
    return sum / N;
}

namespace
{

double effective_epsilon(const HyperbolicSample &sample, double epsilon)
{
    return epsilon > 0.0 ? epsilon : 0.5 * sample.delta;
}

// Solves f(w) = target by Newton from start; start is returned untouched when
// it already solves the equation exactly.
Complex pull_back(Complex target, Complex start, const Lattice &lat, const ToleranceConfig &cfg, int step)
{
    Complex w = start;
    try {
        for (int it = 0; it < 50; ++it) {
            const WpValue v = wp_with_derivative(w, lat, cfg);
            const Complex residual = v.value - target;
            if (residual == Complex{}) {
                return w;
            }
            if (std::abs(v.derivative) == 0.0) {
                break;
            }
            const Complex dw = residual / v.derivative;
            w -= dw;
            if (!is_finite(w)) {
                break;
            }
            if (std::abs(dw) <= 1e-3 * cfg.newton_tol * std::max(1.0, std::abs(w))) {
                return w;
            }
        }
    } catch (const PoleHit &) {
    }
    throw ShadowLost(step);
}

} // namespace

std::vector<Complex> motion_chain(const HyperbolicSample &sample, Complex z0, Complex lambda, int n_steps,
                                  const ToleranceConfig &cfg, double epsilon)
{
    if (n_steps < 1) {
        throw std::invalid_argument("motion_chain needs n_steps >= 1");
    }
    const double eps = effective_epsilon(sample, epsilon);
    const OrbitTrace ref = iterate(sample.lattice, z0, n_steps, cfg);
    if (const auto c = ref.capture_step()) {
        throw ShadowLost(*c);
    }
    const Lattice lat = make_lattice(sample.kind, lambda, cfg);
    std::vector<Complex> w(ref.points.size());
    w.back() = ref.points.back();
    for (int k = n_steps - 1; k >= 0; --k) {
        const auto uk = static_cast<std::size_t>(k);
        w[uk] = pull_back(w[uk + 1], ref.points[uk], lat, cfg, k);
        if (sph_dist(w[uk], ref.points[uk]) > eps) {
            throw ShadowLost(k);
        }
    }
    return w;
}

MotionFrame track_motion(const HyperbolicSample &sample, Complex z0, Complex lambda, const ToleranceConfig &cfg,
                         const MotionOptions &opts)
{
    const std::vector<Complex> chain = motion_chain(sample, z0, lambda, opts.n_steps, cfg, opts.epsilon);
    // h(f_{lambda0}(z0)) from its own chain, one step further out.
    const Complex z1 = wp(z0, sample.lattice, cfg);
    const std::vector<Complex> next = motion_chain(sample, z1, lambda, opts.n_steps, cfg, opts.epsilon);
    const Lattice lat = make_lattice(sample.kind, lambda, cfg);
    const double residual = std::abs(next.front() - wp(chain.front(), lat, cfg));
    return {z0, lambda, chain.front(), residual, opts.n_steps};
}

Complex x_function(const HyperbolicSample &sample, Complex lambda, const ToleranceConfig &cfg,
                   const MotionOptions &opts)
{
    const Lattice lat = make_lattice(sample.kind, lambda, cfg);
    const std::vector<Complex> chain = motion_chain(sample, sample.points.front(), lambda, opts.n_steps, cfg,
                                                    opts.epsilon);
    return lat.crit_values[0] - chain.front();
}

int winding_order(const std::function<Complex(Complex)> &f, Complex center, double rho, int n_samples,
                  double eval_tol)
{
    const WindingResult w = winding_on_circle(f, center, rho, n_samples);
    if (w.min_modulus <= 10.0 * eval_tol) {
        throw NearZero("function too close to 0 on the sampling circle");
    }
    if (w.max_increment >= 0.5 * std::numbers::pi) {
        throw InsufficientSampling("argument increment reached pi/2 with " + std::to_string(n_samples)
                                   + " samples");
    }
    return w.winding;
}

int order_K(const HyperbolicSample &sample, double rho, int n_samples, const ToleranceConfig &cfg,
            const MotionOptions &opts)
{
    const auto x = [&](Complex lambda) { return x_function(sample, lambda, cfg, opts); };
    return winding_order(x, sample.lambda0, rho, n_samples, cfg.eval_tol);
}

ExpansionReport fit_expansion(const HyperbolicSample &sample, int n_range)
{
    if (n_range < 1) {
        throw std::invalid_argument("fit_expansion needs n_range >= 1");
    }
    const auto &f = sample.orbit.sph_derivs;
    const int m = sample.size() - 1;
    if (static_cast<std::size_t>(m + n_range) > f.size()) {
        throw std::invalid_argument("sample orbit too short for the requested n_range");
    }
    ExpansionReport rep{0.0, 0.0, n_range, std::vector<double>(static_cast<std::size_t>(n_range) + 1)};
    for (int k = 0; k <= n_range; ++k) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= m; ++i) {
            double prod = 1.0;
            for (int j = i; j < i + k; ++j) {
                prod *= f[static_cast<std::size_t>(j)];
            }
            worst = std::min(worst, prod);
        }
        rep.per_step_min[static_cast<std::size_t>(k)] = worst;
    }
    if (std::any_of(rep.per_step_min.begin(), rep.per_step_min.end(), [](double v) { return !(v > 0.0); })) {
        throw NoExpansion("vanishing derivative on the sample");
    }

    // Lower convex hull of (k, log per_step_min[k]).
    std::vector<int> hull;
    const auto y = [&](int k) { return std::log(rep.per_step_min[static_cast<std::size_t>(k)]); };
    for (int k = 0; k <= n_range; ++k) {
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2];
            const int b = hull.back();
            const double cross = (b - a) * (y(k) - y(a)) - (y(b) - y(a)) * (k - a);
            if (cross > 0.0) {
                break;
            }
            hull.pop_back();
        }
        hull.push_back(k);
    }
    const double mid = 0.5 * n_range;
    std::size_t e = 0;
    while (e + 2 < hull.size() && hull[e + 1] <= mid) {
        ++e;
    }
    const int k0 = hull[e];
    const int k1 = hull[e + 1];
    const double slope = (y(k1) - y(k0)) / (k1 - k0);
    rep.a = std::exp(slope);
    rep.C = std::exp(y(k0) - slope * k0);
    if (!(rep.a > 1.0)) {
        throw NoExpansion("lower envelope of the derivative growth has rate " + std::to_string(rep.a));
    }
    return rep;
}

namespace
{

struct ParameterOrbit {
    std::vector<Complex> xi;     // f^k_lambda(e_lambda)
    std::vector<Complex> derivs; // f'_lambda(xi_k)
    int n;                       // last step with |xi_k - mu_k| <= delta' throughout
};

ParameterOrbit parameter_orbit(const HyperbolicSample &sample, Complex lambda, const ToleranceConfig &cfg,
                               const DistortionOptions &opts)
{
    const Lattice lat = make_lattice(sample.kind, lambda, cfg);
    const OrbitTrace t = iterate(lat, lat.crit_values[0], opts.max_steps, cfg);
    const std::vector<Complex> mu = motion_chain(sample, sample.points.front(), lambda,
                                                 opts.max_steps + opts.motion.n_steps, cfg, opts.motion.epsilon);
    ParameterOrbit o{t.points, t.derivs, -1};
    const int last = static_cast<int>(t.derivs.size());
    for (int k = 0; k <= last; ++k) {
        if (sph_dist(o.xi[static_cast<std::size_t>(k)], mu[static_cast<std::size_t>(k)]) > opts.delta_prime) {
            break;
        }
        o.n = k;
    }
    return o;
}

Complex derivative_product(const ParameterOrbit &o, int n)
{
    Complex d = 1.0;
    for (int k = 0; k < n; ++k) {
        d *= o.derivs[static_cast<std::size_t>(k)];
    }
    return d;
}

} // namespace

DistortionPair distortion_pair(const HyperbolicSample &sample, Complex a, Complex b, const ToleranceConfig &cfg,
                               const DistortionOptions &opts)
{
    const ParameterOrbit oa = parameter_orbit(sample, a, cfg, opts);
    const ParameterOrbit ob = a == b ? oa : parameter_orbit(sample, b, cfg, opts);
    int n = std::min(oa.n, ob.n);
    if (opts.step_cap > 0) {
        n = std::min(n, opts.step_cap);
    }
    const double ratio = n < 0 ? 0.0 : std::abs(derivative_product(oa, n) / derivative_product(ob, n) - 1.0);
    return {a, b, n, ratio};
}

namespace
{

// xi_n'(a) / ((f^n_a)'(e_a) x'(a)) - 1 with both parameter derivatives by
// central differences.
double corollary_ratio(const HyperbolicSample &sample, Complex a, double h, const ToleranceConfig &cfg,
                       const DistortionOptions &opts)
{
    const ParameterOrbit oa = parameter_orbit(sample, a, cfg, opts);
    const int n = opts.step_cap > 0 ? std::min(oa.n, opts.step_cap) : oa.n;
    if (n < 1) {
        return 0.0;
    }
    const auto xi_n = [&](Complex lambda) {
        const Lattice lat = make_lattice(sample.kind, lambda, cfg);
        Complex z = lat.crit_values[0];
        for (int k = 0; k < n; ++k) {
            z = wp(z, lat, cfg);
        }
        return z;
    };
    const auto x = [&](Complex lambda) { return x_function(sample, lambda, cfg, opts.motion); };
    const Complex denom = derivative_product(oa, n) * central_difference(x, a, h);
    if (!(std::abs(denom) > 0.0)) {
        return 0.0;
    }
    return std::abs(central_difference(xi_n, a, h) / denom - 1.0);
}

} // namespace

DistortionReport distortion_report(const HyperbolicSample &sample, double r, int n_pairs, const ToleranceConfig &cfg,
                                   const DistortionOptions &opts)
{
    if (!(r > 0.0) || n_pairs < 1) {
        throw std::invalid_argument("distortion_report needs r > 0 and n_pairs >= 1");
    }
    DistortionReport rep{0.0, 0.0, std::numeric_limits<int>::max(), 0, {}};
    for (int i = 0; i < n_pairs; ++i) {
        CounterRng rng(opts.seed, 0, static_cast<std::uint64_t>(i));
        const Complex a = sample.lambda0 + r * uniform_in_unit_disc(rng);
        const Complex b = sample.lambda0 + r * uniform_in_unit_disc(rng);
        const DistortionPair p = distortion_pair(sample, a, b, cfg, opts);
        rep.pairs.push_back(p);
        rep.min_n = std::min(rep.min_n, p.n);
        rep.max_n = std::max(rep.max_n, p.n);
        if (p.n >= 3) {
            rep.max_ratio = std::max(rep.max_ratio, p.ratio);
        }
        rep.max_corollary_ratio = std::max(rep.max_corollary_ratio, corollary_ratio(sample, a, r / 100.0, cfg, opts));
    }
    if (rep.max_n < 3) {
        throw DegenerateRadius("every pair has n < 3 at radius " + std::to_string(r));
    }
    return rep;
}

} // namespace ellidyn
