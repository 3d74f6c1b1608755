#include <ellidyn/lattice.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <ellidyn/errors.hpp>

namespace ellidyn
{

std::string_view to_string(LatticeKind kind)
{
    return kind == LatticeKind::Triangular ? "triangular" : "square";
}

LatticeKind parse_lattice_kind(std::string_view text)
{
    if (text == "triangular" || text == "t") {
        return LatticeKind::Triangular;
    }
    if (text == "square" || text == "s") {
        return LatticeKind::Square;
    }
    throw std::invalid_argument("unknown lattice kind '" + std::string(text) + "'");
}

void ToleranceConfig::validate() const
{
    if (!(eval_tol > 0.0) || !(pole_eps > 0.0) || !(newton_tol > 0.0) || max_lattice_radius <= 0) {
        throw std::invalid_argument("tolerances must be strictly positive");
    }
    if (!(eval_tol < pole_eps)) {
        throw std::invalid_argument("eval_tol must be smaller than pole_eps");
    }
}

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr int kSeriesTerms = 12;
constexpr int kEisensteinTerms = 24;

// Fourier data of wp for the unit lattice [1, tau]. With u = e^{2 pi i w} and
// q = e^{2 pi i tau},
//   wp(w)  = (2 pi i)^2 [ c0 + u/(1-u)^2 + sum_m q^m u/(1-q^m u)^2 + (q^m/u)/(1-q^m/u)^2 ]
//   wp'(w) = (2 pi i)^3 [ u(1+u)/(1-u)^3 + sum_m a(1+a)/(1-a)^3 - b(1+b)/(1-b)^3 ]
// with c0 = 1/12 - 2 sum_m q^m/(1-q^m)^2. For a reduced w the terms decay
// like |q|^{m - 1/2}.
struct UnitSeries {
    Complex tau;
    std::array<Complex, kSeriesTerms + 1> qpow;
    Complex c0;
    Complex g2;
    Complex g3;
    Complex e1;
};

// e^{i y} - 1 without cancellation near y = 0.
Complex expm1_i(Complex y)
{
    // exp(i y) with y = s + i t is e^{-t} (cos s + i sin s).
    const double s = y.real();
    const double t = -y.imag();
    const double em1 = std::expm1(t);
    const double half = std::sin(0.5 * s);
    const double re = em1 * std::cos(s) - 2.0 * half * half;
    const double im = (em1 + 1.0) * std::sin(s);
    return {re, im};
}

long divisor_power_sum(long n, int power)
{
    long sum = 0;
    for (long d = 1; d <= n; ++d) {
        if (n % d == 0) {
            long p = 1;
            for (int i = 0; i < power; ++i) {
                p *= d;
            }
            sum += p;
        }
    }
    return sum;
}

struct SeriesTerms {
    Complex value;
    Complex derivative;
};

SeriesTerms unit_series(const UnitSeries &s, Complex w, bool want_derivative)
{
    const Complex two_pi_i{0.0, 2.0 * kPi};
    const Complex em1 = expm1_i(2.0 * kPi * w);
    const Complex u = 1.0 + em1;
    const Complex uinv = 1.0 / u;

    Complex sum = s.c0 + u / (em1 * em1);
    Complex dsum = want_derivative ? -(u * (2.0 + em1)) / (em1 * em1 * em1) : Complex{};
    for (int m = 1; m <= kSeriesTerms; ++m) {
        const Complex a = s.qpow[m] * u;
        const Complex b = s.qpow[m] * uinv;
        const Complex oa = 1.0 - a;
        const Complex ob = 1.0 - b;
        sum += a / (oa * oa) + b / (ob * ob);
        if (want_derivative) {
            dsum += a * (1.0 + a) / (oa * oa * oa) - b * (1.0 + b) / (ob * ob * ob);
        }
    }
    return {two_pi_i * two_pi_i * sum, two_pi_i * two_pi_i * two_pi_i * dsum};
}

UnitSeries build_unit_series(Complex tau)
{
    UnitSeries s;
    s.tau = tau;
    const Complex q = std::exp(Complex{0.0, 2.0 * kPi} * tau);
    s.qpow[0] = 1.0;
    for (int m = 1; m <= kSeriesTerms; ++m) {
        s.qpow[m] = s.qpow[m - 1] * q;
    }
    Complex c0 = 1.0 / 12.0;
    for (int m = 1; m <= kSeriesTerms; ++m) {
        const Complex om = 1.0 - s.qpow[m];
        c0 -= 2.0 * s.qpow[m] / (om * om);
    }
    s.c0 = c0;

    Complex e4 = 1.0;
    Complex e6 = 1.0;
    Complex qn = 1.0;
    for (int n = 1; n <= kEisensteinTerms; ++n) {
        qn *= q;
        e4 += 240.0 * static_cast<double>(divisor_power_sum(n, 3)) * qn;
        e6 -= 504.0 * static_cast<double>(divisor_power_sum(n, 5)) * qn;
    }
    const double pi4 = kPi * kPi * kPi * kPi;
    const double pi6 = pi4 * kPi * kPi;
    s.g2 = 60.0 * (pi4 / 45.0) * e4;
    s.g3 = 140.0 * (2.0 * pi6 / 945.0) * e6;
    s.e1 = unit_series(s, Complex{0.5, 0.0}, false).value;
    return s;
}

const UnitSeries &series_for(LatticeKind kind)
{
    static const UnitSeries triangular = build_unit_series(generator_ratio(LatticeKind::Triangular));
    static const UnitSeries square = build_unit_series(generator_ratio(LatticeKind::Square));
    return kind == LatticeKind::Triangular ? triangular : square;
}

struct UnitReduced {
    Complex w;
    long m;
    long n;
};

UnitReduced reduce_unit(Complex z, const Lattice &lat)
{
    const Complex w = z / lat.lambda;
    const double b = w.imag() / lat.tau.imag();
    const double a = w.real() - b * lat.tau.real();
    const double mf = std::floor(a + 0.5);
    const double nf = std::floor(b + 0.5);
    // Coordinates relative to the cell, recomputed from (a, b) so the
    // representative stays inside [-1/2, 1/2)^2 up to rounding.
    const double ar = a - mf;
    const double br = b - nf;
    return {Complex{ar, 0.0} + br * lat.tau, static_cast<long>(mf), static_cast<long>(nf)};
}

} // namespace

Complex generator_ratio(LatticeKind kind)
{
    if (kind == LatticeKind::Triangular) {
        return {-0.5, std::sqrt(3.0) / 2.0};
    }
    return {0.0, 1.0};
}

Lattice make_lattice(LatticeKind kind, Complex lambda, const ToleranceConfig &cfg)
{
    cfg.validate();
    if (lambda == Complex{0.0, 0.0}) {
        throw ZeroParameter();
    }
    if (!is_finite(lambda)) {
        throw std::invalid_argument("lattice parameter must be finite");
    }
    const UnitSeries &s = series_for(kind);
    Lattice lat;
    lat.kind = kind;
    lat.lambda = lambda;
    lat.tau = s.tau;
    lat.gen1 = lambda;
    lat.gen2 = s.tau * lambda;
    const Complex l2 = lambda * lambda;
    const Complex l4 = l2 * l2;
    lat.g2 = s.g2 / l4;
    lat.g3 = s.g3 / (l4 * l2);
    lat.half_periods = {0.5 * lat.gen1, 0.5 * lat.gen2, 0.5 * (lat.gen1 + lat.gen2)};
    for (std::size_t i = 0; i < 3; ++i) {
        const UnitReduced r = reduce_unit(lat.half_periods[i], lat);
        lat.crit_values[i] = unit_series(s, r.w, false).value / l2;
    }
    return lat;
}

Reduced reduce(Complex z, const Lattice &lat)
{
    const UnitReduced r = reduce_unit(z, lat);
    const Complex z_red = z - static_cast<double>(r.m) * lat.gen1 - static_cast<double>(r.n) * lat.gen2;
    return {z_red, r.m, r.n};
}

double pole_distance(const Reduced &r, const Lattice &lat)
{
    return std::abs(r.z_red / lat.gen1);
}

bool is_pole_hit(Complex z, const Lattice &lat, const ToleranceConfig &cfg)
{
    return std::abs(reduce_unit(z, lat).w) < cfg.pole_eps;
}

WpValue wp_with_derivative(Complex z, const Lattice &lat, const ToleranceConfig &cfg)
{
    const UnitReduced r = reduce_unit(z, lat);
    if (std::abs(r.w) < cfg.pole_eps) {
        throw PoleHit(r.m, r.n);
    }
    const SeriesTerms t = unit_series(series_for(lat.kind), r.w, true);
    const Complex l2 = lat.lambda * lat.lambda;
    return {t.value / l2, t.derivative / (l2 * lat.lambda)};
}

Complex wp(Complex z, const Lattice &lat, const ToleranceConfig &cfg)
{
    const UnitReduced r = reduce_unit(z, lat);
    if (std::abs(r.w) < cfg.pole_eps) {
        throw PoleHit(r.m, r.n);
    }
    return unit_series(series_for(lat.kind), r.w, false).value / (lat.lambda * lat.lambda);
}

Complex wp_prime(Complex z, const Lattice &lat, const ToleranceConfig &cfg)
{
    return wp_with_derivative(z, lat, cfg).derivative;
}

namespace
{

// 1 + |z|^2 without overflow for the sizes that reach the spherical metric.
double one_plus_norm(Complex z)
{
    return 1.0 + std::norm(z);
}

} // namespace

double sph_dist(Complex z, Complex w)
{
    const bool zi = is_infinite(z) || std::abs(z) > 1e150;
    const bool wi = is_infinite(w) || std::abs(w) > 1e150;
    if (zi && wi) {
        return 0.0;
    }
    if (zi) {
        return 2.0 / std::sqrt(one_plus_norm(w));
    }
    if (wi) {
        return 2.0 / std::sqrt(one_plus_norm(z));
    }
    return 2.0 * std::abs(z - w) / std::sqrt(one_plus_norm(z) * one_plus_norm(w));
}

double sph_deriv(Complex fprime, Complex z, Complex fz)
{
    return std::abs(fprime) * one_plus_norm(z) / one_plus_norm(fz);
}

double dist_to_critical(Complex z, const Lattice &lat)
{
    const UnitReduced r = reduce_unit(z, lat);
    const Complex halves[3] = {Complex{0.5, 0.0}, 0.5 * lat.tau, 0.5 * (1.0 + lat.tau)};
    double best_flat = std::numeric_limits<double>::infinity();
    Complex best{};
    for (const Complex &h : halves) {
        for (int m = -1; m <= 1; ++m) {
            for (int n = -1; n <= 1; ++n) {
                const Complex c = h + static_cast<double>(m) + static_cast<double>(n) * lat.tau;
                const double d = std::abs(c - r.w);
                if (d < best_flat) {
                    best_flat = d;
                    best = c;
                }
            }
        }
    }
    const Complex crit = z + (best - r.w) * lat.lambda;
    return sph_dist(z, crit);
}

} // namespace ellidyn
