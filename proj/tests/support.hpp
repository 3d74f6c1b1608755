#ifndef ELLIDYN_TESTS_SUPPORT_HPP
#define ELLIDYN_TESTS_SUPPORT_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <ellidyn/dynamics.hpp>
#include <ellidyn/lattice.hpp>
#include <ellidyn/numerics.hpp>

namespace testsupport
{

using ellidyn::Complex;

inline const Complex kRho = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

// Random lambda with lo <= |lambda| <= hi.
inline Complex random_lambda(ellidyn::CounterRng &rng, double lo = 0.5, double hi = 3.0)
{
    const double r = lo + (hi - lo) * rng.next_unit();
    return std::polar(r, 2.0 * std::numbers::pi * rng.next_unit());
}

// Random point of the fundamental cell whose generator coordinates stay at
// least `margin` away from the pole at 0.
inline Complex random_cell_point(ellidyn::CounterRng &rng, const ellidyn::Lattice &lat, double margin = 0.15)
{
    for (;;) {
        const double s = rng.next_unit() - 0.5;
        const double t = rng.next_unit() - 0.5;
        const Complex z = s * lat.gen1 + t * lat.gen2;
        if (std::abs(z) >= margin * std::abs(lat.gen1)) {
            return z;
        }
    }
}

// f'(z) from the trapezoid rule on a circle of m points: exact up to the
// Taylor coefficient of order m + 1, so it is an independent check of
// chain-rule derivatives.
inline Complex cauchy_derivative(const std::function<Complex(Complex)> &f, Complex z, double h, int m = 16)
{
    Complex sum{};
    for (int k = 0; k < m; ++k) {
        const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
        sum += f(z + h * w) / w;
    }
    return sum / (static_cast<double>(m) * h);
}

// First-order growth of relative rounding along a trace: A_0 = |z_0|,
// A_{k+1} = A_k |f'(z_k)| + |z_{k+1}|. Two orbits that agree in exact
// arithmetic differ in floating point by O(eps * A_k) at step k.
inline std::vector<double> rounding_growth(const ellidyn::OrbitTrace &t)
{
    std::vector<double> a{std::abs(t.points.front())};
    for (std::size_t k = 0; k + 1 < t.points.size(); ++k) {
        a.push_back(a.back() * std::abs(t.derivs[k]) + std::abs(t.points[k + 1]));
    }
    return a;
}

} // namespace testsupport

#endif
