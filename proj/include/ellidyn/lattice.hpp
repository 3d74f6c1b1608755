#ifndef ELLIDYN_LATTICE_HPP
#define ELLIDYN_LATTICE_HPP

#include <array>

#include <ellidyn/types.hpp>

namespace ellidyn
{

// The lattice [lambda, tau*lambda] with tau = e^{2 pi i/3} (triangular) or
// tau = i (square). Immutable once built by make_lattice.
struct Lattice {
    LatticeKind kind;
    Complex lambda;
    Complex tau;
    Complex gen1;
    Complex gen2;
    Complex g2;
    Complex g3;
    // gen1/2, gen2/2, (gen1 + gen2)/2
    std::array<Complex, 3> half_periods;
    // e_i = wp(half_periods[i]); e_1 is always the value at gen1/2.
    std::array<Complex, 3> crit_values;
};

// Generator ratio for the family: e^{2 pi i/3} or i.
Complex generator_ratio(LatticeKind kind);

Lattice make_lattice(LatticeKind kind, Complex lambda, const ToleranceConfig &cfg = {});

struct Reduced {
    Complex z_red;
    long m;
    long n;
};

// z = z_red + m*gen1 + n*gen2 with both generator coordinates of z_red in
// [-1/2, 1/2).
Reduced reduce(Complex z, const Lattice &lat);

// |z_red| / |gen1|, the distance to the nearest pole in generator units.
double pole_distance(const Reduced &r, const Lattice &lat);

bool is_pole_hit(Complex z, const Lattice &lat, const ToleranceConfig &cfg);

Complex wp(Complex z, const Lattice &lat, const ToleranceConfig &cfg = {});
Complex wp_prime(Complex z, const Lattice &lat, const ToleranceConfig &cfg = {});

struct WpValue {
    Complex value;
    Complex derivative;
};

// wp and wp' sharing one reduction and one series pass.
WpValue wp_with_derivative(Complex z, const Lattice &lat, const ToleranceConfig &cfg = {});

// Chordal distance on the Riemann sphere (diameter 2). Either argument may be
// kInfinity.
double sph_dist(Complex z, Complex w);

// Spherical derivative |f'(z)| (1 + |z|^2) / (1 + |f(z)|^2).
double sph_deriv(Complex fprime, Complex z, Complex fz);

// Spherical distance from z to the nearest critical point (a half-period
// translate) of wp over the lattice.
double dist_to_critical(Complex z, const Lattice &lat);

} // namespace ellidyn

#endif
