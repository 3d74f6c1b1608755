#ifndef ELLIDYN_REFERENCE_HPP
#define ELLIDYN_REFERENCE_HPP

#include <ellidyn/lattice.hpp>

// Serial reference evaluators built on the literal lattice sums. They are
// slow and exist so the fast Fourier evaluator in lattice.cpp can be checked
// against an independent route.
namespace ellidyn::reference
{

struct BoundedValue {
    Complex value;
    // Upper bound on |value - exact|.
    double tail_bound;
};

// 1/z^2 + sum over |m|,|n| <= radius, (m,n) != 0, of 1/(z-w)^2 - 1/w^2 for
// the reduced z. The box is symmetric under w -> -w, so the odd part of the
// remainder cancels and the bound is quartic in 1/radius.
BoundedValue wp_lattice_sum(Complex z, const Lattice &lat, int radius);

// -2 sum of 1/(z-w)^3 over the same box.
BoundedValue wp_prime_lattice_sum(Complex z, const Lattice &lat, int radius);

struct Invariants {
    Complex g2;
    Complex g3;
};

// g2 = 60 sum' w^-4 and g3 = 140 sum' w^-6 summed over the box of the given
// radius.
Invariants eisenstein_direct(const Lattice &lat, int radius);

// Richardson extrapolation of the box sums at radius and radius/2, removing
// the leading 1/radius^2 truncation term.
Complex wp_extrapolated(Complex z, const Lattice &lat, int radius);
Invariants eisenstein_extrapolated(const Lattice &lat, int radius);

} // namespace ellidyn::reference

#endif
