#ifndef ELLIDYN_TYPES_HPP
#define ELLIDYN_TYPES_HPP

#include <complex>
#include <limits>
#include <string>
#include <string_view>

namespace ellidyn
{

using Complex = std::complex<double>;

// The point at infinity of the Riemann sphere. Any complex value with an
// infinite component is read as infinity by the spherical utilities.
inline const Complex kInfinity{std::numeric_limits<double>::infinity(), 0.0};

inline bool is_infinite(Complex z)
{
    return std::isinf(z.real()) || std::isinf(z.imag());
}

inline bool is_finite(Complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

enum class LatticeKind { Triangular, Square };

std::string_view to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view text);

// Numerical tolerances shared by every module.
//
// pole_eps is measured in units of the first generator: a point z is a pole
// hit when its reduced representative satisfies |z_red| < pole_eps * |gen1|.
struct ToleranceConfig {
    double eval_tol = 1e-12;
    double pole_eps = 1e-6;
    double newton_tol = 1e-10;
    int max_lattice_radius = 300;

    // Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

} // namespace ellidyn

#endif
