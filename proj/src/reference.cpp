#include <ellidyn/reference.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace ellidyn::reference
{

namespace
{

struct BoxGeometry {
    double cell_area;
    double cell_diameter;
    // Smallest |w| over lattice points outside the box.
    double outside_radius;
};

BoxGeometry box_geometry(const Lattice &lat, int radius)
{
    const double scale = std::abs(lat.lambda);
    BoxGeometry g;
    g.cell_area = scale * scale * lat.tau.imag();
    g.cell_diameter = std::max(std::abs(lat.gen1 + lat.gen2), std::abs(lat.gen1 - lat.gen2));
    g.outside_radius = static_cast<double>(radius + 1) * scale * lat.tau.imag();
    return g;
}

// Upper bound on sum of |w|^-4 over lattice points outside the box.
double quartic_tail(const BoxGeometry &g)
{
    const double r = g.outside_radius - g.cell_diameter;
    if (r <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double integral = 0.5 / (r * r) + (g.cell_diameter / 2.0) / (3.0 * r * r * r);
    return 2.0 * std::numbers::pi / g.cell_area * integral;
}

} // namespace

BoundedValue wp_lattice_sum(Complex z, const Lattice &lat, int radius)
{
    const Complex zr = reduce(z, lat).z_red;
    Complex sum = 1.0 / (zr * zr);
    for (int m = -radius; m <= radius; ++m) {
        for (int n = -radius; n <= radius; ++n) {
            if (m == 0 && n == 0) {
                continue;
            }
            const Complex w = static_cast<double>(m) * lat.gen1 + static_cast<double>(n) * lat.gen2;
            const Complex d = zr - w;
            sum += 1.0 / (d * d) - 1.0 / (w * w);
        }
    }
    const BoxGeometry g = box_geometry(lat, radius);
    double bound = std::numeric_limits<double>::infinity();
    if (g.outside_radius >= 2.0 * std::abs(zr)) {
        bound = 16.0 * std::norm(zr) * quartic_tail(g);
    }
    return {sum, bound};
}

BoundedValue wp_prime_lattice_sum(Complex z, const Lattice &lat, int radius)
{
    const Complex zr = reduce(z, lat).z_red;
    Complex sum = 1.0 / (zr * zr * zr);
    for (int m = -radius; m <= radius; ++m) {
        for (int n = -radius; n <= radius; ++n) {
            if (m == 0 && n == 0) {
                continue;
            }
            const Complex w = static_cast<double>(m) * lat.gen1 + static_cast<double>(n) * lat.gen2;
            const Complex d = zr - w;
            sum += 1.0 / (d * d * d);
        }
    }
    const BoxGeometry g = box_geometry(lat, radius);
    double bound = std::numeric_limits<double>::infinity();
    if (g.outside_radius >= 2.0 * std::abs(zr)) {
        bound = 2.0 * 24.0 * std::abs(zr) * quartic_tail(g);
    }
    return {-2.0 * sum, bound};
}

Invariants eisenstein_direct(const Lattice &lat, int radius)
{
    Complex s4{};
    Complex s6{};
    // Accumulate shell by shell, smallest terms last.
    for (int shell = radius; shell >= 1; --shell) {
        for (int m = -shell; m <= shell; ++m) {
            for (int n = -shell; n <= shell; ++n) {
                if (std::max(std::abs(m), std::abs(n)) != shell) {
                    continue;
                }
                const Complex w = static_cast<double>(m) * lat.gen1 + static_cast<double>(n) * lat.gen2;
                const Complex w2 = w * w;
                const Complex w4 = w2 * w2;
                s4 += 1.0 / w4;
                s6 += 1.0 / (w4 * w2);
            }
        }
    }
    return {60.0 * s4, 140.0 * s6};
}

Complex wp_extrapolated(Complex z, const Lattice &lat, int radius)
{
    const Complex fine = wp_lattice_sum(z, lat, radius).value;
    const Complex coarse = wp_lattice_sum(z, lat, radius / 2).value;
    return (4.0 * fine - coarse) / 3.0;
}

Invariants eisenstein_extrapolated(const Lattice &lat, int radius)
{
    const Invariants fine = eisenstein_direct(lat, radius);
    const Invariants coarse = eisenstein_direct(lat, radius / 2);
    // The g3 tail already decays like radius^-4; only g2 needs the correction.
    return {(4.0 * fine.g2 - coarse.g2) / 3.0, fine.g3};
}

} // namespace ellidyn::reference
