#ifndef ELLIDYN_MISIUREWICZ_HPP
#define ELLIDYN_MISIUREWICZ_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <ellidyn/lattice.hpp>

namespace ellidyn
{

enum class Execution { Serial, Parallel };

// p_{j,k}(lambda) = j*lambda + k*tau*lambda.
Complex pole_location(LatticeKind kind, Complex lambda, long j, long k);

// g(lambda) = f^n_lambda(e_1) - p_{j,k}(lambda). Throws PrematurePole when the
// orbit reaches a pole before step n.
Complex prepole_residual(LatticeKind kind, Complex lambda, int n, long j, long k, const ToleranceConfig &cfg = {});

struct Region {
    double re_min;
    double re_max;
    double im_min;
    double im_max;

    bool contains(Complex z) const
    {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }
    double diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }
};

struct PrepoleRoot {
    Complex lambda_star;
    int n;
    long j;
    long k;
    double residual;
    double isolation_radius;
    int multiplicity;
};

struct FindOptions {
    // Grid local minima of |g| above this are not polished.
    double seed_threshold = 1.0;
    // Polished roots farther than this many grid cells from their seed are
    // dropped: Newton jumps are not resolved by the grid.
    double max_seed_cells = 2.0;
    int max_newton = 50;
    int max_winding_samples = 4096;
    int max_doublings = 40;
};

// Seeds Newton from the local minima of |g| on a grid x grid lattice of
// nodes over the region, polishes and deduplicates the roots, and certifies
// each one with an argument-principle count on its isolation circle.
std::vector<PrepoleRoot> find_prepole_params(LatticeKind kind, int n, long j, long k, const Region &region, int grid,
                                             const ToleranceConfig &cfg = {}, const FindOptions &opts = {});

// Argument-principle count of zeros of g inside |lambda - center| = rho;
// empty when the winding cannot be resolved or g is undefined on the circle.
std::optional<int> zero_count(LatticeKind kind, int n, long j, long k, Complex center, double rho,
                              const ToleranceConfig &cfg = {}, int max_samples = 4096);

// Capture step of every non-pole critical orbit (three for triangular, one
// for square), empty entries for orbits not captured within max_iter.
std::vector<std::optional<int>> critical_capture_steps(LatticeKind kind, Complex lambda, int max_iter,
                                                       const ToleranceConfig &cfg = {});

enum class ViolationKind { NearCritical, NearInfinity, PoleHit };

struct Violation {
    int step;
    ViolationKind kind;
};

struct CheckReport {
    bool passed;
    // Orbit points examined per critical value.
    int iterations;
    std::optional<Violation> first_violation;
};

const char *to_string(ViolationKind kind);

CheckReport misiurewicz_check(LatticeKind kind, Complex lambda, double delta, int M, const ToleranceConfig &cfg = {});

struct DensityRow {
    double radius;
    int n_samples;
    double fail_fraction;
    std::uint64_t seed;
};

std::vector<DensityRow> density_scan(LatticeKind kind, Complex lambda0, const std::vector<double> &radii,
                                     int n_samples, double delta, int M, std::uint64_t seed,
                                     const ToleranceConfig &cfg = {}, Execution exec = Execution::Parallel);

// Least m <= maxN for which the f^m-image of a grid over B(center, d),
// dilated cell by cell, covers a grid over U_delta (critical balls in the
// central fundamental cell plus the ball at infinity). Throws DiscTouchesU
// when the center itself lies in U_delta.
std::optional<int> covering_steps(const Lattice &lat, Complex center, double d, double delta, int maxN, int grid,
                                  const ToleranceConfig &cfg = {});

} // namespace ellidyn

#endif
