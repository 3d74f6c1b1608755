#ifndef ELLIDYN_DYNAMICS_HPP
#define ELLIDYN_DYNAMICS_HPP

#include <optional>
#include <variant>
#include <vector>

#include <ellidyn/lattice.hpp>

namespace ellidyn
{

struct BudgetExhausted {
};

struct OrbitPoleHit {
    int step;
    long m;
    long n;
};

struct EscapedSphericalBall {
    int step;
};

using OrbitOutcome = std::variant<BudgetExhausted, OrbitPoleHit, EscapedSphericalBall>;

// Forward orbit z_0, f(z_0), ... with the per-step derivative data.
// sph_derivs[k] and derivs[k] describe the step points[k] -> points[k + 1].
struct OrbitTrace {
    Complex start;
    std::vector<Complex> points;
    std::vector<double> sph_derivs;
    std::vector<Complex> derivs;
    OrbitOutcome outcome;

    bool exhausted() const { return std::holds_alternative<BudgetExhausted>(outcome); }
    // Step at which the orbit reached a pole or escaped, if it did.
    std::optional<int> capture_step() const;
};

// Modulus beyond which an iterate counts as escaped: the wp-image of a point
// at exactly pole_eps from a pole.
double escape_radius(const Lattice &lat, const ToleranceConfig &cfg);

OrbitTrace iterate(const Lattice &lat, Complex z0, int max_iter, const ToleranceConfig &cfg = {});

struct Cycle {
    int period;
    Complex point;
    Complex multiplier;
};

// Looks for a near-return |points[L-p] - points[L]| < tol (relative to the
// point size) for the smallest p <= max_period at the tail of the trace,
// refines the periodic point by Newton on f^p(w) - w and returns the cycle
// with its multiplier. Throws NewtonDivergence when refinement fails.
std::optional<Cycle> find_cycle(const OrbitTrace &trace, const Lattice &lat, double tol, int max_period,
                                const ToleranceConfig &cfg = {});

// The p points of a refined cycle.
std::vector<Complex> cycle_orbit(const Cycle &cycle, const Lattice &lat, const ToleranceConfig &cfg = {});

struct AttractingCycles {
    int count;
    Cycle cycle;
    // One refined cycle per iterated critical value (three for triangular,
    // one for square).
    std::vector<Cycle> per_critical;
};

struct AllCriticalPrepole {
    // Capture step of e_1, e_2, e_3.
    std::vector<int> steps;
};

struct Indeterminate {
    int iterations_used;
};

using Verdict = std::variant<AttractingCycles, AllCriticalPrepole, Indeterminate>;

struct ClassifyOptions {
    int max_period = 64;
    double cycle_tol = 1e-8;
    // Cycles with |multiplier| above 1 - parabolic_margin are not reported
    // as attracting.
    double parabolic_margin = 1e-6;
};

Verdict classify(LatticeKind kind, Complex lambda, int budget, const ToleranceConfig &cfg = {},
                 const ClassifyOptions &opts = {});

const char *verdict_tag(const Verdict &v);

} // namespace ellidyn

#endif
