#ifndef ELLIDYN_HYPERBOLIC_HPP
#define ELLIDYN_HYPERBOLIC_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <ellidyn/dynamics.hpp>
#include <ellidyn/lattice.hpp>

namespace ellidyn
{

struct SampleOptions {
    double a_tilde = 2.0;
    int max_n_exp = 64;
    // Extra forward steps past M kept for expansion windows and the adapted
    // metric at the last sample points.
    int extension = 64;
};

// Finite piece of the closure of the forward orbit of e_1 at lambda0.
struct HyperbolicSample {
    LatticeKind kind;
    Complex lambda0;
    Lattice lattice;
    std::vector<Complex> points; // f^k(e_1), k = 0..M
    double delta;
    double min_crit_dist;
    double min_inf_dist;
    int n_exp;
    double a_tilde;
    // Orbit of e_1 through M + extension steps (or until capture after M).
    OrbitTrace orbit;

    int size() const { return static_cast<int>(points.size()); }
};

// Throws SeparationViolated when the orbit enters the delta-neighbourhood of a
// critical point or of infinity within M steps, NoExpansion when no window
// length N <= max_n_exp expands by a_tilde at every sample point.
HyperbolicSample build_sample(LatticeKind kind, Complex lambda0, int M, double delta, const ToleranceConfig &cfg = {},
                              const SampleOptions &opts = {});

// d(z) = (1/N) sum_{n<N} |(f^n)'(z)|, spherical derivatives. Throws
// PoleOnOrbit when the orbit is captured before step N - 1.
double adapted_metric(Complex z, const Lattice &lat, int N, const ToleranceConfig &cfg = {});

struct MotionOptions {
    int n_steps = 48;
    // Radius of the spherical shadowing balls; 0 selects delta / 2.
    double epsilon = 0.0;
};

struct MotionFrame {
    Complex z0;
    Complex lambda;
    Complex h_value;
    double conj_residual;
    int steps_used;
};

// Backward shadowing chain w_0..w_n with w_n = f^n_{lambda0}(z0) and
// f_lambda(w_k) = w_{k+1}, each w_k found by Newton from the reference point
// z_k. w_k approximates h_lambda(z_k). Throws ShadowLost.
std::vector<Complex> motion_chain(const HyperbolicSample &sample, Complex z0, Complex lambda, int n_steps,
                                  const ToleranceConfig &cfg = {}, double epsilon = 0.0);

MotionFrame track_motion(const HyperbolicSample &sample, Complex z0, Complex lambda, const ToleranceConfig &cfg = {},
                         const MotionOptions &opts = {});

// x(lambda) = e_1(lambda) - h_lambda(e_1(lambda0)).
Complex x_function(const HyperbolicSample &sample, Complex lambda, const ToleranceConfig &cfg = {},
                   const MotionOptions &opts = {});

// Winding number about 0 of f on the circle |lambda - center| = rho. Throws
// NearZero when min |f| <= 10 * eval_tol and InsufficientSampling when an
// argument increment reaches pi/2.
int winding_order(const std::function<Complex(Complex)> &f, Complex center, double rho, int n_samples,
                  double eval_tol);

int order_K(const HyperbolicSample &sample, double rho, int n_samples, const ToleranceConfig &cfg = {},
            const MotionOptions &opts = {});

struct ExpansionReport {
    double C;
    double a;
    int n_range;
    std::vector<double> per_step_min;
};

// per_step_min[k] is the smallest spherical |(f^k)'| over the sample points.
// (C, a) is the supporting line of log per_step_min at the middle of the
// range taken from the lower convex hull. Throws NoExpansion if a <= 1.
ExpansionReport fit_expansion(const HyperbolicSample &sample, int n_range);

struct DistortionOptions {
    double delta_prime = 1e-3;
    int max_steps = 96;
    // Upper bound on the per-pair n; 0 leaves it free.
    int step_cap = 0;
    std::uint64_t seed = 1;
    MotionOptions motion{};
};

struct DistortionPair {
    Complex a;
    Complex b;
    int n;
    double ratio;
};

// One pair of the report. The ratio is exactly 0 when a == b.
DistortionPair distortion_pair(const HyperbolicSample &sample, Complex a, Complex b, const ToleranceConfig &cfg = {},
                               const DistortionOptions &opts = {});

struct DistortionReport {
    double max_ratio;
    double max_corollary_ratio;
    int min_n;
    int max_n;
    std::vector<DistortionPair> pairs;
};

// Draws n_pairs parameter pairs in B(lambda0, r) and measures
// |(f^n_a)'(e_a) / (f^n_b)'(e_b) - 1| with n the last step at which both
// critical orbits stay within delta_prime of their tracked motions. Throws
// DegenerateRadius if n < 3 for every pair.
DistortionReport distortion_report(const HyperbolicSample &sample, double r, int n_pairs,
                                   const ToleranceConfig &cfg = {}, const DistortionOptions &opts = {});

} // namespace ellidyn

#endif
