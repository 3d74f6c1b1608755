// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <omp.h>

#include <ellidyn/errors.hpp>
#include <ellidyn/hyperbolic.hpp>
#include <ellidyn/misiurewicz.hpp>
#include <ellidyn/run_config.hpp>
#include <ellidyn/scan.hpp>

#include "support.hpp"

using namespace ellidyn;
namespace fs = std::filesystem;

namespace
{

const Complex kCandidate{1.9084272717633082, 1.361553243147176};
const Complex kSquarePrepole{0.95074668065375878, 1.6467415560197722};
const Region kDemo{0.5, 3.0, 0.5, 3.0};
constexpr std::uint64_t kGoldenHash = 0x489c0798732c153cULL;
// Pilot-run fail fraction of the density experiment at seed 7.
constexpr double kDensityRegression = 1.0;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome wp_suite()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(101, 0, 0);
    double periodic = 0.0, even = 0.0, de = 0.0, homog = 0.0;
    for (const LatticeKind kind : {LatticeKind::Triangular, LatticeKind::Square}) {
        for (int i = 0; i < 1000; ++i) {
            const Complex lambda = testsupport::random_lambda(rng);
            const Lattice lat = make_lattice(kind, lambda);
            const Complex z = testsupport::random_cell_point(rng, lat, 0.25);
            const WpValue v = wp_with_derivative(z, lat);
            const double scale = std::max(1.0, std::abs(v.value));
            const double a = std::floor(7.0 * rng.next_unit()) - 3.0;
            const double b = std::floor(7.0 * rng.next_unit()) - 3.0;
            periodic = std::max(periodic, std::abs(wp(z + a * lat.gen1 + b * lat.gen2, lat) - v.value) / scale);
            even = std::max(even, std::abs(wp(-z, lat) - v.value) / scale);
            const Complex p = v.value;
            de = std::max(de, std::abs(v.derivative * v.derivative - 4.0 * p * p * p + lat.g2 * p + lat.g3));
            const Complex c = testsupport::random_lambda(rng, 0.7, 1.4);
            const Lattice scaled = make_lattice(kind, c * lambda);
            homog = std::max(homog, std::abs(wp(c * z, scaled) - p / (c * c)));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(periodic < 1e-8, "periodicity " + fmt("%.3g", periodic));
    o.require(even < 1e-8, "evenness " + fmt("%.3g", even));
    o.require(de < 1e-8, "DE residual " + fmt("%.3g", de));
    o.require(homog < 1e-10, "homogeneity " + fmt("%.3g", homog));
    o.require(secs < 10.0, "runtime " + fmt("%.1f s", secs));
    if (o.pass) {
        o.detail = "max periodicity " + fmt("%.2e", periodic) + ", evenness " + fmt("%.2e", even) + ", DE "
                   + fmt("%.2e", de) + ", homogeneity " + fmt("%.2e", homog) + ", " + fmt("%.2f s", secs);
    }
    return o;
}

Outcome symmetry_suite()
{
    Outcome o;
    CounterRng rng(102, 0, 0);
    const Complex rho = testsupport::kRho;
    double worst_orbit = 0.0;
    int compared = 0;
    for (int i = 0; i < 100; ++i) {
        const Complex lambda = testsupport::random_lambda(rng);
        const Lattice tri = make_lattice(LatticeKind::Triangular, lambda);
        o.require(std::abs(tri.g2) < 1e-10, "triangular g2");
        o.require(std::abs(tri.crit_values[1] / tri.crit_values[0] - rho) < 1e-10, "e2/e1");
        const Lattice sq = make_lattice(LatticeKind::Square, lambda);
        o.require(std::abs(sq.g3) < 1e-10, "square g3");
        o.require(std::abs(sq.crit_values[1] + sq.crit_values[0]) < 1e-10, "e2 = -e1");
        o.require(std::abs(sq.crit_values[2]) < 1e-10, "square e3");

        // Equal in exact arithmetic; in floating point the difference grows
        // with the accumulated derivative along the orbit.
        const OrbitTrace t1 = iterate(tri, tri.crit_values[0], 20);
        const OrbitTrace t2 = iterate(tri, tri.crit_values[1], 20);
        o.require(t1.capture_step() == t2.capture_step(), "capture steps differ");
        const std::size_t n = std::min(t1.points.size(), t2.points.size());
        const std::vector<double> growth = testsupport::rounding_growth(t1);
        for (std::size_t k = 0; k < n; ++k) {
            const double err = std::abs(t2.points[k] - rho * t1.points[k]);
            const double tol = 1e-8 * std::abs(t1.points[k]) + 1e-13 * growth[k];
            o.require(err <= tol, "orbit equivariance at step " + std::to_string(k));
            worst_orbit = std::max(worst_orbit, err / tol);
            ++compared;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(compared) + " orbit points, worst error/tolerance " + fmt("%.2e", worst_orbit);
    }
    return o;
}

Outcome prepole_solver()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int square_roots = 0;
    int certified = 0;
    // With g3 = 0 the zero of wp is the critical half-period, so the (0, 0)
    // equation at n = 2 has double roots; those report multiplicity 2.
    int double_roots = 0;
    for (int n = 0; n <= 2; ++n) {
        for (long j = -1; j <= 1; ++j) {
            for (long k = -1; k <= 1; ++k) {
                for (const PrepoleRoot &r : find_prepole_params(LatticeKind::Square, n, j, k, kDemo, 256)) {
                    ++square_roots;
                    const bool small = std::abs(prepole_residual(LatticeKind::Square, r.lambda_star, n, j, k)) < 1e-9;
                    const auto count = zero_count(LatticeKind::Square, n, j, k, r.lambda_star, r.isolation_radius);
                    certified += small && count == 1 ? 1 : 0;
                    double_roots += small && count == 2 && r.multiplicity == 2 ? 1 : 0;
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(certified >= 1, "no certified square root");
    o.require(secs < 60.0, "square demo runtime " + fmt("%.1f s", secs));

    int tri_roots = 0;
    for (int n = 0; n <= 2; ++n) {
        for (long j = -1; j <= 1; ++j) {
            for (long k = -1; k <= 1; ++k) {
                for (const PrepoleRoot &r : find_prepole_params(LatticeKind::Triangular, n, j, k, kDemo, 128)) {
                    ++tri_roots;
                    const auto steps = critical_capture_steps(LatticeKind::Triangular, r.lambda_star, n + 5);
                    const bool same = steps.size() == 3 && steps[0] && steps[0] == steps[1] && steps[0] == steps[2];
                    o.require(same, "triangular root not simultaneous");
                }
            }
        }
    }
    o.require(tri_roots > 0, "no triangular roots");
    if (o.pass) {
        o.detail = std::to_string(certified) + "/" + std::to_string(square_roots) + " square roots simple, " + std::to_string(double_roots) + " double, "
                   + fmt("%.1f s", secs) + "; " + std::to_string(tri_roots) + " triangular roots simultaneous";
    }
    return o;
}

const HyperbolicSample &candidate_sample()
{
    static const HyperbolicSample s = build_sample(LatticeKind::Square, kCandidate, 100, 0.02);
    return s;
}

Outcome motion_suite()
{
    Outcome o;
    const ToleranceConfig cfg;
    const HyperbolicSample &s = candidate_sample();
    const Complex lambda = kCandidate + Complex{0.0, 1e-5};
    double identity = 0.0, conj = 0.0;
    for (std::size_t i = 0; i < s.points.size(); i += 5) {
        const MotionFrame at0 = track_motion(s, s.points[i], kCandidate);
        identity = std::max(identity, std::abs(at0.h_value - s.points[i]));
        conj = std::max(conj, track_motion(s, s.points[i], lambda).conj_residual);
    }
    o.require(identity <= cfg.eval_tol, "identity " + fmt("%.3g", identity));
    o.require(conj < 10.0 * cfg.newton_tol, "conjugacy " + fmt("%.3g", conj));

    std::vector<double> diffs;
    for (int n = 2; n <= 32; n += 10) {
        const Complex a = motion_chain(s, s.points[5], lambda, n).front();
        const Complex b = motion_chain(s, s.points[5], lambda, n + 10).front();
        diffs.push_back(std::abs(a - b));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        decreasing = decreasing && diffs[i] < diffs[i - 1];
    }
    const double rate = std::pow(diffs.front() / diffs.back(), 1.0 / (10.0 * (diffs.size() - 1)));
    o.require(decreasing, "shadowing not Cauchy");
    o.require(rate > 1.0, "rate " + fmt("%.3g", rate));

    const int k64 = order_K(s, 1e-6, 64);
    const int k128 = order_K(s, 1e-6, 128);
    o.require(k64 >= 1 && k64 == k128, "order_K " + std::to_string(k64) + " vs " + std::to_string(k128));
    if (o.pass) {
        o.detail = "identity " + fmt("%.1e", identity) + ", conjugacy " + fmt("%.1e", conj) + ", rate "
                   + fmt("%.3f", rate) + ", K=" + std::to_string(k64);
    }
    return o;
}

Outcome distortion_suite()
{
    Outcome o;
    const HyperbolicSample &s = candidate_sample();
    DistortionOptions opts;
    opts.max_steps = 64;
    const DistortionReport base = distortion_report(s, 1e-6, 20, {}, opts);
    opts.step_cap = base.min_n;
    double prev = 1.0;
    std::string ratios;
    for (const double r : {1e-6, 5e-7, 2.5e-7}) {
        const DistortionReport rep = distortion_report(s, r, 20, {}, opts);
        o.require(rep.pairs.size() >= 20, "pairs");
        o.require(rep.max_ratio < 0.1, "ratio " + fmt("%.3g", rep.max_ratio));
        o.require(rep.max_ratio <= prev, "increase at r=" + fmt("%.3g", r));
        prev = rep.max_ratio;
        ratios += (ratios.empty() ? "" : ", ") + fmt("%.3e", rep.max_ratio);
    }
    if (o.pass) {
        o.detail = "n capped at " + std::to_string(opts.step_cap) + ", max ratio at r, r/2, r/4: " + ratios;
    }
    return o;
}

Outcome density_suite()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto roots = find_prepole_params(LatticeKind::Square, 0, -1, 0, kDemo, 64);
    o.require(!roots.empty(), "no root");
    if (!o.pass) {
        return o;
    }
    const Complex root = std::min_element(roots.begin(), roots.end(), [](const PrepoleRoot &x, const PrepoleRoot &y) {
                             return std::abs(x.lambda_star - kSquarePrepole) < std::abs(y.lambda_star - kSquarePrepole);
                         })->lambda_star;
    const std::vector<double> radii{1e-3, 1e-4};
    const auto a = density_scan(LatticeKind::Square, root, radii, 2000, 0.05, 200, 7);
    const auto b = density_scan(LatticeKind::Square, root, radii, 2000, 0.05, 200, 7);
    std::string fr;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double p = a[i].fail_fraction;
        const double sigma = std::sqrt(kDensityRegression * (1.0 - kDensityRegression) / a[i].n_samples);
        o.require(p > 0.0, "fail fraction 0");
        o.require(p == b[i].fail_fraction, "rerun differs");
        o.require(std::abs(p - kDensityRegression) <= 3.0 * sigma, "off regression " + fmt("%.4f", p));
        fr += (fr.empty() ? "" : ", ") + fmt("%.4f", p);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 300.0, "runtime");
    if (o.pass) {
        o.detail = "fail fractions " + fr + " (regression " + fmt("%.1f", kDensityRegression) + "), "
                   + fmt("%.1f s", secs);
    }
    return o;
}

struct Run {
    int code;
    std::string out;
};

Run run_cli(const std::string &args)
{
    const std::string cmd = std::string(ELLIDYN_CLI) + " " + args + " 2>&1";
    Run r{-1, {}};
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism_suite()
{
    Outcome o;
    const fs::path dir = fs::path(ELLIDYN_TEST_SCRATCH) / "acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string all = std::to_string(std::max(omp_get_num_procs(), 4));
    const std::vector<std::string> thread_args{"", " --threads 1", " --threads " + all};

    const std::vector<std::pair<std::string, std::string>> commands{
        {"density", "density --lambda0 " + format_complex(kSquarePrepole)
                        + " --radii 1e-3,1e-4 --samples 2000 --delta 0.05 --M 200 --seed 7 --out "},
        {"render-param", "render-param --origin 0.5+0.5i --extent 2.5+2.5i --width 32 --height 32 --budget 300 --out "},
        {"render-dyn", "render-dyn --kind triangular --lambda 1.2+0.9i --origin -1.5-1.5i --extent 3+3i --width 64 "
                       "--height 64 --budget 32 --out "},
    };
    for (const auto &[name, cmd] : commands) {
        std::vector<std::string> outputs;
        for (int rep = 0; rep < 2; ++rep) {
            for (std::size_t t = 0; t < thread_args.size(); ++t) {
                const fs::path out = dir / (name + std::to_string(rep) + std::to_string(t));
                const Run r = run_cli(cmd + out.string() + thread_args[t]);
                o.require(r.code == 0, name + " exit " + std::to_string(r.code));
                outputs.push_back(slurp(out));
            }
        }
        const bool same = std::all_of(outputs.begin(), outputs.end(),
                                      [&](const std::string &s) { return !s.empty() && s == outputs.front(); });
        o.require(same, name + " output differs");
    }
    if (o.pass) {
        o.detail = "density, render-param and render-dyn byte-identical over 2 reruns x threads {default, 1, " + all
                   + "}";
    }
    return o;
}

Outcome ppm_suite()
{
    Outcome o;
    Image red(1, 1);
    red.at(0, 0) = {255, 0, 0};
    const std::string expected = std::string("P6\n1 1\n255\n") + '\xff' + '\x00' + '\x00';
    o.require(ppm_bytes(red) == expected, "1x1 red bytes");

    const ParameterScan demo =
        render_parameter_plane(LatticeKind::Square, {{0.5, 0.5}, {2.5, 2.5}, 64, 64}, 500);
    const std::uint64_t h = fnv1a(ppm_bytes(demo.image));
    char hex[32];
    std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(h));
    o.require(h == kGoldenHash, std::string("demo hash ") + hex);
    if (o.pass) {
        o.detail = "1x1 red is " + std::to_string(expected.size()) + " bytes, demo hash " + hex;
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"wp correctness", wp_suite},
        {"symmetry", symmetry_suite},
        {"prepole solver", prepole_solver},
        {"holomorphic motion", motion_suite},
        {"distortion", distortion_suite},
        {"density", density_suite},
        {"determinism", determinism_suite},
        {"PPM bit-exactness", ppm_suite},
    };
    int failures = 0;
    int index = 0;
    for (const auto &[name, fn] : criteria) {
        ++index;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %d (%s): %s  %s\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
