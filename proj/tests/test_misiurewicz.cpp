#include <doctest.h>

#include <omp.h>

#include <ellidyn/errors.hpp>
#include <ellidyn/misiurewicz.hpp>

#include "support.hpp"

using namespace ellidyn;
using testsupport::kRho;

namespace
{

const Region kDemo{0.5, 3.0, 0.5, 3.0};
const Complex kCandidate{1.9084272717633082, 1.361553243147176};

double nearest(const std::vector<PrepoleRoot> &roots, Complex z)
{
    double best = 1e300;
    for (const PrepoleRoot &r : roots) {
        best = std::min(best, std::abs(r.lambda_star - z));
    }
    return best;
}

} // namespace

TEST_CASE("pole locations")
{
    CHECK(std::abs(pole_location(LatticeKind::Square, 1.0, 2, 3) - Complex{2.0, 3.0}) < 1e-15);
    CHECK(pole_location(LatticeKind::Triangular, Complex{1.3, -0.2}, 0, 0) == Complex{});
    CHECK(std::abs(pole_location(LatticeKind::Triangular, 1.0, 0, 1) - kRho) < 1e-15);
}

TEST_CASE("prepole residual")
{
    const Complex lambda{1.4, 0.9};
    const Lattice lat = make_lattice(LatticeKind::Square, lambda);
    CHECK(std::abs(prepole_residual(LatticeKind::Square, lambda, 0, 1, -1)
                   - (lat.crit_values[0] - (lambda - Complex{0.0, 1.0} * lambda)))
          < 1e-13);
    CHECK(std::abs(prepole_residual(LatticeKind::Square, lambda, 1, 0, 1) - (wp(lat.crit_values[0], lat) - lat.gen2))
          < 1e-12);

    const Complex root{0.95074668065375878, 1.6467415560197722};
    CHECK(std::abs(prepole_residual(LatticeKind::Square, root, 0, -1, 0)) < 1e-9);
    CHECK_THROWS_AS(prepole_residual(LatticeKind::Square, root, 1, 0, 0), PrematurePole);
}

TEST_CASE("prepole roots on the demo region")
{
    const auto roots = find_prepole_params(LatticeKind::Square, 1, 1, 0, kDemo, 128);
    REQUIRE_FALSE(roots.empty());
    for (const PrepoleRoot &r : roots) {
        CHECK(r.n == 1);
        CHECK(r.j == 1);
        CHECK(r.k == 0);
        CHECK(kDemo.contains(r.lambda_star));
        CHECK(r.residual < 1e-9);
        CHECK(std::abs(prepole_residual(LatticeKind::Square, r.lambda_star, 1, 1, 0)) < 1e-9);
        CHECK(r.multiplicity == 1);
        CHECK(r.isolation_radius >= 1e-9);
        // Independent argument-principle count on the isolation circle.
        const auto g = [&](Complex l) { return prepole_residual(LatticeKind::Square, l, 1, 1, 0); };
        const WindingResult w = winding_on_circle(g, r.lambda_star, r.isolation_radius, 4096);
        CHECK(w.winding == 1);
        CHECK(zero_count(LatticeKind::Square, 1, 1, 0, r.lambda_star, r.isolation_radius) == 1);
    }

    // Roots isolated on the scale of the coarse grid come back unchanged.
    const auto finer = find_prepole_params(LatticeKind::Square, 1, 1, 0, kDemo, 256);
    const double cell = (kDemo.re_max - kDemo.re_min) / 127.0;
    int resolved = 0;
    for (const PrepoleRoot &r : roots) {
        if (r.isolation_radius >= 2.0 * cell) {
            CHECK(nearest(finer, r.lambda_star) < 10.0 * 1e-10);
            ++resolved;
        }
    }
    CHECK(resolved >= 10);
}

TEST_CASE("roots of distinct equations are separated")
{
    const auto a = find_prepole_params(LatticeKind::Square, 0, -1, 0, kDemo, 64);
    const auto b = find_prepole_params(LatticeKind::Square, 0, 0, -1, kDemo, 64);
    REQUIRE_FALSE(a.empty());
    REQUIRE_FALSE(b.empty());
    for (const PrepoleRoot &ra : a) {
        for (const PrepoleRoot &rb : b) {
            const double d = std::abs(ra.lambda_star - rb.lambda_star);
            CHECK(d > ra.isolation_radius);
            CHECK(d > rb.isolation_radius);
            CHECK(std::abs(prepole_residual(LatticeKind::Square, ra.lambda_star, 0, 0, -1)) > 1e-3);
            CHECK(std::abs(prepole_residual(LatticeKind::Square, rb.lambda_star, 0, -1, 0)) > 1e-3);
        }
    }
}

TEST_CASE("root finder input validation")
{
    CHECK_THROWS_AS(find_prepole_params(LatticeKind::Square, 0, 1, 0, kDemo, 4), std::invalid_argument);
    CHECK_THROWS_AS(find_prepole_params(LatticeKind::Square, 0, 1, 0, Region{-1.0, 1.0, -1.0, 1.0}, 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_prepole_params(LatticeKind::Square, 0, 1, 0, Region{2.0, 1.0, 0.5, 3.0}, 64),
                    std::invalid_argument);
}

TEST_CASE("triangular roots are simultaneous prepoles")
{
    for (long j = -1; j <= 1; ++j) {
        for (long k = -1; k <= 1; ++k) {
            if (j == 0 && k == 0) {
                continue;
            }
            for (const PrepoleRoot &r : find_prepole_params(LatticeKind::Triangular, 1, j, k, kDemo, 64)) {
                const auto steps = critical_capture_steps(LatticeKind::Triangular, r.lambda_star, 10);
                REQUIRE(steps.size() == 3);
                for (const auto &s : steps) {
                    CHECK(s == 1);
                }
            }
        }
    }
}

TEST_CASE("Misiurewicz check")
{
    const Complex root{0.95074668065375878, 1.6467415560197722};
    const auto n1 = find_prepole_params(LatticeKind::Square, 1, 1, 0, kDemo, 64);
    REQUIRE_FALSE(n1.empty());
    const CheckReport hit = misiurewicz_check(LatticeKind::Square, n1.front().lambda_star, 0.0, 50);
    CHECK_FALSE(hit.passed);
    REQUIRE(hit.first_violation.has_value());
    CHECK(hit.first_violation->kind == ViolationKind::PoleHit);
    CHECK(hit.first_violation->step == 1);
    CHECK(hit.first_violation->step < hit.iterations);
    CHECK(std::string(to_string(ViolationKind::NearCritical)) == "NearCritical");

    const CheckReport r0 = misiurewicz_check(LatticeKind::Square, root, 0.05, 10);
    REQUIRE(r0.first_violation.has_value());
    CHECK(r0.first_violation->kind == ViolationKind::PoleHit);
    CHECK(r0.first_violation->step == 0);

    const CheckReport cand = misiurewicz_check(LatticeKind::Square, kCandidate, 0.05, 100);
    CHECK(cand.passed);
    CHECK_FALSE(cand.first_violation.has_value());
    CHECK(cand.iterations == 101);

    CounterRng rng(31, 0, 0);
    int zero_delta_failures = 0;
    for (int i = 0; i < 60; ++i) {
        const Complex lambda = Complex{0.5, 0.5} + Complex{2.5 * rng.next_unit(), 2.5 * rng.next_unit()};
        for (const LatticeKind kind : {LatticeKind::Square, LatticeKind::Triangular}) {
            const CheckReport base = misiurewicz_check(kind, lambda, 0.05, 30);
            CHECK(base.passed == !base.first_violation.has_value());
            if (!base.passed) {
                CHECK_FALSE(misiurewicz_check(kind, lambda, 0.08, 30).passed);
                CHECK_FALSE(misiurewicz_check(kind, lambda, 0.05, 60).passed);
                CHECK(base.first_violation->step < base.iterations);
            }
            const CheckReport loose = misiurewicz_check(kind, lambda, 0.0, 30);
            if (!loose.passed) {
                CHECK(loose.first_violation->kind == ViolationKind::PoleHit);
                ++zero_delta_failures;
            }
        }
    }
    CHECK(zero_delta_failures <= 2);
}

TEST_CASE("density scan")
{
    const Complex root{0.95074668065375878, 1.6467415560197722};
    const std::vector<double> radii{1e-3, 1e-4};
    const auto rows = density_scan(LatticeKind::Square, root, radii, 200, 0.05, 50, 7, {}, Execution::Serial);
    REQUIRE(rows.size() == 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].radius == radii[i]);
        CHECK(rows[i].n_samples == 200);
        CHECK(rows[i].seed == 7);
        CHECK(rows[i].fail_fraction >= 0.0);
        CHECK(rows[i].fail_fraction <= 1.0);
        CHECK(rows[i].fail_fraction > 0.0);
    }

    const int saved = omp_get_max_threads();
    for (const int threads : {1, 4}) {
        omp_set_num_threads(threads);
        const auto par = density_scan(LatticeKind::Square, root, radii, 200, 0.05, 50, 7, {}, Execution::Parallel);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(par[i].fail_fraction == rows[i].fail_fraction);
        }
    }
    omp_set_num_threads(saved);

    const auto open = density_scan(LatticeKind::Square, Complex{1.6, 1.1}, {1e-2}, 200, 0.0, 50, 3);
    CHECK(open[0].fail_fraction < 0.05);

    CHECK_THROWS_AS(density_scan(LatticeKind::Square, root, radii, 50, 0.05, 50, 7), std::invalid_argument);
    CHECK_THROWS_AS(density_scan(LatticeKind::Square, root, {1e-4, 1e-3}, 200, 0.05, 50, 7), std::invalid_argument);
    CHECK_THROWS_AS(density_scan(LatticeKind::Square, root, {-1e-3}, 200, 0.05, 50, 7), std::invalid_argument);
}

TEST_CASE("covering steps")
{
    const Lattice lat = make_lattice(LatticeKind::Square, kCandidate);
    const Complex c{0.3, 0.2};
    CHECK_FALSE(covering_steps(lat, c, 0.1, 0.05, 0, 128).has_value());

    // A disc holding a whole fundamental cell maps onto the sphere.
    const double cell = std::abs(lat.gen1) + std::abs(lat.gen2);
    CHECK(covering_steps(lat, c, cell, 0.05, 5, 128) == 1);

    std::optional<int> prev;
    for (const double d : {0.03, 0.1, 0.3}) {
        const auto m = covering_steps(lat, Complex{-0.4, 1.0}, d, 0.05, 30, 128);
        REQUIRE(m.has_value());
        if (prev) {
            CHECK(*m <= *prev);
        }
        prev = m;
    }

    CHECK_THROWS_AS(covering_steps(lat, lat.half_periods[1], 0.1, 0.05, 5, 128), DiscTouchesU);
    CHECK_THROWS_AS(covering_steps(lat, c, 0.1, 0.05, 5, 16), std::invalid_argument);
}
