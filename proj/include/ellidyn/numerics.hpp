#ifndef ELLIDYN_NUMERICS_HPP
#define ELLIDYN_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <ellidyn/types.hpp>

namespace ellidyn
{

// Counter-based random stream: every draw is a pure function of
// (seed, stream, index, counter), so samples can be generated in any order.
class CounterRng
{
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

    std::uint64_t next_u64();
    // Uniform in [0, 1) with 53 random bits.
    double next_unit();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Uniform point in the open unit disc by rejection from [-1, 1)^2.
Complex uniform_in_unit_disc(CounterRng &rng);

struct WindingResult {
    int winding;
    double max_increment; // largest |delta arg| between consecutive samples
    double min_modulus;
};

// Winding number about 0 of the closed polygon through the given values,
// summing principal-branch argument increments.
WindingResult winding_of_samples(std::span<const Complex> values);

// Samples f on the circle |z - center| = radius at n points and returns the
// winding of the image about 0.
WindingResult winding_on_circle(const std::function<Complex(Complex)> &f, Complex center, double radius, int n);

// Central difference of a holomorphic function along the real direction.
Complex central_difference(const std::function<Complex(Complex)> &f, Complex at, double step);

} // namespace ellidyn

#endif
