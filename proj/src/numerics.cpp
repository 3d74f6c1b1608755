#include <ellidyn/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ellidyn
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index))
{
}

std::uint64_t CounterRng::next_u64()
{
    return splitmix64(key_ ^ splitmix64(counter_++));
}

double CounterRng::next_unit()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Complex uniform_in_unit_disc(CounterRng &rng)
{
    for (;;) {
        const double x = 2.0 * rng.next_unit() - 1.0;
        const double y = 2.0 * rng.next_unit() - 1.0;
        if (x * x + y * y < 1.0) {
            return {x, y};
        }
    }
}

WindingResult winding_of_samples(std::span<const Complex> values)
{
    WindingResult r{0, 0.0, std::numeric_limits<double>::infinity()};
    if (values.empty()) {
        return r;
    }
    double total = 0.0;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = values[i];
        const Complex b = values[(i + 1) % n];
        r.min_modulus = std::min(r.min_modulus, std::abs(a));
        const double inc = std::arg(b / a);
        r.max_increment = std::max(r.max_increment, std::abs(inc));
        total += inc;
    }
    r.winding = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    return r;
}

WindingResult winding_on_circle(const std::function<Complex(Complex)> &f, Complex center, double radius, int n)
{
    std::vector<Complex> values(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / n;
        values[static_cast<std::size_t>(j)] = f(center + std::polar(radius, theta));
    }
    return winding_of_samples(values);
}

Complex central_difference(const std::function<Complex(Complex)> &f, Complex at, double step)
{
    return (f(at + step) - f(at - step)) / (2.0 * step);
}

} // namespace ellidyn
