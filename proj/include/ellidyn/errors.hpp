#ifndef ELLIDYN_ERRORS_HPP
#define ELLIDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ellidyn
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ZeroParameter : public Error
{
public:
    ZeroParameter() : Error("lattice parameter lambda must be nonzero") {}
};

// Evaluation refused because the point lies within pole_eps of the lattice
// point m*gen1 + n*gen2.
class PoleHit : public Error
{
public:
    PoleHit(long m, long n)
        : Error("point within pole_eps of lattice point (" + std::to_string(m) + ", " + std::to_string(n) + ")"),
          m(m), n(n)
    {
    }
    long m;
    long n;
};

class NewtonDivergence : public Error
{
public:
    using Error::Error;
};

enum class SeparationKind { Critical, Infinity };

class SeparationViolated : public Error
{
public:
    SeparationViolated(int step, SeparationKind kind)
        : Error(std::string("orbit enters the delta-neighbourhood of ")
                + (kind == SeparationKind::Critical ? "a critical point" : "infinity") + " at step "
                + std::to_string(step)),
          step(step), kind(kind)
    {
    }
    int step;
    SeparationKind kind;
};

class NoExpansion : public Error
{
public:
    using Error::Error;
};

class PoleOnOrbit : public Error
{
public:
    explicit PoleOnOrbit(int step) : Error("pole on orbit at step " + std::to_string(step)), step(step) {}
    int step;
};

class ShadowLost : public Error
{
public:
    explicit ShadowLost(int step) : Error("shadowing lost at pullback step " + std::to_string(step)), step(step) {}
    int step;
};

class InsufficientSampling : public Error
{
public:
    using Error::Error;
};

class NearZero : public Error
{
public:
    using Error::Error;
};

class DegenerateRadius : public Error
{
public:
    using Error::Error;
};

class PrematurePole : public Error
{
public:
    explicit PrematurePole(int step)
        : Error("critical orbit reaches a pole before the requested step (step " + std::to_string(step) + ")"),
          step(step)
    {
    }
    int step;
};

class DiscTouchesU : public Error
{
public:
    using Error::Error;
};

class IoFailure : public Error
{
public:
    using Error::Error;
};

} // namespace ellidyn

#endif
