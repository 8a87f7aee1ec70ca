#include "model.hpp"

#include "error.hpp"

#include <cmath>

namespace bellsim {

void ModelParams::validate() const
{
    if (!(std::isfinite(d) && d >= 0.0))
        throw InvalidArgument("exponent d must be a finite value >= 0");
    if (!(std::isfinite(t0) && t0 > 0.0))
        throw InvalidArgument("timescale t0 must be a finite value > 0");
    if (!(std::isfinite(window) && window >= 0.0))
        throw InvalidArgument("coincidence window must be a finite value >= 0");
}

double normalize_half_turn(double angle)
{
    double r = std::fmod(angle, kPi);
    if (r < 0.0)
        r += kPi;
    return r >= kPi ? 0.0 : r;
}

double outcome_prob(int x, double zeta)
{
    if (x != 1 && x != -1)
        throw InvalidArgument("outcome must be +1 or -1, got " + std::to_string(x));
    const double plus = 0.5 * (1.0 + std::cos(2.0 * zeta));
    // p + (1 - p) rounds to exactly 1 for every p in [0, 1].
    return x > 0 ? plus : 1.0 - plus;
}

int sample_outcome(double zeta, RandomStream& rng)
{
    return rng.uniform() < outcome_prob(+1, zeta) ? +1 : -1;
}

double delay_timescale(double zeta, const ModelParams& params)
{
    if (params.d == 0.0)
        return params.t0;
    return params.t0 * std::pow(std::abs(std::sin(2.0 * zeta)), params.d);
}

double sample_delay(double zeta, const ModelParams& params, RandomStream& rng)
{
    const double scale = delay_timescale(zeta, params);
    // Always consume one draw so stream positions do not depend on zeta.
    const double u = rng.uniform();
    return scale > 0.0 ? u * scale : 0.0;
}

HiddenPair sample_hidden_pair(RandomStream& rng)
{
    constexpr double two_pi = 2.0 * kPi;
    const double s1 = two_pi * rng.uniform();
    double s2 = s1 + 0.5 * kPi;
    if (s2 >= two_pi)
        s2 -= two_pi;
    return {s1, s2};
}

} // namespace bellsim
