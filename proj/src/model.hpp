#pragma once

#include "rng.hpp"

namespace bellsim {

inline constexpr double kPi = 3.14159265358979323846;

/// The three knobs of the delay model. Times are in nanoseconds by
/// convention, but only ratios matter.
struct ModelParams {
    double d = 4.0;       ///< delay exponent, >= 0
    double t0 = 1000.0;   ///< maximal delay, > 0
    double window = 10.0; ///< coincidence window, >= 0

    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;
};

/// Polarizer orientation in radians. Only the angle mod pi is physical.
struct Setting {
    double angle = 0.0;
};

/// Hidden polarization angles of one photon pair. s2 is always s1 + pi/2.
struct HiddenPair {
    double s1 = 0.0;
    double s2 = 0.0;
};

/// Angle of a polarizer relative to a polarization, zeta = a - s.
inline double relative_angle(Setting a, double s) { return a.angle - s; }

/// Reduce an angle to [0, pi) for reporting.
double normalize_half_turn(double angle);

/// Malus-law probability that the detector for outcome x (+1 or -1) fires.
double outcome_prob(int x, double zeta);

/// +1 with probability outcome_prob(+1, zeta), otherwise -1.
int sample_outcome(double zeta, RandomStream& rng);

/// T(zeta) = t0 |sin 2 zeta|^d, with 0^0 taken as 1 so that d = 0 means a
/// constant timescale.
double delay_timescale(double zeta, const ModelParams& params);

/// Uniform delay on [0, T(zeta)]; exactly 0 when T(zeta) = 0.
double sample_delay(double zeta, const ModelParams& params, RandomStream& rng);

/// Uniform s1 on [0, 2pi) with s2 orthogonal to it.
HiddenPair sample_hidden_pair(RandomStream& rng);

} // namespace bellsim
