#include "oracle.hpp"

#include "error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bellsim {

void QuadratureSpec::validate() const
{
    if (!(tolerance > 0.0))
        throw InvalidArgument("quadrature tolerance must be > 0");
    if (max_subdivisions < 1 || grid_panels < 1)
        throw InvalidArgument("quadrature panel counts must be >= 1");
}

namespace {

void check_times(double t1, double t2, double window)
{
    if (!(t1 >= 0.0 && t2 >= 0.0 && window >= 0.0))
        throw InvalidArgument("timescales and window must be >= 0");
}

// Area of {0 <= t1 <= len, t2 - t1 > W} inside the rectangle, with
// excess = T2 - W.
double corner(double len, double excess)
{
    if (excess <= 0.0)
        return 0.0;
    const double m = std::min(len, excess);
    return excess * m - 0.5 * m * m;
}

} // namespace

double weight_exact(double t1, double t2, double window)
{
    check_times(t1, t2, window);
    if (t1 == 0.0 && t2 == 0.0)
        return 1.0;
    if (window == 0.0)
        return 0.0;
    if (t1 == 0.0)
        return std::min(window, t2) / t2;
    if (t2 == 0.0)
        return std::min(window, t1) / t1;
    if (window >= std::max(t1, t2))
        return 1.0;
    const double area = t1 * t2;
    const double w = (area - corner(t1, t2 - window) - corner(t2, t1 - window)) / area;
    return std::clamp(w, 0.0, 1.0);
}

double weight_approx(double t1, double t2, double window)
{
    check_times(t1, t2, window);
    const double longest = std::max(t1, t2);
    if (longest == 0.0)
        throw InvalidArgument("small-window weight needs a nonzero timescale");
    return std::min(1.0, 2.0 * window / longest);
}

double weight_grid(double t1, double t2, double window, std::size_t panels)
{
    check_times(t1, t2, window);
    if (t1 == 0.0 || t2 == 0.0)
        throw InvalidArgument("grid weight needs positive timescales");
    if (panels == 0)
        throw InvalidArgument("grid weight needs at least one panel");
    const auto overlap = [&](double t) {
        const double lo = std::max(0.0, t - window);
        const double hi = std::min(t2, t + window);
        return quad::Vec<1>{std::max(0.0, hi - lo)};
    };
    const double ends[] = {0.0, t1};
    const auto r = quad::fixed_grid<1>(overlap, ends, panels);
    return r.value[0] / (t1 * t2);
}

double OutcomeIntegrals::probability(int x1, int x2) const
{
    if ((x1 != 1 && x1 != -1) || (x2 != 1 && x2 != -1))
        throw InvalidArgument("outcomes must be +1 or -1");
    if (!(norm > 0.0))
        throw Error(ErrorKind::NoCoincidences,
                    "coincidence probability is zero; conditional outcome undefined");
    const double v = x1 > 0 ? (x2 > 0 ? pp : pm) : (x2 > 0 ? mp : mm);
    return v / norm;
}

double OutcomeIntegrals::correlation() const
{
    if (!(norm > 0.0))
        throw Error(ErrorKind::NoCoincidences,
                    "coincidence probability is zero; correlation undefined");
    return std::clamp((pp + mm - pm - mp) / norm, -1.0, 1.0);
}

namespace {

// Points in [0, pi) where the integrand over the hidden angle s has kinks:
// zeros of either timescale, crossings with the window, and T1 = T2.
std::vector<double> breakpoints(Setting a1, Setting a2, const ModelParams& p)
{
    std::vector<double> pts{0.0, kPi};
    const auto add = [&](double s) {
        for (int k = 0; k < 4; ++k)
            pts.push_back(normalize_half_turn(s + k * 0.5 * kPi));
    };
    if (p.d > 0.0) {
        add(a1.angle);
        add(a2.angle);
        if (p.window < p.t0) {
            const double half_arc = 0.5 * std::asin(std::pow(p.window / p.t0, 1.0 / p.d));
            for (double a : {a1.angle, a2.angle}) {
                add(a - half_arc);
                add(a + half_arc);
            }
        }
        const double mid = 0.5 * (a1.angle + a2.angle);
        add(mid);
        add(mid + 0.25 * kPi);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double s : pts)
        if (out.empty() || s - out.back() > 1e-13)
            out.push_back(s);
    if (kPi - out.back() <= 1e-13)
        out.back() = kPi;
    else
        out.push_back(kPi);
    return out;
}

} // namespace

OutcomeIntegrals integrate_outcomes(Setting a1, Setting a2, const ModelParams& params,
                                    const QuadratureSpec& spec)
{
    params.validate();
    spec.validate();
    const auto integrand = [&](double s) {
        const double zeta1 = relative_angle(a1, s);
        const double zeta2 = relative_angle(a2, s + 0.5 * kPi);
        const double w = weight_exact(delay_timescale(zeta1, params),
                                      delay_timescale(zeta2, params), params.window);
        const double c1 = std::cos(2.0 * zeta1);
        const double c2 = std::cos(2.0 * zeta2);
        const double p1 = 0.5 * (1.0 + c1), m1 = 0.5 * (1.0 - c1);
        const double p2 = 0.5 * (1.0 + c2), m2 = 0.5 * (1.0 - c2);
        return quad::Vec<5>{w, p1 * p2 * w, p1 * m2 * w, m1 * p2 * w, m1 * m2 * w};
    };
    const auto breaks = breakpoints(a1, a2, params);

    quad::Result<5> r;
    if (spec.method == QuadratureSpec::Method::Adaptive) {
        // Error target scales with the normalization so it bounds the error
        // of the conditional probabilities.
        const auto target = [&](const quad::Vec<5>& v) {
            return spec.tolerance * std::max(std::abs(v[0]), 1e-8);
        };
        r = quad::adaptive<5>(integrand, breaks, target, spec.max_subdivisions);
    } else {
        r = quad::fixed_grid<5>(integrand, breaks, spec.grid_panels);
    }

    OutcomeIntegrals out;
    out.norm = r.value[0] / kPi;
    out.pp = r.value[1] / kPi;
    out.pm = r.value[2] / kPi;
    out.mp = r.value[3] / kPi;
    out.mm = r.value[4] / kPi;
    out.error = r.error / kPi;
    out.panels = r.panels;
    return out;
}

double joint_prob(int x1, int x2, Setting a1, Setting a2, const ModelParams& params,
                  const QuadratureSpec& quad)
{
    if ((x1 != 1 && x1 != -1) || (x2 != 1 && x2 != -1))
        throw InvalidArgument("outcomes must be +1 or -1");
    return integrate_outcomes(a1, a2, params, quad).probability(x1, x2);
}

double correlation_exact(Setting a1, Setting a2, const ModelParams& params,
                         const QuadratureSpec& quad)
{
    return integrate_outcomes(a1, a2, params, quad).correlation();
}

double coincidence_probability(Setting a1, Setting a2, const ModelParams& params,
                               const QuadratureSpec& quad)
{
    return integrate_outcomes(a1, a2, params, quad).norm;
}

double chsh_exact(const ChshQuadruple& q, const ModelParams& params, const QuadratureSpec& quad)
{
    const auto e = [&](Setting x, Setting y) { return correlation_exact(x, y, params, quad); };
    return std::abs(e(q.a, q.b) - e(q.a, q.b_prime) + e(q.a_prime, q.b) +
                    e(q.a_prime, q.b_prime));
}

double singlet_correlation(Setting a1, Setting a2)
{
    return -std::cos(2.0 * (a1.angle - a2.angle));
}

double mixed_correlation(Setting a1, Setting a2)
{
    return -0.5 * std::cos(2.0 * (a1.angle - a2.angle));
}

std::vector<ReferencePoint> reference_curve(const ModelParams& params,
                                            std::span<const double> deltas,
                                            const QuadratureSpec& quad)
{
    std::vector<ReferencePoint> out;
    out.reserve(deltas.size());
    const Setting origin{0.0};
    for (double delta : deltas) {
        const Setting b{delta};
        out.push_back({delta, correlation_exact(origin, b, params, quad),
                       singlet_correlation(origin, b), mixed_correlation(origin, b)});
    }
    return out;
}

} // namespace bellsim
