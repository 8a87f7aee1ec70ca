#pragma once

// Test-only reference computations. None of these call into the code paths
// they are used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace bellsim::testing {

/// Kolmogorov-Smirnov statistic of `samples` against `cdf`.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// Asymptotic KS critical value at significance 0.001.
inline double ks_critical_001(std::size_t n)
{
    return std::sqrt(-0.5 * std::log(0.0005)) / std::sqrt(static_cast<double>(n));
}

/// P(|t2 - t1| <= w) for t1 ~ U[0,a1], t2 ~ U[0,a2], from the trapezoidal
/// distribution of the sum of two uniforms (t2 + (a1 - t1) ~ X, so the band
/// is a1 - w <= X <= a1 + w).
inline double band_probability_trapezoid(double a1, double a2, double w)
{
    const double a = std::min(a1, a2);
    const double b = std::max(a1, a2);
    const auto cdf = [&](double x) {
        if (x <= 0.0)
            return 0.0;
        if (x <= a)
            return x * x / (2 * a * b);
        if (x <= b)
            return (2 * x - a) / (2 * b);
        if (x <= a + b)
            return 1.0 - (a + b - x) * (a + b - x) / (2 * a * b);
        return 1.0;
    };
    return cdf(a1 + w) - cdf(a1 - w);
}

/// Same probability by counting midpoints of an n x n grid.
inline double band_probability_grid(double a1, double a2, double w, int n)
{
    long inside = 0;
    for (int i = 0; i < n; ++i) {
        const double t1 = (i + 0.5) * a1 / n;
        for (int j = 0; j < n; ++j) {
            const double t2 = (j + 0.5) * a2 / n;
            inside += std::abs(t2 - t1) <= w;
        }
    }
    return static_cast<double>(inside) / (static_cast<double>(n) * n);
}

struct BruteForceOutcomes {
    double norm = 0, pp = 0, pm = 0, mp = 0, mm = 0;
    double correlation() const { return (pp + mm - pm - mp) / norm; }
};

/// Midpoint rule over the hidden angle with the model written out from
/// scratch: Malus outcome probabilities, T0|sin 2 zeta|^d timescales and the
/// trapezoid band probability.
inline BruteForceOutcomes brute_force_outcomes(double a1, double a2, double d, double t0,
                                               double w, int n)
{
    BruteForceOutcomes r;
    const double pi = std::numbers::pi;
    for (int k = 0; k < n; ++k) {
        const double s = (k + 0.5) * pi / n;
        const double z1 = a1 - s;
        const double z2 = a2 - s - pi / 2;
        const double T1 = d == 0 ? t0 : t0 * std::pow(std::abs(std::sin(2 * z1)), d);
        const double T2 = d == 0 ? t0 : t0 * std::pow(std::abs(std::sin(2 * z2)), d);
        double weight;
        if (T1 == 0 && T2 == 0)
            weight = 1;
        else if (T1 == 0)
            weight = std::min(w, T2) / T2;
        else if (T2 == 0)
            weight = std::min(w, T1) / T1;
        else
            weight = band_probability_trapezoid(T1, T2, w);
        const double p1 = std::cos(z1) * std::cos(z1);
        const double p2 = std::cos(z2) * std::cos(z2);
        r.norm += weight;
        r.pp += weight * p1 * p2;
        r.pm += weight * p1 * (1 - p2);
        r.mp += weight * (1 - p1) * p2;
        r.mm += weight * (1 - p1) * (1 - p2);
    }
    for (double* v : {&r.norm, &r.pp, &r.pm, &r.mp, &r.mm})
        *v /= n;
    return r;
}

} // namespace bellsim::testing
