#pragma once

#include "error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace bellsim::quad {

/// 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1].
/// Abscissae are listed from the outermost inwards; the Gauss nodes are the
/// odd entries.
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    Vec<N> value{};
    double error = 0.0; ///< max over components of |Kronrod - Gauss|
};

/// Applies the 15-point rule to a vector-valued integrand on [lo, hi].
template <std::size_t N, class F>
Panel<N> kronrod15(F&& f, double lo, double hi)
{
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    Vec<N> kron{};
    Vec<N> gauss{};
    const auto accumulate = [&](const Vec<N>& v, double wk, double wg) {
        for (std::size_t c = 0; c < N; ++c) {
            kron[c] += wk * v[c];
            gauss[c] += wg * v[c];
        }
    };
    accumulate(f(centre), kKronrodWeights[7], kGaussWeights[3]);
    for (std::size_t k = 0; k < 7; ++k) {
        const double dx = half * kKronrodNodes[k];
        const double wg = (k % 2 == 1) ? kGaussWeights[k / 2] : 0.0;
        accumulate(f(centre - dx), kKronrodWeights[k], wg);
        accumulate(f(centre + dx), kKronrodWeights[k], wg);
    }
    Panel<N> p{lo, hi, {}, 0.0};
    for (std::size_t c = 0; c < N; ++c) {
        p.value[c] = kron[c] * half;
        p.error = std::max(p.error, std::abs((kron[c] - gauss[c]) * half));
    }
    return p;
}

template <std::size_t N>
struct Result {
    Vec<N> value{};
    double error = 0.0;
    std::size_t panels = 0;
};

/// Globally adaptive integration over the segments delimited by `breaks`
/// (sorted, at least two entries). The panel with the largest error is
/// bisected until the summed error drops to `target(value)` or the panel
/// budget is spent, in which case QuadratureError is thrown.
template <std::size_t N, class F, class Target>
Result<N> adaptive(F&& f, std::span<const double> breaks, Target&& target,
                   std::size_t max_panels)
{
    const auto worse = [](const Panel<N>& a, const Panel<N>& b) { return a.error < b.error; };
    std::priority_queue<Panel<N>, std::vector<Panel<N>>, decltype(worse)> heap(worse);
    double total_error = 0.0;
    Vec<N> total{};
    const auto push = [&](Panel<N> p) {
        total_error += p.error;
        for (std::size_t c = 0; c < N; ++c)
            total[c] += p.value[c];
        heap.push(std::move(p));
    };
    for (std::size_t k = 1; k < breaks.size(); ++k)
        if (breaks[k] > breaks[k - 1])
            push(kronrod15<N>(f, breaks[k - 1], breaks[k]));

    while (!heap.empty() && total_error > target(total)) {
        if (heap.size() >= max_panels)
            throw QuadratureError("adaptive quadrature did not converge within " +
                                      std::to_string(max_panels) + " panels",
                                  total_error);
        Panel<N> worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            throw QuadratureError("adaptive quadrature hit floating-point resolution",
                                  total_error);
        heap.pop();
        total_error -= worst.error;
        for (std::size_t c = 0; c < N; ++c)
            total[c] -= worst.value[c];
        push(kronrod15<N>(f, worst.lo, mid));
        push(kronrod15<N>(f, mid, worst.hi));
    }

    // Re-sum from scratch; the running totals accumulate cancellation error.
    Result<N> r;
    r.panels = heap.size();
    while (!heap.empty()) {
        const auto& p = heap.top();
        for (std::size_t c = 0; c < N; ++c)
            r.value[c] += p.value[c];
        r.error += p.error;
        heap.pop();
    }
    return r;
}

/// Non-adaptive composite rule: every segment split into `panels_per_segment`
/// equal panels.
template <std::size_t N, class F>
Result<N> fixed_grid(F&& f, std::span<const double> breaks, std::size_t panels_per_segment)
{
    Result<N> r;
    for (std::size_t k = 1; k < breaks.size(); ++k) {
        const double lo = breaks[k - 1];
        const double width = (breaks[k] - lo) / static_cast<double>(panels_per_segment);
        if (!(width > 0.0))
            continue;
        for (std::size_t i = 0; i < panels_per_segment; ++i) {
            const double a = lo + width * static_cast<double>(i);
            const double b = i + 1 == panels_per_segment ? breaks[k] : a + width;
            const auto p = kronrod15<N>(f, a, b);
            for (std::size_t c = 0; c < N; ++c)
                r.value[c] += p.value[c];
            r.error += p.error;
            ++r.panels;
        }
    }
    return r;
}

} // namespace bellsim::quad
