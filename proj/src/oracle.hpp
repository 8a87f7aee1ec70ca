#pragma once

#include "analysis.hpp"
#include "model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bellsim {

struct QuadratureSpec {
    enum class Method {
        Adaptive,  ///< adaptive Gauss-Kronrod over the hidden angle
        FixedGrid, ///< fixed composite rule over the hidden angle
    };
    Method method = Method::Adaptive;
    /// Absolute error target on the conditional probabilities, i.e. on each
    /// outcome integral relative to the coincidence normalization.
    double tolerance = 1e-8;
    std::size_t max_subdivisions = 50'000;
    /// Panels per breakpoint segment for FixedGrid.
    std::size_t grid_panels = 256;

    void validate() const;
};

/// Probability that two delays, uniform on [0, t1] and [0, t2], lie within
/// `window` of each other. Closed form from the clipped band geometry; a zero
/// timescale is a point mass at 0.
double weight_exact(double t1, double t2, double window);

/// Small-window form 2W / max(t1, t2), capped at 1.
double weight_approx(double t1, double t2, double window);

/// Independent numerical evaluation of weight_exact for t1, t2 > 0: the
/// clipped interval length in t2 is integrated over t1 on a fixed panel grid.
double weight_grid(double t1, double t2, double window, std::size_t panels = 4096);

/// The four coincidence-weighted outcome integrals for one setting pair,
/// each already divided by the hidden-angle measure.
struct OutcomeIntegrals {
    double norm = 0.0; ///< probability that the pair is coincident
    double pp = 0.0;
    double pm = 0.0;
    double mp = 0.0;
    double mm = 0.0;
    double error = 0.0;
    std::size_t panels = 0;

    /// Conditional probability of (x1, x2) given coincidence.
    double probability(int x1, int x2) const;
    double correlation() const;
};

OutcomeIntegrals integrate_outcomes(Setting a1, Setting a2, const ModelParams& params,
                                    const QuadratureSpec& quad = {});

double joint_prob(int x1, int x2, Setting a1, Setting a2, const ModelParams& params,
                  const QuadratureSpec& quad = {});

double correlation_exact(Setting a1, Setting a2, const ModelParams& params,
                         const QuadratureSpec& quad = {});

/// Normalization integral: the fraction of emitted pairs that are coincident.
double coincidence_probability(Setting a1, Setting a2, const ModelParams& params,
                               const QuadratureSpec& quad = {});

/// CHSH value of the model's exact correlations.
double chsh_exact(const ChshQuadruple& quadruple, const ModelParams& params,
                  const QuadratureSpec& quad = {});

/// -cos 2(a1 - a2): the pure rotationally invariant two-photon state.
double singlet_correlation(Setting a1, Setting a2);

/// -cos 2(a1 - a2) / 2: the rotationally invariant mixture.
double mixed_correlation(Setting a1, Setting a2);

struct ReferencePoint {
    double delta = 0.0;
    double model = 0.0;
    double singlet = 0.0;
    double mixed = 0.0;
};

/// E(delta) for the model and both reference states, with a1 = 0, a2 = delta.
std::vector<ReferencePoint> reference_curve(const ModelParams& params,
                                            std::span<const double> deltas,
                                            const QuadratureSpec& quad = {});

} // namespace bellsim
