#pragma once

#include "coincidence.hpp"
#include "event_sim.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace bellsim {

/// Outcome counts for one setting combination.
struct CorrelationCell {
    std::uint64_t pp = 0; ///< N(+1,+1)
    std::uint64_t pm = 0; ///< N(+1,-1)
    std::uint64_t mp = 0; ///< N(-1,+1)
    std::uint64_t mm = 0; ///< N(-1,-1)

    std::uint64_t total() const { return pp + pm + mp + mm; }
    bool empty() const { return total() == 0; }

    /// (N++ + N-- - N+- - N-+) / N. Throws EmptyCell for N = 0.
    double correlation() const;
    /// sqrt((1 - E^2) / N).
    double standard_error() const;
};

struct Estimate {
    double value = 0.0;
    double standard_error = 0.0;
};

class CorrelationTable {
public:
    CorrelationTable(std::vector<Setting> settings1, std::vector<Setting> settings2);

    std::size_t rows() const { return settings1_.size(); }
    std::size_t cols() const { return settings2_.size(); }
    const std::vector<Setting>& settings1() const { return settings1_; }
    const std::vector<Setting>& settings2() const { return settings2_; }

    CorrelationCell& cell(std::size_t i, std::size_t j);
    const CorrelationCell& cell(std::size_t i, std::size_t j) const;

    /// Index of the setting equal to `s` mod pi, or throws MissingCombination.
    std::size_t index1(Setting s) const;
    std::size_t index2(Setting s) const;

    Estimate correlation(Setting a, Setting b) const;

    /// (i, j) of every combination without coincidences.
    std::vector<std::array<std::size_t, 2>> empty_cells() const;

    std::uint64_t total() const;

private:
    std::vector<Setting> settings1_;
    std::vector<Setting> settings2_;
    std::vector<CorrelationCell> cells_;
};

/// Counts coincidences per setting combination. Throws NoCoincidences for an
/// empty input; empty individual cells are kept and surface as EmptyCell
/// when their correlation is requested.
CorrelationTable tabulate(std::span<const CoincidencePair> coincidences,
                          std::span<const Setting> settings1,
                          std::span<const Setting> settings2);

CorrelationTable tabulate(std::span<const CoincidencePair> coincidences,
                          const ExperimentConfig& config);

struct ChshQuadruple {
    Setting a{0.0};
    Setting a_prime{kPi / 4};
    Setting b{kPi / 8};
    Setting b_prime{3 * kPi / 8};
};

struct ChshResult {
    double s = 0.0;
    double standard_error = 0.0;
    /// E(a,b), E(a,b'), E(a',b), E(a',b')
    std::array<double, 4> correlations{};
};

/// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|, errors added in quadrature.
ChshResult chsh(const std::array<Estimate, 4>& correlations);
ChshResult chsh(const CorrelationTable& table, const ChshQuadruple& quadruple = {});

struct SweepPoint {
    double window = 0.0;
    double s = 0.0;
    double standard_error = 0.0;
    double coincidence_rate = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;

    /// Windows where S crosses `level`, interpolated linearly in log W
    /// between bracketing grid points.
    std::vector<double> crossings(double level = 2.0) const;
};

struct SweepOptions {
    ChshQuadruple quadruple;
    MatchPolicy policy = MatchPolicy::Paired;
    /// Regenerate the log for every window (seed mixed with the window
    /// index) instead of re-filtering a single log.
    bool independent_logs = false;
};

/// Window grid from lo to hi inclusive, logarithmic or linear.
std::vector<double> window_grid(double lo, double hi, std::size_t count, bool logarithmic);

/// Re-filters one stored log at every window.
SweepResult window_sweep(const EventLog& log, std::span<const double> windows,
                         const SweepOptions& options = {});

/// Simulates and sweeps. Windows must be strictly increasing.
SweepResult window_sweep(const ExperimentConfig& config, std::span<const double> windows,
                         const SweepOptions& options = {});

} // namespace bellsim
