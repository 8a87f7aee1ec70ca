#pragma once

#include "model.hpp"
#include "rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bellsim {

/// One detector click at one station.
struct DetectionEvent {
    double time_tag = 0.0;       ///< emission time + delay
    std::uint64_t pair_id = 0;
    std::uint32_t setting_index = 0;
    std::int8_t outcome = 1;     ///< +1 or -1
    std::uint8_t station = 1;    ///< 1 or 2

    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

struct EventPair {
    DetectionEvent first;
    DetectionEvent second;
};

/// How emission times are spaced: a fixed interval or a Poisson process.
struct EmissionProcess {
    enum class Kind { Regular, Poisson };

    Kind kind = Kind::Regular;
    double value = 0.0; ///< interval for Regular, rate for Poisson

    static EmissionProcess regular(double interval) { return {Kind::Regular, interval}; }
    static EmissionProcess poisson(double rate) { return {Kind::Poisson, rate}; }

    friend bool operator==(const EmissionProcess&, const EmissionProcess&) = default;
};

struct ExperimentConfig {
    ModelParams params;
    std::vector<Setting> settings1{{0.0}, {kPi / 4}};
    std::vector<Setting> settings2{{kPi / 8}, {3 * kPi / 8}};
    std::uint64_t n_pairs = 1'000'000;
    std::uint64_t seed = 42;
    /// Unset means regular spacing of 10 t0.
    std::optional<EmissionProcess> emission;
    /// Optional deterministic setting schedules, cycled by pair id. An empty
    /// schedule means a uniform random choice per pair.
    std::vector<std::uint32_t> schedule1;
    std::vector<std::uint32_t> schedule2;
    /// Worker threads; 0 picks the hardware concurrency. Output never depends
    /// on this value.
    unsigned workers = 1;

    EmissionProcess effective_emission() const;
    void validate() const;
};

/// Time-ordered detection streams of both stations.
struct EventLog {
    std::vector<DetectionEvent> station1;
    std::vector<DetectionEvent> station2;
    std::vector<Setting> settings1;
    std::vector<Setting> settings2;
    std::uint64_t n_pairs = 0;
    bool has_pair_ids = true;
    std::optional<ExperimentConfig> config;

    const std::vector<DetectionEvent>& stream(int station) const;

    friend bool operator==(const EventLog& a, const EventLog& b);
};

/// Time tags live on a 1e-6 ns grid, the resolution of the tag file format.
double quantize_time(double t);

/// Per-pair random streams: the source (hidden variables, emission gap) and
/// one per station (setting choice, outcome, delay).
struct PairStreams {
    RandomStream source;
    RandomStream station1;
    RandomStream station2;

    static PairStreams derive(std::uint64_t seed, std::uint64_t pair_id);
};

struct SettingChoice {
    std::uint32_t index = 0;
    Setting setting;
};

/// Detection events of one pair whose hidden variables are already known.
/// Each station's fields depend only on its own setting, its own hidden angle
/// and its own random stream.
EventPair generate_pair(std::uint64_t pair_id, double emission_time,
                        const HiddenPair& hidden, SettingChoice setting1,
                        SettingChoice setting2, const ModelParams& params,
                        RandomStream& station1_rng, RandomStream& station2_rng);

/// Draws the hidden pair from the source stream, then generates both events.
EventPair generate_pair(std::uint64_t pair_id, double emission_time,
                        SettingChoice setting1, SettingChoice setting2,
                        const ModelParams& params, PairStreams& streams);

EventLog run_experiment(const ExperimentConfig& config);

} // namespace bellsim
