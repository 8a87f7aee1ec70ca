#include "event_sim.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace bellsim {

EmissionProcess ExperimentConfig::effective_emission() const
{
    return emission.value_or(EmissionProcess::regular(10.0 * params.t0));
}

void ExperimentConfig::validate() const
{
    params.validate();
    if (n_pairs < 1)
        throw InvalidArgument("n_pairs must be at least 1");
    if (settings1.empty() || settings2.empty())
        throw InvalidArgument("each station needs at least one setting");
    for (const auto* list : {&settings1, &settings2})
        for (const auto& s : *list)
            if (!std::isfinite(s.angle))
                throw InvalidArgument("setting angles must be finite");
    const auto check_schedule = [](const std::vector<std::uint32_t>& schedule,
                                   std::size_t n, int station) {
        for (auto idx : schedule)
            if (idx >= n)
                throw InvalidArgument("schedule for station " + std::to_string(station) +
                                      " references setting " + std::to_string(idx) +
                                      " but only " + std::to_string(n) + " exist");
    };
    check_schedule(schedule1, settings1.size(), 1);
    check_schedule(schedule2, settings2.size(), 2);
    const auto e = effective_emission();
    if (!(std::isfinite(e.value) && e.value > 0.0))
        throw InvalidArgument(e.kind == EmissionProcess::Kind::Regular
                                  ? "emission interval must be > 0"
                                  : "emission rate must be > 0");
}

const std::vector<DetectionEvent>& EventLog::stream(int station) const
{
    if (station == 1)
        return station1;
    if (station == 2)
        return station2;
    throw InvalidArgument("station must be 1 or 2");
}

bool operator==(const EventLog& a, const EventLog& b)
{
    const auto same_settings = [](const std::vector<Setting>& x,
                                  const std::vector<Setting>& y) {
        return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                          [](Setting p, Setting q) { return p.angle == q.angle; });
    };
    return a.n_pairs == b.n_pairs && a.has_pair_ids == b.has_pair_ids &&
           a.station1 == b.station1 && a.station2 == b.station2 &&
           same_settings(a.settings1, b.settings1) && same_settings(a.settings2, b.settings2);
}

double quantize_time(double t)
{
    // Above 2^33 the double spacing already exceeds 1e-6 and %.6f round-trips.
    if (std::abs(t) >= 0x1.0p33)
        return t;
    return std::nearbyint(t * 1e6) / 1e6;
}

PairStreams PairStreams::derive(std::uint64_t seed, std::uint64_t pair_id)
{
    return {substream(seed, pair_id, 0), substream(seed, pair_id, 1),
            substream(seed, pair_id, 2)};
}

EventPair generate_pair(std::uint64_t pair_id, double emission_time,
                        const HiddenPair& hidden, SettingChoice setting1,
                        SettingChoice setting2, const ModelParams& params,
                        RandomStream& station1_rng, RandomStream& station2_rng)
{
    const auto detect = [&](std::uint8_t station, SettingChoice choice, double s,
                            RandomStream& rng) {
        const double zeta = relative_angle(choice.setting, s);
        DetectionEvent ev;
        ev.station = station;
        ev.pair_id = pair_id;
        ev.setting_index = choice.index;
        ev.outcome = static_cast<std::int8_t>(sample_outcome(zeta, rng));
        ev.time_tag = quantize_time(emission_time + sample_delay(zeta, params, rng));
        return ev;
    };
    return {detect(1, setting1, hidden.s1, station1_rng),
            detect(2, setting2, hidden.s2, station2_rng)};
}

EventPair generate_pair(std::uint64_t pair_id, double emission_time,
                        SettingChoice setting1, SettingChoice setting2,
                        const ModelParams& params, PairStreams& streams)
{
    const HiddenPair hidden = sample_hidden_pair(streams.source);
    return generate_pair(pair_id, emission_time, hidden, setting1, setting2, params,
                         streams.station1, streams.station2);
}

namespace {

SettingChoice choose_setting(const std::vector<Setting>& settings,
                             const std::vector<std::uint32_t>& schedule,
                             std::uint64_t pair_id, RandomStream& rng)
{
    // The draw is consumed even with a schedule so the rest of the stream
    // is the same either way.
    const double u = rng.uniform();
    std::uint32_t idx;
    if (!schedule.empty())
        idx = schedule[pair_id % schedule.size()];
    else
        idx = std::min(static_cast<std::uint32_t>(u * settings.size()),
                       static_cast<std::uint32_t>(settings.size() - 1));
    return {idx, settings[idx]};
}

void sort_stream(std::vector<DetectionEvent>& stream)
{
    const auto by_time = [](const DetectionEvent& a, const DetectionEvent& b) {
        return a.time_tag < b.time_tag || (a.time_tag == b.time_tag && a.pair_id < b.pair_id);
    };
    if (!std::is_sorted(stream.begin(), stream.end(), by_time))
        std::sort(stream.begin(), stream.end(), by_time);
}

} // namespace

EventLog run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const std::uint64_t n = config.n_pairs;
    const EmissionProcess emission = config.effective_emission();

    EventLog log;
    log.settings1 = config.settings1;
    log.settings2 = config.settings2;
    log.n_pairs = n;
    log.config = config;
    log.station1.resize(n);
    log.station2.resize(n);

    // Pass 1: everything per pair, with delays relative to emission. Poisson
    // gaps are stashed in station-1 time tags until the prefix sum.
    std::vector<double> gaps(emission.kind == EmissionProcess::Kind::Poisson ? n : 0);
    const auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t id = begin; id < end; ++id) {
            auto streams = PairStreams::derive(config.seed, id);
            const HiddenPair hidden = sample_hidden_pair(streams.source);
            if (!gaps.empty())
                gaps[id] = -std::log1p(-streams.source.uniform()) / emission.value;
            const auto c1 = choose_setting(config.settings1, config.schedule1, id, streams.station1);
            const auto c2 = choose_setting(config.settings2, config.schedule2, id, streams.station2);
            const auto pair = generate_pair(id, 0.0, hidden, c1, c2, config.params,
                                            streams.station1, streams.station2);
            log.station1[id] = pair.first;
            log.station2[id] = pair.second;
        }
    };

    unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, n));
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = std::min(n, w * chunk);
            const std::uint64_t end = std::min(n, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
    }

    // Pass 2: absolute time tags, sequentially so the sums are reproducible.
    double emission_time = 0.0;
    for (std::uint64_t id = 0; id < n; ++id) {
        if (emission.kind == EmissionProcess::Kind::Regular) {
            emission_time = quantize_time(static_cast<double>(id) * emission.value);
        } else if (id > 0) {
            emission_time = quantize_time(emission_time + gaps[id]);
        }
        if (emission_time != 0.0) {
            log.station1[id].time_tag = quantize_time(emission_time + log.station1[id].time_tag);
            log.station2[id].time_tag = quantize_time(emission_time + log.station2[id].time_tag);
        }
    }
    sort_stream(log.station1);
    sort_stream(log.station2);
    return log;
}

} // namespace bellsim
