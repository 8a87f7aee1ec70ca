#include "coincidence.hpp"
#include "error.hpp"
#include "event_sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace bellsim;

namespace {

ExperimentConfig small_config(std::uint64_t n = 1000)
{
    ExperimentConfig c;
    c.params = {4, 1000, 10};
    c.n_pairs = n;
    return c;
}

} // namespace

TEST_CASE("generate_pair with zero relative angle at station 1")
{
    const ModelParams p{4, 1, 0.1};
    for (std::uint64_t id = 0; id < 200; ++id) {
        auto probe = PairStreams::derive(9, id);
        const HiddenPair hidden = sample_hidden_pair(probe.source);
        auto streams = PairStreams::derive(9, id);
        const double emission = 10.0 * id;
        const auto pair = generate_pair(id, emission, {0, {hidden.s1}}, {0, {0.3}}, p, streams);
        CHECK(pair.first.outcome == +1);
        CHECK(pair.first.time_tag == emission);
        CHECK(pair.first.station == 1);
        CHECK(pair.second.station == 2);
        CHECK(pair.first.pair_id == id);
    }
}

TEST_CASE("generate_pair delays stay within t0 and are reproducible")
{
    const ModelParams p{2, 5, 0.1};
    for (std::uint64_t id = 0; id < 5000; ++id) {
        auto a = PairStreams::derive(1, id);
        auto b = PairStreams::derive(1, id);
        const auto x = generate_pair(id, 100.0, {1, {0.2}}, {0, {1.0}}, p, a);
        const auto y = generate_pair(id, 100.0, {1, {0.2}}, {0, {1.0}}, p, b);
        REQUIRE(x.first == y.first);
        REQUIRE(x.second == y.second);
        for (const auto& e : {x.first, x.second}) {
            REQUIRE(e.time_tag >= 100.0);
            REQUIRE(e.time_tag - 100.0 <= 5.0);
            REQUIRE((e.outcome == 1 || e.outcome == -1));
        }
    }
}

TEST_CASE("run_experiment produces one event per pair per station, time ordered")
{
    const auto log = run_experiment(small_config());
    CHECK(log.station1.size() == 1000);
    CHECK(log.station2.size() == 1000);
    CHECK(log.n_pairs == 1000);
    for (const auto* s : {&log.station1, &log.station2})
        for (std::size_t i = 1; i < s->size(); ++i)
            REQUIRE((*s)[i - 1].time_tag <= (*s)[i].time_tag);
    for (const auto& e : log.station1) {
        const double emission = 10.0 * 1000 * static_cast<double>(e.pair_id);
        REQUIRE(e.time_tag >= emission);
        REQUIRE(e.time_tag <= emission + 1000);
    }
}

TEST_CASE("run_experiment does not depend on the worker count")
{
    auto c = small_config(20011);
    c.workers = 1;
    const auto one = run_experiment(c);
    c.workers = 8;
    const auto eight = run_experiment(c);
    CHECK(one == eight);
    c.emission = EmissionProcess::poisson(1.0 / 300.0);
    c.workers = 1;
    const auto p1 = run_experiment(c);
    c.workers = 3;
    CHECK(p1 == run_experiment(c));
}

TEST_CASE("settings are chosen uniformly")
{
    auto c = small_config(100000);
    c.settings1 = {{0.0}, {kPi / 4}};
    const auto log = run_experiment(c);
    long first = 0;
    for (const auto& e : log.station1)
        first += e.setting_index == 0;
    CHECK(std::abs(first - 50000) <= 5 * std::sqrt(25000.0));
}

TEST_CASE("deterministic schedules")
{
    auto c = small_config(100);
    c.schedule1 = {1, 0};
    c.schedule2 = {0};
    const auto log = run_experiment(c);
    for (const auto& e : log.station1)
        CHECK(e.setting_index == (e.pair_id % 2 == 0 ? 1u : 0u));
    for (const auto& e : log.station2)
        CHECK(e.setting_index == 0u);
}

TEST_CASE("station 1 output does not depend on station 2 settings")
{
    auto c = small_config(5000);
    c.settings2 = {{0.1}, {0.7}, {1.3}};
    const auto base = run_experiment(c);
    c.settings2 = {{1.3}, {0.1}, {0.7}};
    const auto permuted = run_experiment(c);
    CHECK(base.station1 == permuted.station1);
    c.settings2 = {{2.9}};
    CHECK(base.station1 == run_experiment(c).station1);
}

TEST_CASE("common rotation leaves statistics invariant")
{
    // Rotating all settings by delta is the same as rotating the hidden
    // variables; compare correlations and rates of two independent runs.
    const double delta = 0.61;
    auto c = small_config(100000);
    c.params = {4, 1, 0.1};
    c.settings1 = {{0.0}};
    c.settings2 = {{kPi / 8}};
    const auto base = stream_match(run_experiment(c), 0.1, MatchPolicy::Paired);
    c.settings1 = {{delta}};
    c.settings2 = {{kPi / 8 + delta}};
    c.seed = 4242;
    const auto rotated = stream_match(run_experiment(c), 0.1, MatchPolicy::Paired);

    const auto stats = [](const std::vector<CoincidencePair>& pairs) {
        double sum = 0;
        for (const auto& p : pairs)
            sum += p.first.outcome * p.second.outcome;
        return sum / static_cast<double>(pairs.size());
    };
    const double e0 = stats(base), e1 = stats(rotated);
    const double se = std::sqrt((1 - e0 * e0) / base.size() + (1 - e1 * e1) / rotated.size());
    CHECK(std::abs(e0 - e1) <= 5 * se);
    const double r0 = base.size() / 1e5, r1 = rotated.size() / 1e5;
    CHECK(std::abs(r0 - r1) <= 5 * std::sqrt(2 * r0 * (1 - r0) / 1e5));
}

TEST_CASE("Poisson emission")
{
    auto c = small_config(50000);
    c.params = {4, 1, 0.1};
    c.emission = EmissionProcess::poisson(0.5);
    const auto log = run_experiment(c);
    for (std::size_t i = 1; i < log.station1.size(); ++i)
        REQUIRE(log.station1[i - 1].time_tag <= log.station1[i].time_tag);
    double latest = 0;
    for (const auto& e : log.station1)
        latest = std::max(latest, e.time_tag);
    // mean gap 1/rate = 2
    CHECK(latest / 50000 == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("configuration validation")
{
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    c.n_pairs = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.settings1.clear();
    CHECK_THROWS_AS(run_experiment(c), InvalidArgument);
    c = small_config();
    c.schedule2 = {5};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.emission = EmissionProcess::regular(0);
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.emission = EmissionProcess::poisson(-2);
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.params.window = -1;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("quantize_time")
{
    CHECK(quantize_time(1.23456789) == 1.234568);
    CHECK(quantize_time(0.0) == 0.0);
    const double big = 0x1.0p40 + 0.5;
    CHECK(quantize_time(big) == big);
}
