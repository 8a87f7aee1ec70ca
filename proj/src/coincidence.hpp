#pragma once

#include "event_sim.hpp"

#include <vector>

namespace bellsim {

struct CoincidencePair {
    DetectionEvent first;  ///< station 1
    DetectionEvent second; ///< station 2
    double dt = 0.0;       ///< second.time_tag - first.time_tag
};

enum class MatchPolicy {
    Paired,       ///< match by pair id
    StreamGreedy, ///< nearest unmatched neighbour in time, earliest first
};

/// Keeps each pair whose two time tags differ by at most `window`. Output is
/// ordered by pair id. Throws Mismatch when the two streams do not carry the
/// same set of pair ids.
std::vector<CoincidencePair> pair_filter(const EventLog& log, double window);

/// Greedy matching on raw time tags: station-1 events are visited in time
/// order and each takes the nearest still-unmatched station-2 event within
/// the window (the earlier one on ties). Output is in station-1 time order.
std::vector<CoincidencePair> stream_match(const EventLog& log, double window);

/// Dispatches on the policy.
std::vector<CoincidencePair> stream_match(const EventLog& log, double window,
                                          MatchPolicy policy);

/// Matched pairs divided by emitted pairs.
double coincidence_rate(const EventLog& log, double window,
                        MatchPolicy policy = MatchPolicy::Paired);

} // namespace bellsim
