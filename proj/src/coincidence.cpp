#include "coincidence.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bellsim {

namespace {

void check_window(double window)
{
    if (!(window >= 0.0))
        throw InvalidArgument("coincidence window must be >= 0");
}

std::vector<std::size_t> order_by_pair_id(const std::vector<DetectionEvent>& stream)
{
    std::vector<std::size_t> order(stream.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto less = [&](std::size_t a, std::size_t b) {
        return stream[a].pair_id < stream[b].pair_id;
    };
    if (!std::is_sorted(order.begin(), order.end(), less))
        std::sort(order.begin(), order.end(), less);
    return order;
}

} // namespace

std::vector<CoincidencePair> pair_filter(const EventLog& log, double window)
{
    check_window(window);
    if (!log.has_pair_ids)
        throw Error(ErrorKind::Mismatch, "event log carries no pair ids; use stream matching");
    if (log.station1.size() != log.station2.size())
        throw Error(ErrorKind::Mismatch, "stations hold different numbers of events (" +
                                             std::to_string(log.station1.size()) + " vs " +
                                             std::to_string(log.station2.size()) + ")");
    const auto order1 = order_by_pair_id(log.station1);
    const auto order2 = order_by_pair_id(log.station2);

    std::vector<CoincidencePair> out;
    for (std::size_t k = 0; k < order1.size(); ++k) {
        const DetectionEvent& e1 = log.station1[order1[k]];
        const DetectionEvent& e2 = log.station2[order2[k]];
        if (e1.pair_id != e2.pair_id || (k > 0 && log.station1[order1[k - 1]].pair_id == e1.pair_id))
            throw Error(ErrorKind::Mismatch,
                        "pair id sets differ near pair " + std::to_string(e1.pair_id));
        const double dt = e2.time_tag - e1.time_tag;
        if (std::abs(dt) <= window)
            out.push_back({e1, e2, dt});
    }
    return out;
}

std::vector<CoincidencePair> stream_match(const EventLog& log, double window)
{
    check_window(window);
    const auto& s1 = log.station1;
    const auto& s2 = log.station2;
    std::vector<char> taken(s2.size(), 0);
    std::vector<CoincidencePair> out;

    std::size_t lo = 0;
    for (const DetectionEvent& e1 : s1) {
        const double t1 = e1.time_tag;
        while (lo < s2.size() && (taken[lo] || t1 - s2[lo].time_tag > window))
            ++lo;
        std::size_t best = s2.size();
        double best_gap = 0.0;
        for (std::size_t j = lo; j < s2.size() && s2[j].time_tag - t1 <= window; ++j) {
            if (taken[j])
                continue;
            const double gap = std::abs(s2[j].time_tag - t1);
            if (best == s2.size() || gap < best_gap) {
                best = j;
                best_gap = gap;
            }
        }
        if (best != s2.size()) {
            taken[best] = 1;
            out.push_back({e1, s2[best], s2[best].time_tag - t1});
        }
    }
    return out;
}

std::vector<CoincidencePair> stream_match(const EventLog& log, double window,
                                          MatchPolicy policy)
{
    return policy == MatchPolicy::Paired ? pair_filter(log, window)
                                         : stream_match(log, window);
}

double coincidence_rate(const EventLog& log, double window, MatchPolicy policy)
{
    if (log.n_pairs == 0)
        throw InvalidArgument("event log holds no pairs");
    return static_cast<double>(stream_match(log, window, policy).size()) /
           static_cast<double>(log.n_pairs);
}

} // namespace bellsim
