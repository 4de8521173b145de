#ifndef MGON_PLACEMENT_HPP
#define MGON_PLACEMENT_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "mgon/oxc.hpp"
#include "mgon/rfbsa.hpp"
#include "mgon/rng.hpp"

namespace mgon {

struct InfeasibleBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Switch-unit budget for one node: a full-switch node needs a cascade of
// 2N port-expanding units per side (N = fibers per direction), a banding
// node needs one 1xB unit per port on each side.
inline long long budget_units(const Topology& topo, int node, bool flex) {
    long long n = topo.port_count(node);
    return flex ? 2 * n : 2 * n * s_exact((int)n);
}

inline long long placement_total(const Topology& topo, const std::vector<char>& flex) {
    long long t = 0;
    for (int v = 0; v < topo.node_count; ++v) t += budget_units(topo, v, flex[v]);
    return t;
}

struct PlacementResult {
    std::vector<char> flex;      // per node: converted to banding hardware
    long long total_units = 0;
    std::vector<double> cost;    // per node ordering cost (traffic-aware only)
    std::vector<int> order;      // realized replacement sequence
};

namespace detail {
inline long long all_flex_total(const Topology& topo) {
    long long t = 0;
    for (int v = 0; v < topo.node_count; ++v) t += budget_units(topo, v, true);
    return t;
}
}  // namespace detail

// Baseline: convert uniformly random full-switch nodes until the budget holds.
inline PlacementResult place_random(const Topology& topo, long long budget, uint64_t seed) {
    if (budget < detail::all_flex_total(topo))
        throw InfeasibleBudget("budget below the all-banding minimum");
    PlacementResult r;
    r.flex.assign(topo.node_count, 0);
    r.total_units = placement_total(topo, r.flex);
    Rng rng(seed, 11);
    std::vector<int> remaining(topo.node_count);
    for (int v = 0; v < topo.node_count; ++v) remaining[v] = v;
    while (r.total_units > budget) {
        size_t i = rng.next_below(remaining.size());
        int v = remaining[i];
        remaining.erase(remaining.begin() + i);
        r.flex[v] = 1;
        r.order.push_back(v);
        r.total_units = placement_total(topo, r.flex);
    }
    return r;
}

// Per-node traffic observations from a probe run with full switching
// everywhere: the largest number of distinct output fibers any single input
// fiber feeds, and the number of lightpaths passing through (endpoints
// excluded).
struct ProbeStats {
    std::vector<int> maxb;
    std::vector<long long> through;
};

inline ProbeStats probe_traffic(const Topology& topo, const std::vector<Request>& requests,
                                int capacity = 0) {
    RfbsaParams params;
    params.flex_node.assign(topo.node_count, 0);
    SpectrumState state(topo, capacity);
    std::vector<std::map<int, std::set<int>>> fanout(topo.node_count);
    ProbeStats stats;
    stats.maxb.assign(topo.node_count, 0);
    stats.through.assign(topo.node_count, 0);
    for (const Request& req : requests) {
        auto lp = rfbsa_route(req, state, params);
        if (!lp) continue;
        for (size_t i = 0; i + 1 < lp->fibers.size(); ++i) {
            int node = topo.links[state.fiber_link(lp->fibers[i])].dst;
            fanout[node][lp->fibers[i]].insert(lp->fibers[i + 1]);
            ++stats.through[node];
        }
    }
    for (int v = 0; v < topo.node_count; ++v)
        for (const auto& [fin, outs] : fanout[v])
            stats.maxb[v] = std::max(stats.maxb[v], (int)outs.size());
    return stats;
}

// Traffic-aware placement: nodes whose observed band fan-out fits the band
// limit cost 0; others cost their through-traffic density. Convert in
// ascending cost (ties: larger port count first, then lower id) until the
// budget holds.
inline PlacementResult place_traffic_aware(const Topology& topo, long long budget,
                                           const ProbeStats& stats, int band_limit) {
    if (budget < detail::all_flex_total(topo))
        throw InfeasibleBudget("budget below the all-banding minimum");
    PlacementResult r;
    r.flex.assign(topo.node_count, 0);
    r.cost.assign(topo.node_count, 0.0);
    for (int v = 0; v < topo.node_count; ++v)
        if (stats.maxb[v] > band_limit)
            r.cost[v] = (double)stats.through[v] / topo.port_count(v);
    std::vector<int> order(topo.node_count);
    for (int v = 0; v < topo.node_count; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (r.cost[a] != r.cost[b]) return r.cost[a] < r.cost[b];
        if (topo.port_count(a) != topo.port_count(b))
            return topo.port_count(a) > topo.port_count(b);
        return a < b;
    });
    r.total_units = placement_total(topo, r.flex);
    for (int v : order) {
        if (r.total_units <= budget) break;
        r.flex[v] = 1;
        r.order.push_back(v);
        r.total_units = placement_total(topo, r.flex);
    }
    return r;
}

enum class PlacementScheme { Random, TrafficAware, Best };

struct PlacementOutcome {
    PlacementResult placement;
    MsuMetrics msu;
    int blocked = 0;
};

namespace detail {
inline PlacementOutcome run_with_placement(const Topology& topo, PlacementResult placement,
                                           const std::vector<Request>& requests,
                                           int band_limit) {
    RfbsaParams params;
    params.band_limit = band_limit;
    params.flex_node = placement.flex;
    SpectrumState state(topo);
    PlacementOutcome out;
    out.placement = std::move(placement);
    for (const Request& req : requests)
        if (!rfbsa_route(req, state, params)) ++out.blocked;
    out.msu = msu_metrics(state);
    return out;
}

// comparison metric: fewer blocked requests first, then lower mean usage
inline bool outcome_better(const PlacementOutcome& a, const PlacementOutcome& b) {
    if (a.blocked != b.blocked) return a.blocked < b.blocked;
    return a.msu.avg < b.msu.avg;
}
}  // namespace detail

// Two-stage pipeline: pick a placement under the budget, then route the
// workload with the joint search constrained by it. `Best` runs both
// placements and keeps the one with the better outcome.
inline PlacementOutcome placement_pipeline(const Topology& topo, long long budget,
                                           const std::vector<Request>& requests,
                                           PlacementScheme scheme, int band_limit,
                                           uint64_t seed) {
    switch (scheme) {
        case PlacementScheme::Random:
            return detail::run_with_placement(topo, place_random(topo, budget, seed), requests,
                                              band_limit);
        case PlacementScheme::TrafficAware: {
            ProbeStats stats = probe_traffic(topo, requests);
            return detail::run_with_placement(
                topo, place_traffic_aware(topo, budget, stats, band_limit), requests,
                band_limit);
        }
        case PlacementScheme::Best: {
            PlacementOutcome rp = placement_pipeline(topo, budget, requests,
                                                     PlacementScheme::Random, band_limit, seed);
            PlacementOutcome tap = placement_pipeline(
                topo, budget, requests, PlacementScheme::TrafficAware, band_limit, seed);
            return detail::outcome_better(rp, tap) ? rp : tap;
        }
    }
    throw std::logic_error("unknown placement scheme");
}

}  // namespace mgon

#endif
