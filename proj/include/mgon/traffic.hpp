#ifndef MGON_TRAFFIC_HPP
#define MGON_TRAFFIC_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mgon/rng.hpp"
#include "mgon/topology.hpp"

namespace mgon {

struct Request {
    int id = 0;
    int src = 0;
    int dst = 0;
    int demand = 1;       // slots (or wavelengths)
    double arrival = 0;   // dynamic mode only
    double holding = 0;   // dynamic mode only
};

enum class EndpointPattern { Uniform, DegreeProportional, Explicit };

struct TrafficSpec {
    EndpointPattern pattern = EndpointPattern::Uniform;
    std::vector<double> node_probs;          // Explicit pattern
    std::vector<int> sizes = {1};            // b_j
    std::vector<double> size_probs = {1.0};  // rho_j
    double arrival_rate = 1.0;               // lambda; mean holding is 1
    double mean_holding = 1.0;

    void validate(int node_count) const {
        double s = 0;
        for (double p : size_probs) s += p;
        if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("size probs must sum to 1");
        if (sizes.size() != size_probs.size()) throw std::invalid_argument("size/prob length mismatch");
        if (arrival_rate <= 0) throw std::invalid_argument("arrival rate must be positive");
        if (pattern == EndpointPattern::Explicit) {
            if ((int)node_probs.size() != node_count)
                throw std::invalid_argument("node prob length mismatch");
            double u = 0;
            for (double p : node_probs) u += p;
            if (std::abs(u - 1.0) > 1e-12) throw std::invalid_argument("node probs must sum to 1");
        }
    }
};

inline std::vector<double> endpoint_weights(const TrafficSpec& spec, const Topology& topo) {
    std::vector<double> w(topo.node_count, 1.0);
    if (spec.pattern == EndpointPattern::DegreeProportional) {
        for (int v = 0; v < topo.node_count; ++v) w[v] = (double)topo.degree(v);
    } else if (spec.pattern == EndpointPattern::Explicit) {
        w = spec.node_probs;
    }
    return w;
}

// Deterministic per (spec, count, seed). With dynamic=false the time fields
// stay zero (static demand set).
inline std::vector<Request> generate_requests(const TrafficSpec& spec, const Topology& topo,
                                              int count, uint64_t seed, bool dynamic = false) {
    spec.validate(topo.node_count);
    Rng rng(seed, /*stream=*/7);
    std::vector<double> w = endpoint_weights(spec, topo);
    std::vector<Request> out;
    out.reserve(count);
    double t = 0;
    for (int i = 0; i < count; ++i) {
        Request r;
        r.id = i;
        r.src = rng.discrete(w);
        do { r.dst = rng.discrete(w); } while (r.dst == r.src);
        r.demand = spec.sizes[rng.discrete(spec.size_probs)];
        if (dynamic) {
            t += rng.exponential(1.0 / spec.arrival_rate);
            r.arrival = t;
            r.holding = rng.exponential(spec.mean_holding);
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace mgon

#endif
