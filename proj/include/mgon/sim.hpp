#ifndef MGON_SIM_HPP
#define MGON_SIM_HPP

#include <chrono>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "mgon/spectrum.hpp"
#include "mgon/traffic.hpp"

namespace mgon {

struct SimMetrics {
    long long offered_count = 0;
    long long offered_bw = 0;
    long long blocked_count = 0;
    long long blocked_bw = 0;
    double demand_blocking_ratio = 0;  // blocked bw / offered bw
    std::vector<int> fiber_msu;
    double msu_max = 0;
    double msu_avg = 0;
    double wall_seconds = 0;

    void finish(const SpectrumState& state) {
        demand_blocking_ratio = offered_bw ? (double)blocked_bw / (double)offered_bw : 0.0;
        fiber_msu.resize(state.fiber_count());
        long long s = 0;
        int mx = 0;
        for (int f = 0; f < state.fiber_count(); ++f) {
            fiber_msu[f] = state.fiber_msu(f);
            s += fiber_msu[f];
            mx = std::max(mx, fiber_msu[f]);
        }
        msu_max = mx;
        msu_avg = state.fiber_count() ? (double)s / state.fiber_count() : 0;
    }
};

// A policy decides per arrival how (whether) to place the request, and may
// observe departures to maintain internal bookkeeping.
class AdmissionPolicy {
public:
    virtual ~AdmissionPolicy() = default;
    virtual std::optional<Connection> admit(const Request& req, SpectrumState& state) = 0;
    virtual void on_release(const Request& req, SpectrumState& state) {}
};

// Event loop over Poisson arrivals / exponential departures. Simultaneous
// events are broken by a monotonically increasing sequence number, so runs
// are deterministic for a fixed seed.
inline SimMetrics run_dynamic_sim(const Topology& topo, const TrafficSpec& spec,
                                  AdmissionPolicy& policy, int n_requests, int warmup,
                                  uint64_t seed, SpectrumState* state_out = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    auto requests = generate_requests(spec, topo, n_requests, seed, /*dynamic=*/true);
    SpectrumState state(topo);

    struct Event {
        double time;
        long long seq;
        bool departure;
        int req_index;
        bool operator>(const Event& o) const {
            if (time != o.time) return time > o.time;
            return seq > o.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    long long seq = 0;
    for (int i = 0; i < n_requests; ++i)
        events.push({requests[i].arrival, seq++, false, i});

    SimMetrics m;
    int event_index = 0;
    while (!events.empty()) {
        Event ev = events.top();
        events.pop();
        const Request& req = requests[ev.req_index];
        ++event_index;
        try {
            if (ev.departure) {
                state.release(req.id);
                policy.on_release(req, state);
            } else {
                bool counted = ev.req_index >= warmup;
                if (counted) {
                    ++m.offered_count;
                    m.offered_bw += req.demand;
                }
                auto conn = policy.admit(req, state);
                if (conn) {
                    state.allocate(req.id, *conn);
                    events.push({req.arrival + req.holding, seq++, true, ev.req_index});
                } else if (counted) {
                    ++m.blocked_count;
                    m.blocked_bw += req.demand;
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("policy failure at event " + std::to_string(event_index) +
                                     ": " + e.what());
        }
    }
    m.finish(state);
    if (state_out) *state_out = state;
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Mean and half-width of a 95% confidence interval (normal approximation).
struct MeanCi {
    double mean = 0;
    double ci95 = 0;
};

inline MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi r;
    if (xs.empty()) return r;
    double s = 0;
    for (double x : xs) s += x;
    r.mean = s / xs.size();
    if (xs.size() < 2) return r;
    double var = 0;
    for (double x : xs) var += (x - r.mean) * (x - r.mean);
    var /= (xs.size() - 1);
    r.ci95 = 1.96 * std::sqrt(var / xs.size());
    return r;
}

}  // namespace mgon

#endif
