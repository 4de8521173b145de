#ifndef MGON_OXC_HPP
#define MGON_OXC_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mgon/edge_coloring.hpp"
#include "mgon/rng.hpp"

namespace mgon {

enum class NodeArch { Conv, Hier, FlexBand };

// A D-degree node with F parallel fibers per link and W wavelengths per
// fiber. N = D*F input (= output) fibers in total.
struct NodeSpec {
    NodeArch arch = NodeArch::Conv;
    int D = 1;
    int F = 1;
    int W = 1;
    int k = 1;  // Hier grouping factor
    int B = 4;  // FlexBand bands per input fiber
    int N() const { return D * F; }
    int link_capacity() const { return W * F; }
};

// Q[f][d]: requests from input fiber f to output link d.
struct DemandMatrix {
    std::vector<std::vector<int>> Q;
    int in_fibers() const { return (int)Q.size(); }
    int links() const { return Q.empty() ? 0 : (int)Q[0].size(); }
    int total() const {
        int t = 0;
        for (const auto& row : Q) t += std::accumulate(row.begin(), row.end(), 0);
        return t;
    }
    void validate(const NodeSpec& spec) const {
        if (in_fibers() != spec.N()) throw std::invalid_argument("demand rows != N");
        for (const auto& row : Q) {
            if ((int)row.size() != spec.D) throw std::invalid_argument("demand cols != D");
            if (std::accumulate(row.begin(), row.end(), 0) > spec.W)
                throw std::invalid_argument("input fiber oversubscribed");
        }
    }
};

inline DemandMatrix random_demand(const NodeSpec& spec, Rng& rng, double fill = 1.0) {
    DemandMatrix dm;
    dm.Q.assign(spec.N(), std::vector<int>(spec.D, 0));
    for (int f = 0; f < spec.N(); ++f) {
        int budget = (int)rng.next_below((uint64_t)(spec.W * fill) + 1);
        for (int i = 0; i < budget; ++i) ++dm.Q[f][rng.next_below(spec.D)];
    }
    return dm;
}

struct NodeRequestAssign {
    int in_fiber = 0;
    int out_link = 0;
    int out_fiber = -1;   // global output-fiber id (link*F + index), -1 if blocked
    int wavelength = -1;  // color, -1 if blocked
    bool blocked = false;
};

struct NodeAssignment {
    std::vector<NodeRequestAssign> requests;  // enumerated fiber-major
    int blocked_count() const {
        int n = 0;
        for (const auto& r : requests) n += r.blocked;
        return n;
    }
};

namespace detail {

inline std::vector<NodeRequestAssign> enumerate_requests(const DemandMatrix& dm) {
    std::vector<NodeRequestAssign> reqs;
    for (int f = 0; f < dm.in_fibers(); ++f)
        for (int d = 0; d < dm.links(); ++d)
            for (int c = 0; c < dm.Q[f][d]; ++c) reqs.push_back({f, d, -1, -1, false});
    return reqs;
}

// Wavelength assignment: color the (input fiber, output fiber) bipartite
// multigraph of unblocked requests.
inline void color_wavelengths(const NodeSpec& spec, NodeAssignment& a) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> owner;
    for (int i = 0; i < (int)a.requests.size(); ++i) {
        if (a.requests[i].blocked) continue;
        edges.push_back({a.requests[i].in_fiber, a.requests[i].out_fiber});
        owner.push_back(i);
    }
    auto colors = bipartite_edge_coloring(spec.N(), spec.N(), edges);
    for (size_t i = 0; i < owner.size(); ++i) a.requests[owner[i]].wavelength = colors[i];
}

}  // namespace detail

// Sequential output-fiber packing: per link, walk the (input fiber, link)
// groups in fiber order, filling output fibers one after another so a group
// splits at most once and at most one fiber per link is partially occupied.
// Blocking happens only once the whole link capacity W*F is exhausted.
inline NodeAssignment flex_assign(const NodeSpec& spec, const DemandMatrix& dm) {
    dm.validate(spec);
    NodeAssignment a;
    a.requests = detail::enumerate_requests(dm);
    for (int d = 0; d < spec.D; ++d) {
        int fiber = 0, used = 0;
        for (int f = 0; f < spec.N(); ++f) {
            for (auto& r : a.requests) {
                if (r.in_fiber != f || r.out_link != d) continue;
                if (fiber >= spec.F) {
                    r.blocked = true;
                    continue;
                }
                r.out_fiber = d * spec.F + fiber;
                if (++used == spec.W) {
                    ++fiber;
                    used = 0;
                }
            }
        }
    }
    detail::color_wavelengths(spec, a);
    return a;
}

// HRFS with an explicit fiber choice per (input fiber, output link) group:
// choices[f][d] in [0, F). Per-fiber overflow beyond W is blocked (latest
// request ids first survive... earliest ids are assigned, the rest blocked).
inline NodeAssignment hrfs_assign_with_choices(const NodeSpec& spec, const DemandMatrix& dm,
                                               const std::vector<std::vector<int>>& choices) {
    if (spec.k != 1) throw std::invalid_argument("HRFS requires k=1");
    dm.validate(spec);
    NodeAssignment a;
    a.requests = detail::enumerate_requests(dm);
    std::vector<int> load(spec.D * spec.F, 0);
    for (auto& r : a.requests) {
        int fiber = r.out_link * spec.F + choices[r.in_fiber][r.out_link];
        if (load[fiber] < spec.W) {
            ++load[fiber];
            r.out_fiber = fiber;
        } else {
            r.blocked = true;
        }
    }
    detail::color_wavelengths(spec, a);
    return a;
}

inline NodeAssignment hrfs_assign(const NodeSpec& spec, const DemandMatrix& dm, uint64_t seed) {
    Rng rng(seed, 31);
    std::vector<std::vector<int>> choices(spec.N(), std::vector<int>(spec.D));
    for (auto& row : choices)
        for (auto& c : row) c = (int)rng.next_below(spec.F);
    return hrfs_assign_with_choices(spec, dm, choices);
}

// HSA: per link, groups sorted by size non-increasing are placed greedily on
// the output fiber with the largest remaining capacity; a group that does
// not fit is split once to fill the fiber and its excess (highest ids) is
// blocked.
inline NodeAssignment hsa_assign(const NodeSpec& spec, const DemandMatrix& dm) {
    if (spec.k != 1) throw std::invalid_argument("HSA requires k=1");
    dm.validate(spec);
    NodeAssignment a;
    a.requests = detail::enumerate_requests(dm);
    for (int d = 0; d < spec.D; ++d) {
        std::vector<std::pair<int, int>> groups;  // (size, input fiber)
        for (int f = 0; f < spec.N(); ++f)
            if (dm.Q[f][d] > 0) groups.push_back({dm.Q[f][d], f});
        std::stable_sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        std::vector<int> remaining(spec.F, spec.W);
        for (auto [size, f] : groups) {
            int best = (int)(std::max_element(remaining.begin(), remaining.end()) -
                             remaining.begin());
            int take = std::min(size, remaining[best]);
            remaining[best] -= take;
            int placed = 0;
            for (auto& r : a.requests) {
                if (r.in_fiber != f || r.out_link != d) continue;
                if (placed < take) {
                    r.out_fiber = d * spec.F + best;
                    ++placed;
                } else {
                    r.blocked = true;  // highest ids of the group
                }
            }
        }
    }
    detail::color_wavelengths(spec, a);
    return a;
}

// With k >= 2 fibers selectable per group, the hierarchical node can mimic
// the sequential packing exactly (a group never needs more than 2 fibers).
inline NodeAssignment hier_k2_assign(const NodeSpec& spec, const DemandMatrix& dm) {
    if (spec.k < 2) throw std::invalid_argument("requires k>=2");
    NodeSpec flex = spec;
    flex.arch = NodeArch::Conv;
    return flex_assign(flex, dm);
}

// ---------------------------------------------------------------------------
// Closed-form blocking models, computed with log-domain binomials.
// ---------------------------------------------------------------------------

namespace detail {

inline double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binom_pmf(int n, int k, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

struct Kahan {
    double sum = 0, c = 0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

// Per-request blocking probability of the sequential-packing node: requests
// arrive per input channel with probability p and pick a uniform output
// link; an output link blocks its excess over capacity C = W*F.
inline double blocking_analytic_flex(const NodeSpec& spec, double p) {
    int N = spec.N(), NW = N * spec.W, C = spec.link_capacity();
    double invD = 1.0 / spec.D;
    detail::Kahan acc;
    for (int g = C + 1; g <= NW; ++g) {
        double pg = detail::binom_pmf(NW, g, p);
        if (pg == 0.0) continue;
        detail::Kahan inner;
        for (int n = C + 1; n <= g; ++n)
            inner.add((double)(n - C) / g * detail::binom_pmf(g, n, invD));
        acc.add(pg * inner.sum);
    }
    return std::min(1.0, spec.D * acc.sum);
}

// Hierarchical node with k = 1 under random fiber selection: each (input
// fiber, output link) group lands on one uniformly random output fiber.
inline double blocking_analytic_hier1(const NodeSpec& spec, double p) {
    int N = spec.N(), NW = N * spec.W, W = spec.W;
    double invF = 1.0 / spec.F, invD = 1.0 / spec.D;
    // P(R_f = e): requests landing on one output fiber
    std::vector<double> prf(NW + 1, 0.0);
    for (int m = 0; m <= N; ++m) {
        double px = detail::binom_pmf(N, m, invF);
        if (px == 0.0) continue;
        int wm = W * m;
        for (int n = 0; n <= wm; ++n) {
            double w = detail::binom_pmf(wm, n, p) * px;
            if (w < 1e-300) continue;
            for (int e = 0; e <= n; ++e) prf[e] += detail::binom_pmf(n, e, invD) * w;
        }
    }
    // prefix of (e - W) * P(R_f = e)
    std::vector<double> excess(NW + 1, 0.0);
    for (int e = 1; e <= NW; ++e)
        excess[e] = excess[e - 1] + (e > W ? (e - W) * prf[e] : 0.0);
    detail::Kahan acc;
    for (int g = W + 1; g <= NW; ++g) {
        double pg = detail::binom_pmf(NW, g, p);
        if (pg == 0.0) continue;
        acc.add(pg * excess[g] / g);
    }
    return std::min(1.0, std::max(0.0, N * acc.sum));
}

inline double blocking_analytic(const NodeSpec& spec, double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
    switch (spec.arch) {
        case NodeArch::Conv:
            return blocking_analytic_flex(spec, p);
        case NodeArch::Hier:
            if (spec.k == 1) return blocking_analytic_hier1(spec, p);
            return blocking_analytic_flex(spec, p);  // k >= 2 packs like Conv
        default:
            throw std::invalid_argument("no blocking model for this architecture");
    }
}

// Monte-Carlo estimate of the same quantity: per trial, the blocked fraction
// sum_j (excess_j)+ / total requests.
struct McResult {
    double mean = 0;
    double stderr_ = 0;
};

inline McResult blocking_mc(const NodeSpec& spec, double p, int trials, uint64_t seed) {
    int N = spec.N(), C = spec.link_capacity(), W = spec.W;
    bool hier1 = spec.arch == NodeArch::Hier && spec.k == 1;
    double sum = 0, sumsq = 0;
    Rng rng(seed, 101);
    std::vector<int> link_load(spec.D), fiber_load(spec.D * spec.F);
    for (int t = 0; t < trials; ++t) {
        std::fill(link_load.begin(), link_load.end(), 0);
        std::fill(fiber_load.begin(), fiber_load.end(), 0);
        int total = 0, blocked = 0;
        for (int f = 0; f < N; ++f) {
            if (!hier1) {
                for (int w = 0; w < W; ++w)
                    if (rng.next_double() < p) {
                        ++total;
                        ++link_load[rng.next_below(spec.D)];
                    }
            } else {
                // group the fiber's requests per output link, then pick one
                // uniformly random output fiber per group
                std::vector<int> q(spec.D, 0);
                for (int w = 0; w < W; ++w)
                    if (rng.next_double() < p) {
                        ++total;
                        ++q[rng.next_below(spec.D)];
                    }
                for (int d = 0; d < spec.D; ++d)
                    if (q[d]) fiber_load[d * spec.F + rng.next_below(spec.F)] += q[d];
            }
        }
        if (!hier1) {
            for (int d = 0; d < spec.D; ++d) blocked += std::max(0, link_load[d] - C);
        } else {
            for (int x : fiber_load) blocked += std::max(0, x - W);
        }
        double ratio = total ? (double)blocked / total : 0.0;
        sum += ratio;
        sumsq += ratio * ratio;
    }
    McResult r;
    r.mean = sum / trials;
    double var = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1));
    r.stderr_ = std::sqrt(var / trials);
    return r;
}

// ---------------------------------------------------------------------------
// Hardware cost model.
// ---------------------------------------------------------------------------

// Exact 1x4-WSS count of a cascaded 1xN WSS: units needed level by level.
inline int s_exact(int n) {
    int total = 0;
    while (n > 1) {
        n = (n + 3) / 4;
        total += n;
    }
    return total;
}

// Geometric-series approximation N/4 + N/16 + ... + 1.
inline double s_approx(int n) {
    double s = 1.0, x = n / 4.0;
    while (x > 1.0) {
        s += x;
        x /= 4.0;
    }
    return s;
}

struct CostReport {
    long long wss_units = 0;    // 1x4-equivalent WSS count
    long long wss_ports = 0;    // WSS port count (4 per unit, B per FlexBand WSS)
    long long mems_ports = 0;
    long long coupler_units = 0;
    double power_watts = 0;     // WSS port 1 W, MEMS port 0.25 W
    double capex_dollars = 0;   // WSS port $1000, MEMS port $255, coupler $195
};

inline CostReport cost_model(const NodeSpec& spec) {
    CostReport r;
    long long N = spec.N();
    switch (spec.arch) {
        case NodeArch::Conv: {
            r.wss_units = 2 * N * s_exact((int)N);
            r.wss_ports = 4 * r.wss_units;
            r.power_watts = (double)r.wss_ports;
            r.capex_dollars = 1000.0 * r.wss_ports;
            break;
        }
        case NodeArch::Hier: {
            r.wss_units = N * s_exact(spec.k * spec.D);
            r.wss_ports = 4 * r.wss_units;
            r.mems_ports = (long long)spec.k * N * N;  // k*D*N switches of F ports
            r.coupler_units = N;
            r.power_watts = (double)r.wss_ports + 0.25 * r.mems_ports;
            r.capex_dollars = 1000.0 * r.wss_ports + 255.0 * r.mems_ports + 195.0 * r.coupler_units;
            break;
        }
        case NodeArch::FlexBand: {
            r.wss_ports = 2 * N * spec.B;  // 2N 1xB WSSs
            r.wss_units = 2 * N;           // one unit per 1xB WSS
            r.mems_ports = (long long)spec.B * N * N;
            r.coupler_units = (long long)spec.B * N * N;
            r.power_watts = (double)r.wss_ports + 0.25 * r.mems_ports;
            r.capex_dollars = 1000.0 * r.wss_ports + 255.0 * r.mems_ports + 195.0 * r.coupler_units;
            break;
        }
    }
    return r;
}

}  // namespace mgon

#endif
