#ifndef MGON_RFBSA_HPP
#define MGON_RFBSA_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "mgon/spectrum.hpp"
#include "mgon/traffic.hpp"

namespace mgon {

// Cost-function variant for the layered-graph search.
//   StaticGlobal  : whole-network search, window-end spectrum cost
//   StaticPath    : search restricted to precomputed paths, normalized costs
//   DynamicCompact: fixed spectrum, compaction-oriented costs
enum class CostVariant { StaticGlobal, StaticPath, DynamicCompact };

struct RfbsaParams {
    double alpha = 1.0;  // switching-cost weight
    double beta = 1.0;   // spectrum-cost weight
    double omega = 352;  // estimated upper bound on max spectrum usage
    int band_limit = 4;  // max distinct bands per input fiber at a banding node
    CostVariant variant = CostVariant::StaticGlobal;
    // per-node flag: true = banding node (limited switch), false = full switch;
    // empty means every node is a banding node
    std::vector<char> flex_node;

    bool is_flex(int v) const { return flex_node.empty() || flex_node[v]; }
};

struct Lightpath {
    long long request_id = 0;
    std::vector<int> fibers;  // global fiber ids in hop order
    SlotRange range;
    double total_cost = 0;
};

constexpr double kInfCost = std::numeric_limits<double>::infinity();

// Cost of switching from input fiber f_in to output fiber f_out at a node:
// free through a full switch or an already-established band, proportional to
// the fiber's current band count when a new band must be opened, infinite
// once the per-input-fiber band limit is reached.
inline double switching_cost(const SpectrumState& state, const RfbsaParams& params, int node,
                             int f_in, int f_out) {
    if (!params.is_flex(node)) return 0.0;
    if (state.band_established(node, f_in, f_out)) return 0.0;
    int b = state.bands_from(node, f_in);
    if (b >= params.band_limit) return kInfCost;
    if (params.variant == CostVariant::StaticGlobal) return params.alpha * b;
    return params.alpha * b / params.band_limit;
}

// Cost of occupying `window` on one fiber. `is_source` marks the anchored
// outgoing fiber of the search (only the compaction variant treats it
// specially).
inline double spectrum_cost(const SpectrumState& state, const RfbsaParams& params, int fiber,
                            SlotRange window, bool is_source) {
    if (!state.is_free(fiber, window)) return kInfCost;
    int m = state.fiber_msu(fiber);
    int end = window.end();  // == highest 1-based slot index of the window
    switch (params.variant) {
        case CostVariant::StaticGlobal:
            return end <= m ? 1.0 : (double)end;
        case CostVariant::StaticPath:
            return end <= m ? 1.0 : (end - m) / params.omega + 1.0;
        case CostVariant::DynamicCompact:
            return is_source ? (double)(window.start + 1) : 1.0;
    }
    return kInfCost;
}

// Recompute the total cost of a committed fiber sequence at a given start
// slot: summed switching costs at intermediate nodes plus beta-weighted
// spectrum costs of every fiber. Used for cost audits and for pricing
// alternatives the early-stopping search never generates.
inline double evaluate_fiber_path(const SpectrumState& state, const RfbsaParams& params,
                                  const std::vector<int>& fibers, SlotRange window) {
    const Topology& topo = state.topology();
    double total = 0;
    for (size_t i = 0; i < fibers.size(); ++i) {
        total += params.beta * spectrum_cost(state, params, fibers[i], window, i == 0);
        if (i + 1 < fibers.size()) {
            int node = topo.links[state.fiber_link(fibers[i])].dst;
            total += switching_cost(state, params, node, fibers[i], fibers[i + 1]);
        }
    }
    return total;
}

namespace detail {

struct Candidate {
    double cost = kInfCost;
    int kappa = -1;
    int si = -1;
    std::vector<int> fibers;

    bool better_than(const Candidate& o) const {
        if (cost != o.cost) return cost < o.cost;
        if (kappa != o.kappa) return kappa < o.kappa;
        if (si != o.si) return si < o.si;
        return fibers < o.fibers;
    }
};

// Shortest path by summed edge cost from the anchored fiber `kappa` to any
// fiber entering `dst`, within one slot window. `allowed_links` (optional)
// restricts the search to a subset of links. Ties in cost resolve to the
// lexicographically smallest fiber sequence.
inline Candidate window_search(const SpectrumState& state, const RfbsaParams& params, int kappa,
                               SlotRange window, int dst,
                               const std::vector<char>* allowed_links) {
    const Topology& topo = state.topology();
    double src_cost = params.beta * spectrum_cost(state, params, kappa, window, true);
    Candidate result;
    if (src_cost == kInfCost) return result;

    struct Item {
        double cost;
        std::vector<int> path;
        bool operator>(const Item& o) const {
            if (cost != o.cost) return cost > o.cost;
            return path > o.path;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    std::vector<char> settled(state.fiber_count(), 0);
    pq.push({src_cost, {kappa}});
    while (!pq.empty()) {
        Item it = pq.top();
        pq.pop();
        int f = it.path.back();
        if (settled[f]) continue;
        settled[f] = 1;
        int node = topo.links[state.fiber_link(f)].dst;
        if (node == dst) {
            result.cost = it.cost;
            result.fibers = std::move(it.path);
            result.si = window.start;
            result.kappa = kappa;
            return result;
        }
        for (int l : topo.out_links[node]) {
            if (allowed_links && !(*allowed_links)[l]) continue;
            for (int g = state.fiber_base(l); g < state.fiber_base(l) + state.link_fibers(l);
                 ++g) {
                if (settled[g]) continue;
                double sw = switching_cost(state, params, node, f, g);
                double sp = spectrum_cost(state, params, g, window, false);
                if (sw == kInfCost || sp == kInfCost) continue;
                Item next{it.cost + sw + params.beta * sp, it.path};
                next.path.push_back(g);
                pq.push(std::move(next));
            }
        }
    }
    return result;
}

// Candidate of one auxiliary graph: scan free windows on the anchored fiber
// in ascending start order and keep the first one that yields a finite-cost
// path (the search then stops for this graph).
inline Candidate aux_graph_candidate(const SpectrumState& state, const RfbsaParams& params,
                                     int kappa, int width, int dst,
                                     const std::vector<char>* allowed_links) {
    // Switching feasibility is window-independent, so a graph whose anchored
    // fiber cannot reach the destination through finite switching edges can
    // be skipped without scanning any windows.
    {
        const Topology& topo = state.topology();
        std::vector<char> seen(state.fiber_count(), 0);
        std::vector<int> stack{kappa};
        seen[kappa] = 1;
        bool reachable = false;
        while (!stack.empty() && !reachable) {
            int f = stack.back();
            stack.pop_back();
            int node = topo.links[state.fiber_link(f)].dst;
            if (node == dst) {
                reachable = true;
                break;
            }
            for (int l : topo.out_links[node]) {
                if (allowed_links && !(*allowed_links)[l]) continue;
                for (int g = state.fiber_base(l);
                     g < state.fiber_base(l) + state.link_fibers(l); ++g)
                    if (!seen[g] && switching_cost(state, params, node, f, g) < kInfCost) {
                        seen[g] = 1;
                        stack.push_back(g);
                    }
            }
        }
        if (!reachable) return {};
    }
    auto mask = state.free_window_mask(kappa, width);
    for (size_t wd = 0; wd < mask.size(); ++wd) {
        uint64_t bits = mask[wd];
        while (bits) {
            int s = (int)(wd * 64) + __builtin_ctzll(bits);
            bits &= bits - 1;
            Candidate c = window_search(state, params, kappa, {s, width}, dst, allowed_links);
            if (c.cost < kInfCost) return c;
        }
    }
    return {};
}

inline Connection to_connection(const SpectrumState& state, const RfbsaParams& params,
                                const std::vector<int>& fibers, SlotRange window) {
    const Topology& topo = state.topology();
    Connection conn;
    for (int f : fibers) conn.slices.push_back({f, window});
    for (size_t i = 0; i + 1 < fibers.size(); ++i) {
        int node = topo.links[state.fiber_link(fibers[i])].dst;
        if (params.is_flex(node)) conn.bands.push_back({node, fibers[i], fibers[i + 1]});
    }
    return conn;
}

}  // namespace detail

// Joint routing / fiber / band / spectrum search. One auxiliary graph per
// outgoing fiber of the source (per first-hop fiber of each precomputed path
// when `paths` is non-empty); each graph contributes at most one candidate;
// the cheapest candidate wins. Commits the allocation and returns the
// lightpath, or nullopt when every graph is exhausted.
inline std::optional<Lightpath> rfbsa_route(const Request& req, SpectrumState& state,
                                            const RfbsaParams& params,
                                            const std::vector<std::vector<int>>& paths = {}) {
    const Topology& topo = state.topology();
    detail::Candidate best;
    if (paths.empty()) {
        for (int l : topo.out_links[req.src])
            for (int k = state.fiber_base(l); k < state.fiber_base(l) + state.link_fibers(l);
                 ++k) {
                detail::Candidate c =
                    detail::aux_graph_candidate(state, params, k, req.demand, req.dst, nullptr);
                if (c.better_than(best)) best = c;
            }
    } else {
        for (const auto& path : paths) {
            std::vector<char> allowed(topo.links.size(), 0);
            for (int l : topo.path_links(path)) allowed[l] = 1;
            int first = topo.path_links(path).front();
            for (int k = state.fiber_base(first);
                 k < state.fiber_base(first) + state.link_fibers(first); ++k) {
                detail::Candidate c =
                    detail::aux_graph_candidate(state, params, k, req.demand, req.dst, &allowed);
                if (c.better_than(best)) best = c;
            }
        }
    }
    if (best.cost == kInfCost) return std::nullopt;
    SlotRange window{best.si, req.demand};
    state.allocate(req.id, detail::to_connection(state, params, best.fibers, window));
    return Lightpath{req.id, best.fibers, window, best.cost};
}

// Shortest-path first-fit baseline over K precomputed node paths. A window is
// preferred when it does not raise the current network-wide max spectrum
// usage; paths are tried in order and the first path offering such a window
// wins. If no path has one, the candidate with the lowest window end across
// all paths is used. Fibers are chosen as the lexicographically smallest
// feasible chain (free window, switching feasible at banding nodes).
inline std::optional<Lightpath> spff_route(const Request& req, SpectrumState& state,
                                           const RfbsaParams& params,
                                           const std::vector<std::vector<int>>& paths) {
    const Topology& topo = state.topology();
    int width = req.demand;
    int msu_now = state.max_msu();

    auto chain_at = [&](const std::vector<int>& links, int s) -> std::vector<int> {
        SlotRange window{s, width};
        size_t h = links.size();
        // backward reachability: fiber can extend to the path end
        std::vector<std::vector<char>> ok(h);
        for (size_t i = h; i-- > 0;) {
            int l = links[i];
            ok[i].assign(state.link_fibers(l), 0);
            for (int j = 0; j < state.link_fibers(l); ++j) {
                int f = state.fiber_base(l) + j;
                if (!state.is_free(f, window)) continue;
                if (i + 1 == h) {
                    ok[i][j] = 1;
                    continue;
                }
                int node = topo.links[l].dst;
                for (int j2 = 0; j2 < state.link_fibers(links[i + 1]); ++j2) {
                    int g = state.fiber_base(links[i + 1]) + j2;
                    if (ok[i + 1][j2] &&
                        switching_cost(state, params, node, f, g) < kInfCost) {
                        ok[i][j] = 1;
                        break;
                    }
                }
            }
        }
        // forward greedy: lowest feasible fiber at each hop
        std::vector<int> chain;
        for (size_t i = 0; i < h; ++i) {
            int chosen = -1;
            for (int j = 0; j < state.link_fibers(links[i]); ++j) {
                if (!ok[i][j]) continue;
                int f = state.fiber_base(links[i]) + j;
                if (!chain.empty()) {
                    int node = topo.links[links[i - 1]].dst;
                    if (switching_cost(state, params, node, chain.back(), f) == kInfCost)
                        continue;
                }
                chosen = f;
                break;
            }
            if (chosen < 0) return {};
            chain.push_back(chosen);
        }
        return chain;
    };

    struct Fallback {
        int end = std::numeric_limits<int>::max();
        int s = -1;
        std::vector<int> links;
    } fallback;

    for (const auto& path : paths) {
        std::vector<int> links = topo.path_links(path);
        for (int s = 0; s + width <= state.capacity(); ++s) {
            std::vector<int> chain = chain_at(links, s);
            if (chain.empty()) continue;
            if (s + width <= msu_now) {
                SlotRange window{s, width};
                state.allocate(req.id, detail::to_connection(state, params, chain, window));
                return Lightpath{req.id, chain, window, 0.0};
            }
            if (s + width < fallback.end) fallback = {s + width, s, links};
            break;  // higher starts on this path only end higher
        }
    }
    if (fallback.s < 0) return std::nullopt;
    std::vector<int> chain = chain_at(fallback.links, fallback.s);
    SlotRange window{fallback.s, width};
    state.allocate(req.id, detail::to_connection(state, params, chain, window));
    return Lightpath{req.id, chain, window, 0.0};
}

struct MsuMetrics {
    int max = 0;
    double avg = 0;
    std::vector<int> per_fiber;
};

inline MsuMetrics msu_metrics(const SpectrumState& state) {
    MsuMetrics m;
    m.per_fiber.resize(state.fiber_count());
    long long sum = 0;
    for (int f = 0; f < state.fiber_count(); ++f) {
        m.per_fiber[f] = state.fiber_msu(f);
        m.max = std::max(m.max, m.per_fiber[f]);
        sum += m.per_fiber[f];
    }
    m.avg = state.fiber_count() ? (double)sum / state.fiber_count() : 0.0;
    return m;
}

// Independent check of a committed lightpath: endpoint correctness, hop
// continuity, allocated slots, and the per-input-fiber band limit at every
// banding node it traverses. Returns human-readable issues (empty = clean).
inline std::vector<std::string> validate_lightpath(const SpectrumState& state,
                                                   const RfbsaParams& params, const Request& req,
                                                   const Lightpath& lp) {
    const Topology& topo = state.topology();
    std::vector<std::string> issues;
    if (lp.fibers.empty()) {
        issues.push_back("empty fiber sequence");
        return issues;
    }
    if (lp.range.len != req.demand) issues.push_back("slot range width != demand");
    if (topo.links[state.fiber_link(lp.fibers.front())].src != req.src)
        issues.push_back("first fiber does not leave the source");
    if (topo.links[state.fiber_link(lp.fibers.back())].dst != req.dst)
        issues.push_back("last fiber does not enter the destination");
    for (size_t i = 0; i + 1 < lp.fibers.size(); ++i) {
        int node = topo.links[state.fiber_link(lp.fibers[i])].dst;
        if (topo.links[state.fiber_link(lp.fibers[i + 1])].src != node)
            issues.push_back("fiber sequence breaks at hop " + std::to_string(i));
        if (params.is_flex(node) && state.bands_from(node, lp.fibers[i]) > params.band_limit)
            issues.push_back("band limit exceeded at node " + std::to_string(node));
        if (params.is_flex(node) &&
            !state.band_established(node, lp.fibers[i], lp.fibers[i + 1]))
            issues.push_back("band missing at node " + std::to_string(node));
    }
    for (int f : lp.fibers)
        for (int s = lp.range.start; s < lp.range.end(); ++s)
            if (!state.slot_used(f, s)) {
                issues.push_back("slot " + std::to_string(s) + " not allocated on fiber " +
                                 std::to_string(f));
                break;
            }
    return issues;
}

// Exhaustive minimal achievable max spectrum usage for a tiny request set:
// depth-first over every (simple route, fiber chain, start slot) assignment
// per request, honoring the band limit, pruned by the best usage found.
// Feasible only for toy instances.
inline int oracle_min_msu(const Topology& topo, const std::vector<Request>& reqs,
                          const RfbsaParams& params, int capacity) {
    SpectrumState state(topo, capacity);
    int best = capacity + 1;

    // enumerate simple node paths src->dst
    auto paths_between = [&](int src, int dst) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur{src};
        std::vector<char> used(topo.node_count, 0);
        used[src] = 1;
        auto dfs = [&](auto&& self, int v) -> void {
            if (v == dst) {
                out.push_back(cur);
                return;
            }
            for (int l : topo.out_links[v]) {
                int u = topo.links[l].dst;
                if (used[u]) continue;
                used[u] = 1;
                cur.push_back(u);
                self(self, u);
                cur.pop_back();
                used[u] = 0;
            }
        };
        dfs(dfs, src);
        return out;
    };

    auto place = [&](auto&& self, size_t idx) -> void {
        if (state.max_msu() >= best) return;
        if (idx == reqs.size()) {
            best = std::min(best, state.max_msu());
            return;
        }
        const Request& r = reqs[idx];
        for (const auto& path : paths_between(r.src, r.dst)) {
            std::vector<int> links = topo.path_links(path);
            // enumerate fiber chains
            std::vector<int> chain;
            auto fibers = [&](auto&& fe, size_t hop) -> void {
                if (hop == links.size()) {
                    for (int s = 0; s + r.demand <= capacity; ++s) {
                        SlotRange w{s, r.demand};
                        bool free = true;
                        for (int f : chain) free = free && state.is_free(f, w);
                        if (!free) continue;
                        bool band_ok = true;
                        for (size_t i = 0; i + 1 < chain.size(); ++i) {
                            int node = topo.links[state.fiber_link(chain[i])].dst;
                            if (switching_cost(state, params, node, chain[i], chain[i + 1]) ==
                                kInfCost)
                                band_ok = false;
                        }
                        if (!band_ok) break;
                        state.allocate(r.id, detail::to_connection(state, params, chain, w));
                        self(self, idx + 1);
                        state.release(r.id);
                    }
                    return;
                }
                for (int j = 0; j < state.link_fibers(links[hop]); ++j) {
                    chain.push_back(state.fiber_base(links[hop]) + j);
                    fe(fe, hop + 1);
                    chain.pop_back();
                }
            };
            fibers(fibers, 0);
        }
    };
    place(place, 0);
    return best;
}

}  // namespace mgon

#endif
