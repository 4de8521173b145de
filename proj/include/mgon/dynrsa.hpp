#ifndef MGON_DYNRSA_HPP
#define MGON_DYNRSA_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "mgon/rng.hpp"
#include "mgon/sim.hpp"
#include "mgon/simplex.hpp"
#include "mgon/spectrum.hpp"

namespace mgon {

// ---------------------------------------------------------------- path LP --

struct RouteSpec {
    int src = 0;
    int dst = 0;
    double load = 1.0;                            // W_r
    std::vector<std::vector<int>> candidates;     // node paths
};

struct PathTable {
    struct Entry {
        int src = 0;
        int dst = 0;
        std::vector<std::vector<int>> paths;  // node paths
        std::vector<double> probs;
    };
    std::vector<Entry> entries;
    double objective = 0;

    const Entry* find(int src, int dst) const {
        for (const auto& e : entries)
            if ((e.src == src && e.dst == dst) || (e.src == dst && e.dst == src)) return &e;
        return nullptr;
    }
    int sample(const Entry& e, Rng& rng) const {
        double u = rng.next_double(), acc = 0;
        for (size_t k = 0; k < e.probs.size(); ++k) {
            acc += e.probs[k];
            if (u < acc) return (int)k;
        }
        return (int)e.probs.size() - 1;
    }
};

namespace detail {
// undirected link id: the lower of the two directed ids joining the pair
inline int undirected_id(const Topology& topo, int link) {
    int rev = topo.link_between(topo.links[link].dst, topo.links[link].src);
    return rev >= 0 ? std::min(link, rev) : link;
}
}  // namespace detail

// Offline selection probabilities: minimize mean plus maximum per-fiber load
// over undirected links, subject to each route's probabilities summing to 1.
inline PathTable solve_path_lp(const Topology& topo, const std::vector<RouteSpec>& routes) {
    // map undirected links to dense indices
    std::vector<int> uid(topo.links.size());
    std::vector<int> rep;  // representative directed id per undirected index
    for (size_t l = 0; l < topo.links.size(); ++l) {
        uid[l] = detail::undirected_id(topo, (int)l);
        if (uid[l] == (int)l) rep.push_back((int)l);
    }
    int L = (int)rep.size();
    std::vector<int> dense(topo.links.size(), -1);
    for (int i = 0; i < L; ++i) dense[rep[i]] = i;

    int nvars = 1;  // variable 0 = max-load bound t
    std::vector<std::pair<int, int>> var_of;  // (route, candidate)
    for (size_t r = 0; r < routes.size(); ++r) {
        if (routes[r].candidates.empty())
            throw std::invalid_argument("route without candidate paths");
        for (size_t k = 0; k < routes[r].candidates.size(); ++k) var_of.push_back({(int)r, (int)k});
    }
    nvars += (int)var_of.size();

    auto links_of = [&](const std::vector<int>& path) {
        std::vector<int> ids;
        for (int l : topo.path_links(path)) ids.push_back(dense[uid[l]]);
        return ids;
    };

    std::vector<double> c(nvars, 0.0);
    c[0] = 1.0;
    std::vector<std::vector<double>> a_ub(L, std::vector<double>(nvars, 0.0));
    std::vector<double> b_ub(L, 0.0);
    for (int e = 0; e < L; ++e) a_ub[e][0] = -1.0;  // load_e / F_e - t <= 0
    std::vector<std::vector<double>> a_eq(routes.size(), std::vector<double>(nvars, 0.0));
    std::vector<double> b_eq(routes.size(), 1.0);

    for (size_t v = 0; v < var_of.size(); ++v) {
        auto [r, k] = var_of[v];
        a_eq[r][v + 1] = 1.0;
        for (int e : links_of(routes[r].candidates[k])) {
            double w = routes[r].load / topo.links[rep[e]].fiber_count;
            a_ub[e][v + 1] += w;
            c[v + 1] += w / L;
        }
    }

    LpResult lp = SimplexSolver().solve(c, a_ub, b_ub, a_eq, b_eq);
    if (!lp.optimal) throw std::runtime_error("path selection LP infeasible");

    PathTable table;
    table.objective = lp.objective;
    size_t v = 0;
    for (const auto& r : routes) {
        PathTable::Entry e;
        e.src = r.src;
        e.dst = r.dst;
        e.paths = r.candidates;
        for (size_t k = 0; k < r.candidates.size(); ++k)
            e.probs.push_back(std::max(0.0, lp.x[1 + v++]));
        table.entries.push_back(std::move(e));
    }
    return table;
}

// Convenience: K-shortest-path candidates for every unordered node pair,
// uniform load.
inline std::vector<RouteSpec> all_pair_routes(const Topology& topo, int k) {
    std::vector<RouteSpec> routes;
    for (int s = 0; s < topo.node_count; ++s)
        for (int d = s + 1; d < topo.node_count; ++d) {
            RouteSpec r;
            r.src = s;
            r.dst = d;
            r.candidates = topo.k_shortest_paths(s, d, k);
            routes.push_back(std::move(r));
        }
    return routes;
}

// ------------------------------------------------------------- partitions --

struct PartitionPlan {
    struct Segment {
        int size_b = 0;  // request size served by this segment
        int start = 0;
        int length = 0;  // multiple of size_b
        int bins() const { return size_b ? length / size_b : 0; }
    };
    std::vector<Segment> segments;
    int spectrum = 0;
    bool too_small = false;  // some segment ended up empty

    const Segment* segment_for(int b) const {
        for (const auto& s : segments)
            if (s.size_b == b) return &s;
        return nullptr;
    }
    int assigned() const {
        int t = 0;
        for (const auto& s : segments) t += s.length;
        return t;
    }
};

// Proportional spectrum split into per-size segments: floor each share to a
// bin multiple, then grant one extra bin per size in descending
// fractional-remainder order where it still fits. Leftover slots stay
// unassigned.
inline PartitionPlan plan_partitions(int spectrum, const std::vector<int>& sizes,
                                     const std::vector<double>& probs) {
    if (sizes.size() != probs.size()) throw std::invalid_argument("sizes/probs length mismatch");
    double denom = 0;
    for (size_t j = 0; j < sizes.size(); ++j) denom += probs[j] * sizes[j];
    if (denom <= 0) throw std::invalid_argument("degenerate size distribution");

    size_t m = sizes.size();
    std::vector<int> bins(m);
    std::vector<double> frac(m);
    int used = 0;
    for (size_t j = 0; j < m; ++j) {
        double raw_bins = spectrum * probs[j] / denom;  // raw_j / b_j
        bins[j] = (int)std::floor(raw_bins);
        frac[j] = raw_bins - bins[j];
        used += bins[j] * sizes[j];
    }
    std::vector<size_t> order(m);
    for (size_t j = 0; j < m; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return frac[a] > frac[b]; });
    for (size_t j : order)
        if (used + sizes[j] <= spectrum) {
            ++bins[j];
            used += sizes[j];
        }

    PartitionPlan plan;
    plan.spectrum = spectrum;
    int at = 0;
    for (size_t j = 0; j < m; ++j) {
        PartitionPlan::Segment s;
        s.size_b = sizes[j];
        s.start = at;
        s.length = bins[j] * sizes[j];
        at += s.length;
        if (s.length == 0) plan.too_small = true;
        plan.segments.push_back(s);
    }
    return plan;
}

// --------------------------------------------------------- conflict graph --

struct ConflictGraph {
    struct Vertex {
        int entry = 0;  // index into PathTable::entries
        int k = 0;
        double prob = 0;
        std::vector<int> links;  // directed link ids, sorted
    };
    std::vector<Vertex> vertices;
    std::vector<std::vector<int>> adj;
    std::map<std::pair<int, int>, int> index;  // (entry, k) -> vertex

    static ConflictGraph build(const Topology& topo, const PathTable& table) {
        ConflictGraph g;
        for (size_t e = 0; e < table.entries.size(); ++e)
            for (size_t k = 0; k < table.entries[e].paths.size(); ++k) {
                Vertex v;
                v.entry = (int)e;
                v.k = (int)k;
                v.prob = table.entries[e].probs.empty() ? 0 : table.entries[e].probs[k];
                v.links = topo.path_links(table.entries[e].paths[k]);
                std::sort(v.links.begin(), v.links.end());
                g.index[{(int)e, (int)k}] = (int)g.vertices.size();
                g.vertices.push_back(std::move(v));
            }
        g.adj.resize(g.vertices.size());
        for (size_t a = 0; a < g.vertices.size(); ++a)
            for (size_t b = a + 1; b < g.vertices.size(); ++b) {
                const auto& la = g.vertices[a].links;
                const auto& lb = g.vertices[b].links;
                bool share = false;
                for (size_t i = 0, j = 0; i < la.size() && j < lb.size();) {
                    if (la[i] == lb[j]) {
                        share = true;
                        break;
                    }
                    la[i] < lb[j] ? ++i : ++j;
                }
                if (share) {
                    g.adj[a].push_back((int)b);
                    g.adj[b].push_back((int)a);
                }
            }
        return g;
    }
};

// Total capacity loss over routes conflicting with vertex `kv` if the window
// `range` is committed along it: a conflicting path loses its selection
// probability when a link it shares with `kv` attains that path's minimum
// per-link free-fiber count on the window.
inline double capacity_loss(const SpectrumState& state, const ConflictGraph& graph, int kv,
                            SlotRange range) {
    const auto& kappa = graph.vertices[kv];
    double zeta = 0;
    for (int other : graph.adj[kv]) {
        const auto& v = graph.vertices[other];
        if (v.prob == 0) continue;
        int minc = std::numeric_limits<int>::max();
        for (int l : v.links) minc = std::min(minc, state.availability(l, range));
        bool shared_attains = false;
        for (int l : v.links) {
            if (state.availability(l, range) != minc) continue;
            if (std::binary_search(kappa.links.begin(), kappa.links.end(), l)) {
                shared_attains = true;
                break;
            }
        }
        if (shared_attains) zeta += v.prob;
    }
    return zeta;
}

// Same quantity computed through a memoized per-link availability table (one
// spectrum scan per link instead of one per appearance). Must agree exactly
// with capacity_loss; kept separate so the two can cross-check each other.
inline double capacity_loss_cached(const SpectrumState& state, const ConflictGraph& graph,
                                   int kv, SlotRange range, std::map<int, int>& avail) {
    auto c = [&](int link) {
        auto it = avail.find(link);
        if (it == avail.end()) it = avail.emplace(link, state.availability(link, range)).first;
        return it->second;
    };
    const auto& kappa = graph.vertices[kv];
    double zeta = 0;
    for (int other : graph.adj[kv]) {
        const auto& v = graph.vertices[other];
        if (v.prob == 0) continue;
        int minc = std::numeric_limits<int>::max();
        for (int l : v.links) minc = std::min(minc, c(l));
        for (int l : v.links)
            if (c(l) == minc &&
                std::binary_search(kappa.links.begin(), kappa.links.end(), l)) {
                zeta += v.prob;
                break;
            }
    }
    return zeta;
}

// ------------------------------------------------------- admission engine --

enum class RsaPolicyKind { Nsa, NsaShared, Random, FirstFit, Flf, Mk };
enum class RoutingMode { Mps, Ssp };

// Dynamic admission over a multi-fiber spectrum: next-state-aware bin choice
// with optional cross-partition sharing, plus the Random / FirstFit /
// odd-even-segment (Flf) / dedicated-partition (Mk) baselines.
class DynRsaPolicy : public AdmissionPolicy {
public:
    DynRsaPolicy(const Topology& topo, RsaPolicyKind kind, RoutingMode routing, PathTable table,
                 PartitionPlan plan, uint64_t seed)
        : topo_(&topo),
          kind_(kind),
          routing_(routing),
          table_(std::move(table)),
          plan_(std::move(plan)),
          rng_(seed, 23) {
        graph_ = ConflictGraph::build(topo, table_);
        for (const auto& seg : plan_.segments)
            for (int i = 0; i < seg.bins(); ++i)
                bins_.push_back({seg.size_b, {seg.start + i * seg.size_b, seg.size_b}});
    }

    struct Decision {
        bool blocked = true;
        bool shared = false;
        std::vector<int> links;
        int start = -1;
    };
    const Decision& last() const { return last_; }

    std::optional<Connection> admit(const Request& req, SpectrumState& state) override {
        std::vector<int> path = pick_path(req);
        last_ = {};
        last_.links = topo_->path_links(path);
        std::optional<Connection> conn;
        switch (kind_) {
            case RsaPolicyKind::Nsa:
                conn = nsa(req, state, false);
                break;
            case RsaPolicyKind::NsaShared:
                conn = nsa(req, state, true);
                break;
            case RsaPolicyKind::Random:
            case RsaPolicyKind::FirstFit:
                conn = plain(req, state, last_.links, kind_ == RsaPolicyKind::Random);
                break;
            case RsaPolicyKind::Flf:
                conn = flf(req, state, last_.links);
                break;
            case RsaPolicyKind::Mk:
                conn = mk(req, state, last_.links);
                break;
        }
        if (conn) {
            last_.blocked = false;
            last_.start = conn->slices.front().range.start;
            live_[req.id] = conn->slices;
        }
        return conn;
    }

    void on_release(const Request& req, SpectrumState& state) override {
        auto it = live_.find(req.id);
        if (it == live_.end()) return;
        for (const auto& sl : it->second)
            for (size_t x = 0; x < bins_.size(); ++x) {
                if (!overlaps(bins_[x].range, sl.range)) continue;
                if (flagged(sl.fiber, (int)x) && state.is_free(sl.fiber, bins_[x].range))
                    set_flag(sl.fiber, (int)x, false);
            }
        live_.erase(it);
    }

    // --- introspection for tests ---
    bool bin_flagged(int fiber, int bin) const { return flagged(fiber, bin); }
    int bin_count() const { return (int)bins_.size(); }
    SlotRange bin_range(int x) const { return bins_[x].range; }
    const ConflictGraph& graph() const { return graph_; }
    const PathTable& table() const { return table_; }

    // Loss of a candidate sharing window for a conflict-graph vertex:
    // overlapped bins contribute their per-bin loss unless flagged on some
    // fiber of the vertex's links.
    double shared_window_loss(const SpectrumState& state, int vertex, SlotRange w) const {
        const auto& links = graph_.vertices[vertex].links;
        double z = 0;
        for (size_t x = 0; x < bins_.size(); ++x) {
            if (!overlaps(bins_[x].range, w)) continue;
            bool fl = false;
            for (int l : links) {
                for (int f = state.fiber_base(l);
                     f < state.fiber_base(l) + state.link_fibers(l) && !fl; ++f)
                    fl = flagged(f, (int)x);
                if (fl) break;
            }
            if (!fl) z += capacity_loss(state, graph_, vertex, bins_[x].range);
        }
        return z;
    }

    // Per-bin losses for the native segment of size b along a table path;
    // infinity marks bins unusable for that path.
    std::vector<double> native_losses(const SpectrumState& state, int vertex, int b) const {
        std::vector<double> out;
        for (const auto& bin : bins_) {
            if (bin.size_b != b) continue;
            bool ok = true;
            for (int l : graph_.vertices[vertex].links)
                ok = ok && state.availability(l, bin.range) >= 1;
            out.push_back(ok ? capacity_loss(state, graph_, vertex, bin.range)
                             : std::numeric_limits<double>::infinity());
        }
        return out;
    }

private:
    struct BinRec {
        int size_b;
        SlotRange range;
    };

    static bool overlaps(SlotRange a, SlotRange b) {
        return a.start < b.end() && b.start < a.end();
    }

    bool flagged(int fiber, int bin) const {
        auto it = flags_.find(fiber);
        return it != flags_.end() && it->second.count(bin);
    }
    void set_flag(int fiber, int bin, bool on) {
        if (on)
            flags_[fiber].insert(bin);
        else {
            auto it = flags_.find(fiber);
            if (it != flags_.end()) it->second.erase(bin);
        }
    }

    // Requests are routed in a canonical orientation (lower node id first) so
    // that conflict probabilities, feasibility checks, and commits all refer
    // to the same directed links.
    std::vector<int> pick_path(const Request& req) {
        int s = std::min(req.src, req.dst), d = std::max(req.src, req.dst);
        if (routing_ == RoutingMode::Ssp) return topo_->shortest_path(s, d);
        const PathTable::Entry* e = table_.find(s, d);
        if (!e) throw std::runtime_error("no path table entry for request endpoints");
        int k = table_.sample(*e, rng_);
        std::vector<int> path = e->paths[k];
        if (path.front() != s) std::reverse(path.begin(), path.end());
        last_vertex_ = graph_.index.at({(int)(e - table_.entries.data()), k});
        return path;
    }

    // one free fiber per link over the window, lowest ids
    std::optional<Connection> make_connection(const SpectrumState& state,
                                              const std::vector<int>& links,
                                              SlotRange range) const {
        Connection conn;
        for (int l : links) {
            int f = state.first_free_fiber(l, range);
            if (f < 0) return std::nullopt;
            conn.slices.push_back({f, range});
        }
        return conn;
    }

    bool window_ok(const SpectrumState& state, const std::vector<int>& links,
                   SlotRange range) const {
        for (int l : links)
            if (state.availability(l, range) < 1) return false;
        return true;
    }

    // Bitmask over start positions where every path link has a free fiber.
    std::vector<uint64_t> start_mask(const SpectrumState& state, const std::vector<int>& links,
                                     int width) const {
        auto m = state.link_window_mask(links.front(), width);
        for (size_t i = 1; i < links.size(); ++i) {
            auto o = state.link_window_mask(links[i], width);
            for (size_t w = 0; w < m.size(); ++w) m[w] &= o[w];
        }
        return m;
    }

    static bool bit_set(const std::vector<uint64_t>& m, int s) {
        return (m[s >> 6] >> (s & 63)) & 1;
    }

    std::optional<Connection> nsa(const Request& req, SpectrumState& state, bool sharing) {
        if (routing_ != RoutingMode::Mps)
            throw std::runtime_error("next-state-aware admission needs the path table");
        int kv = last_vertex_;
        const auto& links = last_.links;

        // native segment: the feasible bin with the least capacity loss
        auto mask = start_mask(state, links, req.demand);
        double best = std::numeric_limits<double>::infinity();
        int best_bin = -1;
        for (size_t x = 0; x < bins_.size(); ++x) {
            if (bins_[x].size_b != req.demand) continue;
            if (!bit_set(mask, bins_[x].range.start)) continue;
            double z = capacity_loss(state, graph_, kv, bins_[x].range);
            if (z < best - 1e-12) {
                best = z;
                best_bin = (int)x;
            }
        }
        if (best_bin >= 0) return make_connection(state, links, bins_[best_bin].range);
        if (!sharing) return std::nullopt;

        // cross-partition sharing: any contiguous window, flagged bins free.
        // Per-bin costs are start-independent, so compute them once.
        std::vector<double> bincost(bins_.size());
        for (size_t x = 0; x < bins_.size(); ++x) {
            bool fl = false;
            for (int l : links) {
                for (int f = state.fiber_base(l);
                     f < state.fiber_base(l) + state.link_fibers(l) && !fl; ++f)
                    fl = flagged(f, (int)x);
                if (fl) break;
            }
            bincost[x] = fl ? 0.0 : capacity_loss(state, graph_, kv, bins_[x].range);
        }
        double bestc = std::numeric_limits<double>::infinity();
        int best_start = -1;
        for (int s = 0; s + req.demand <= state.capacity(); ++s) {
            if (!bit_set(mask, s)) continue;
            SlotRange w{s, req.demand};
            double z = 0;
            for (size_t x = 0; x < bins_.size(); ++x)
                if (overlaps(bins_[x].range, w)) z += bincost[x];
            if (z < bestc - 1e-12) {
                bestc = z;
                best_start = s;
            }
        }
        if (best_start < 0) return std::nullopt;
        SlotRange w{best_start, req.demand};
        auto conn = make_connection(state, links, w);
        for (const auto& sl : conn->slices)
            for (size_t x = 0; x < bins_.size(); ++x)
                if (overlaps(bins_[x].range, sl.range)) set_flag(sl.fiber, (int)x, true);
        last_.shared = true;
        return conn;
    }

    std::optional<Connection> plain(const Request& req, SpectrumState& state,
                                    const std::vector<int>& links, bool randomized) {
        auto mask = start_mask(state, links, req.demand);
        if (!randomized) {
            int s = first_set_bit(mask);
            if (s < 0) return std::nullopt;
            return make_connection(state, links, {s, req.demand});
        }
        std::vector<int> starts;
        for (int s = 0; s + req.demand <= state.capacity(); ++s)
            if (bit_set(mask, s)) starts.push_back(s);
        if (starts.empty()) return std::nullopt;
        int s = starts[rng_.next_below(starts.size())];
        return make_connection(state, links, {s, req.demand});
    }

    // equal-width per-size segments; odd segments fill bottom-up, even ones
    // top-down (segments numbered from 1 in ascending size order)
    std::optional<Connection> flf(const Request& req, SpectrumState& state,
                                  const std::vector<int>& links) {
        std::vector<int> sizes;
        for (const auto& seg : plan_.segments) sizes.push_back(seg.size_b);
        std::sort(sizes.begin(), sizes.end());
        auto it = std::find(sizes.begin(), sizes.end(), req.demand);
        if (it == sizes.end()) return std::nullopt;
        int j = (int)(it - sizes.begin());
        int width = state.capacity() / (int)sizes.size();
        int lo = j * width, hi = lo + width;  // [lo, hi)
        auto mask = start_mask(state, links, req.demand);
        bool first_fit = j % 2 == 0;  // segment j+1 is odd-numbered
        if (first_fit) {
            for (int s = lo; s + req.demand <= hi; ++s)
                if (bit_set(mask, s)) return make_connection(state, links, {s, req.demand});
        } else {
            for (int s = hi - req.demand; s >= lo; --s)
                if (bit_set(mask, s)) return make_connection(state, links, {s, req.demand});
        }
        return std::nullopt;
    }

    // dedicated partitions with overflow into smaller-size segments only
    std::optional<Connection> mk(const Request& req, SpectrumState& state,
                                 const std::vector<int>& links) {
        auto mask = start_mask(state, links, req.demand);
        const auto* native = plan_.segment_for(req.demand);
        if (native) {
            // larger requests overflowing into this segment can break bin
            // alignment, so scan every start position
            for (int s = native->start; s + req.demand <= native->start + native->length; ++s)
                if (bit_set(mask, s)) return make_connection(state, links, {s, req.demand});
        }
        std::vector<const PartitionPlan::Segment*> smaller;
        for (const auto& seg : plan_.segments)
            if (seg.size_b < req.demand) smaller.push_back(&seg);
        std::sort(smaller.begin(), smaller.end(),
                  [](auto* a, auto* b) { return a->start < b->start; });
        for (const auto* seg : smaller)
            for (int s = seg->start; s + req.demand <= seg->start + seg->length; ++s)
                if (bit_set(mask, s)) return make_connection(state, links, {s, req.demand});
        return std::nullopt;
    }

    const Topology* topo_;
    RsaPolicyKind kind_;
    RoutingMode routing_;
    PathTable table_;
    PartitionPlan plan_;
    ConflictGraph graph_;
    Rng rng_;
    std::vector<BinRec> bins_;
    std::map<int, std::set<int>> flags_;  // fiber -> flagged bin indices
    std::map<long long, std::vector<FiberSlice>> live_;
    Decision last_;
    int last_vertex_ = -1;
};

// ------------------------------------------------- path table persistence --

// Plain-text round trip for precomputed path tables so repeated runs on the
// same topology can skip the LP.
inline void save_path_table(const PathTable& table, std::ostream& os) {
    os << "pathtable 1\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", table.objective);
    os << "objective " << buf << "\n";
    for (const auto& e : table.entries) {
        os << "entry " << e.src << " " << e.dst << " " << e.paths.size() << "\n";
        for (size_t k = 0; k < e.paths.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", e.probs[k]);
            os << "path " << buf << " " << e.paths[k].size();
            for (int v : e.paths[k]) os << " " << v;
            os << "\n";
        }
    }
}

inline PathTable load_path_table(std::istream& is) {
    PathTable table;
    std::string word;
    int version = 0;
    if (!(is >> word >> version) || word != "pathtable" || version != 1)
        throw std::runtime_error("unrecognized path table header");
    while (is >> word) {
        if (word == "objective") {
            if (!(is >> table.objective)) throw std::runtime_error("bad path table objective");
        } else if (word == "entry") {
            PathTable::Entry e;
            size_t n = 0;
            if (!(is >> e.src >> e.dst >> n)) throw std::runtime_error("bad path table entry");
            for (size_t k = 0; k < n; ++k) {
                double p = 0;
                size_t len = 0;
                if (!(is >> word >> p >> len) || word != "path")
                    throw std::runtime_error("bad path table path");
                std::vector<int> nodes(len);
                for (size_t i = 0; i < len; ++i)
                    if (!(is >> nodes[i])) throw std::runtime_error("bad path table node");
                e.probs.push_back(p);
                e.paths.push_back(std::move(nodes));
            }
            table.entries.push_back(std::move(e));
        } else {
            throw std::runtime_error("unrecognized path table record: " + word);
        }
    }
    return table;
}

}  // namespace mgon

#endif
