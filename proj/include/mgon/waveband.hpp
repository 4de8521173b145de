#ifndef MGON_WAVEBAND_HPP
#define MGON_WAVEBAND_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgon/sim.hpp"
#include "mgon/topology.hpp"
#include "mgon/traffic.hpp"

namespace mgon {

// ---------------------------------------------------------------------------
// Switching-code matrix for a wavelength-routed demand set. Row = wavelength,
// column = one bit of a node's switching code: either a bypass port pair
// (a < b) or a single add/drop port (a == b). Ports of node v are numbered
// 1..degree(v) in ascending neighbor id.
// ---------------------------------------------------------------------------

enum class Cell : uint8_t { Zero = 0, One = 1, DontCare = 2 };

struct ColumnKey {
    int node = 0;
    int port_a = 0;
    int port_b = 0;  // == port_a for add/drop columns
    bool is_adddrop() const { return port_a == port_b; }
};

struct RwaMatrix {
    int wavelengths = 0;
    std::vector<ColumnKey> columns;
    std::vector<std::vector<Cell>> cells;  // [wavelength][column]
};

struct RoutedLightpath {
    std::vector<int> route;  // node sequence
    int wavelength = 0;      // 0-based row
};

// port number (1-based) of node v toward neighbor u
inline int port_of(const Topology& topo, int v, int u) {
    std::vector<int> nbrs;
    for (int id : topo.out_links[v]) nbrs.push_back(topo.links[id].dst);
    std::sort(nbrs.begin(), nbrs.end());
    auto it = std::find(nbrs.begin(), nbrs.end(), u);
    if (it == nbrs.end()) throw std::invalid_argument("not a neighbor");
    return (int)(it - nbrs.begin()) + 1;
}

inline std::vector<ColumnKey> rwa_columns(const Topology& topo) {
    std::vector<ColumnKey> cols;
    for (int v = 0; v < topo.node_count; ++v) {
        int d = topo.degree(v);
        for (int a = 1; a <= d; ++a)
            for (int b = a + 1; b <= d; ++b) cols.push_back({v, a, b});
        for (int a = 1; a <= d; ++a) cols.push_back({v, a, a});
    }
    return cols;
}

// Shortest-path routing + First-Fit wavelength assignment. Connections are
// bidirectional: a lightpath occupies its wavelength on both directions of
// every hop.
inline std::vector<RoutedLightpath> route_first_fit(const Topology& topo,
                                                    const std::vector<Request>& requests) {
    std::map<std::pair<int, int>, std::set<int>> used;  // directed link -> wavelengths
    std::vector<RoutedLightpath> out;
    for (const Request& r : requests) {
        RoutedLightpath lp;
        lp.route = topo.shortest_path(r.src, r.dst);
        if (lp.route.empty()) throw std::runtime_error("unroutable request");
        for (int w = 0;; ++w) {
            bool free = true;
            for (size_t i = 0; i + 1 < lp.route.size() && free; ++i) {
                if (used[{lp.route[i], lp.route[i + 1]}].count(w) ||
                    used[{lp.route[i + 1], lp.route[i]}].count(w))
                    free = false;
            }
            if (free) {
                lp.wavelength = w;
                break;
            }
        }
        for (size_t i = 0; i + 1 < lp.route.size(); ++i) {
            used[{lp.route[i], lp.route[i + 1]}].insert(lp.wavelength);
            used[{lp.route[i + 1], lp.route[i]}].insert(lp.wavelength);
        }
        out.push_back(lp);
    }
    return out;
}

inline RwaMatrix encode_rwa(const Topology& topo, const std::vector<RoutedLightpath>& paths) {
    RwaMatrix m;
    m.columns = rwa_columns(topo);
    int W = 0;
    for (const auto& p : paths) W = std::max(W, p.wavelength + 1);
    m.wavelengths = W;
    std::map<std::pair<int, int>, std::set<int>> used;  // clash detection
    // per wavelength per node: port busy flags and the active bits
    struct NodeUse {
        std::set<std::pair<int, int>> bypass;  // port pairs
        std::set<int> adddrop;                 // ports
        std::set<int> busy;                    // ports carrying this wavelength
    };
    std::vector<std::map<int, NodeUse>> use(W);
    for (const auto& p : paths) {
        for (size_t i = 0; i + 1 < p.route.size(); ++i) {
            if (!used[{p.route[i], p.route[i + 1]}].insert(p.wavelength).second ||
                !used[{p.route[i + 1], p.route[i]}].insert(p.wavelength).second)
                throw std::runtime_error("wavelength clash on link");
        }
        auto& u = use[p.wavelength];
        int n = (int)p.route.size();
        for (int i = 0; i < n; ++i) {
            int v = p.route[i];
            if (i == 0 || i == n - 1) {
                int nb = (i == 0) ? p.route[1] : p.route[n - 2];
                int port = port_of(topo, v, nb);
                u[v].adddrop.insert(port);
                u[v].busy.insert(port);
            } else {
                int pa = port_of(topo, v, p.route[i - 1]);
                int pb = port_of(topo, v, p.route[i + 1]);
                u[v].bypass.insert({std::min(pa, pb), std::max(pa, pb)});
                u[v].busy.insert(pa);
                u[v].busy.insert(pb);
            }
        }
    }
    m.cells.assign(W, std::vector<Cell>(m.columns.size(), Cell::DontCare));
    for (int w = 0; w < W; ++w) {
        for (size_t c = 0; c < m.columns.size(); ++c) {
            const ColumnKey& k = m.columns[c];
            auto it = use[w].find(k.node);
            const NodeUse* nu = it == use[w].end() ? nullptr : &it->second;
            bool a_busy = nu && nu->busy.count(k.port_a);
            bool b_busy = nu && nu->busy.count(k.port_b);
            if (k.is_adddrop()) {
                if (nu && nu->adddrop.count(k.port_a))
                    m.cells[w][c] = Cell::One;
                else
                    m.cells[w][c] = a_busy ? Cell::Zero : Cell::DontCare;
            } else {
                if (nu && nu->bypass.count({k.port_a, k.port_b}))
                    m.cells[w][c] = Cell::One;
                else
                    m.cells[w][c] = (a_busy || b_busy) ? Cell::Zero : Cell::DontCare;
            }
        }
    }
    return m;
}

// One switching element per (wavelength, node it traverses or terminates at).
inline int swn_count(const std::vector<RoutedLightpath>& paths) {
    std::map<int, std::set<int>> nodes_by_w;
    for (const auto& p : paths)
        for (int v : p.route) nodes_by_w[p.wavelength].insert(v);
    int n = 0;
    for (const auto& [w, s] : nodes_by_w) n += (int)s.size();
    return n;
}

// ---------------------------------------------------------------------------
// Band counting and row-ordering optimization.
// ---------------------------------------------------------------------------

using BinaryMatrix = std::vector<std::vector<uint8_t>>;

// Don't-cares copy the resolved value immediately above; first row X -> 0.
inline BinaryMatrix fill_dont_cares(const RwaMatrix& m) {
    BinaryMatrix out(m.wavelengths, std::vector<uint8_t>(m.columns.size(), 0));
    for (size_t c = 0; c < m.columns.size(); ++c) {
        uint8_t above = 0;
        for (int w = 0; w < m.wavelengths; ++w) {
            Cell cell = m.cells[w][c];
            uint8_t v = cell == Cell::DontCare ? above : (uint8_t)(cell == Cell::One);
            out[w][c] = v;
            above = v;
        }
    }
    return out;
}

// Same fill applied after reordering the ternary matrix's rows.
inline BinaryMatrix fill_with_order(const RwaMatrix& m, const std::vector<int>& order) {
    BinaryMatrix out(order.size(), std::vector<uint8_t>(m.columns.size(), 0));
    for (size_t c = 0; c < m.columns.size(); ++c) {
        uint8_t above = 0;
        for (size_t i = 0; i < order.size(); ++i) {
            Cell cell = m.cells[order[i]][c];
            uint8_t v = cell == Cell::DontCare ? above : (uint8_t)(cell == Cell::One);
            out[i][c] = v;
            above = v;
        }
    }
    return out;
}

struct BandCount {
    int total = 0;
    std::vector<int> per_column;
};

// Bands = maximal runs of 1s per column.
inline BandCount count_bands(const BinaryMatrix& m) {
    BandCount bc;
    if (m.empty()) return bc;
    bc.per_column.assign(m[0].size(), 0);
    for (size_t c = 0; c < m[0].size(); ++c) {
        uint8_t prev = 0;
        for (size_t w = 0; w < m.size(); ++w) {
            if (m[w][c] && !prev) ++bc.per_column[c];
            prev = m[w][c];
        }
        bc.total += bc.per_column[c];
    }
    return bc;
}

// Distance between the designated first row and another row: per column, 1
// for transitions (0->1), (1->0) and (1->1).
inline int row_distance_first(const std::vector<uint8_t>& f, const std::vector<uint8_t>& j) {
    int d = 0;
    for (size_t c = 0; c < f.size(); ++c)
        if (f[c] || j[c]) ++d;
    return d;
}

// Distance between two non-first adjacent rows: only (0->1) transitions.
inline int row_distance(const std::vector<uint8_t>& i, const std::vector<uint8_t>& j) {
    int d = 0;
    for (size_t c = 0; c < i.size(); ++c)
        if (!i[c] && j[c]) ++d;
    return d;
}

// Band total as the sum of adjacent-row distances under an ordering
// (independent of run counting; the two must agree for >= 2 rows).
inline int bands_by_distance_sum(const BinaryMatrix& m, const std::vector<int>& order) {
    if (order.size() < 2) return order.empty() ? 0 : count_bands({m[order[0]]}).total;
    int total = row_distance_first(m[order[0]], m[order[1]]);
    for (size_t i = 1; i + 1 < order.size(); ++i)
        total += row_distance(m[order[i]], m[order[i + 1]]);
    return total;
}

struct BandPlan {
    std::vector<int> order;  // permutation of original row ids
    int total_bands = 0;
    std::vector<int> per_column;
};

enum class BmpStrategy { NN, RDC, ST };

namespace detail {

// Greedy nearest-neighbor ordering starting at `first`; ties toward the
// lower row id. The first step uses the designated-first-row distance.
inline std::vector<int> nn_order(const BinaryMatrix& m, int first) {
    int W = (int)m.size();
    std::vector<char> used(W, 0);
    std::vector<int> order = {first};
    used[first] = 1;
    for (int step = 1; step < W; ++step) {
        int cur = order.back();
        int best = -1, best_d = 0;
        for (int j = 0; j < W; ++j) {
            if (used[j]) continue;
            int d = step == 1 ? row_distance_first(m[cur], m[j]) : row_distance(m[cur], m[j]);
            if (best < 0 || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        order.push_back(best);
        used[best] = 1;
    }
    return order;
}

inline BinaryMatrix reorder(const BinaryMatrix& m, const std::vector<int>& order) {
    BinaryMatrix out;
    out.reserve(order.size());
    for (int r : order) out.push_back(m[r]);
    return out;
}

}  // namespace detail

// NN / RDC row-ordering minimization. Every row is tried as first row
// (lowest first-row id wins ties); the identity order is always a candidate,
// so the result is never worse than the input order. RDC re-fills the
// original ternary matrix under each candidate order before recounting.
inline BandPlan solve_bmp(const RwaMatrix& m, BmpStrategy strategy) {
    BinaryMatrix filled = fill_dont_cares(m);
    int W = m.wavelengths;
    BandPlan best;
    auto consider = [&](const std::vector<int>& order) {
        BinaryMatrix mat = strategy == BmpStrategy::RDC ? fill_with_order(m, order)
                                                        : detail::reorder(filled, order);
        BandCount bc = count_bands(mat);
        if (best.order.empty() || bc.total < best.total_bands) {
            best.order = order;
            best.total_bands = bc.total;
            best.per_column = bc.per_column;
        }
    };
    if (W == 0) return best;
    for (int f = 0; f < W; ++f) consider(detail::nn_order(filled, f));
    std::vector<int> identity(W);
    std::iota(identity.begin(), identity.end(), 0);
    consider(identity);
    return best;
}

// Single-candidate variant: greedy nearest-neighbor from a designated first
// row only (no alternative starts, no identity fallback).
inline BandPlan solve_bmp_fixed_start(const RwaMatrix& m, BmpStrategy strategy, int first) {
    BinaryMatrix filled = fill_dont_cares(m);
    auto order = detail::nn_order(filled, first);
    BinaryMatrix mat = strategy == BmpStrategy::RDC ? fill_with_order(m, order)
                                                    : detail::reorder(filled, order);
    BandCount bc = count_bands(mat);
    return {order, bc.total, bc.per_column};
}

// ST pipeline: sort requests by descending shortest-path length (stable),
// redo First-Fit assignment, then optimize with RDC.
inline BandPlan solve_bmp_st(const Topology& topo, std::vector<Request> requests,
                             std::vector<RoutedLightpath>* out_paths = nullptr) {
    std::stable_sort(requests.begin(), requests.end(), [&](const Request& a, const Request& b) {
        return topo.shortest_path(a.src, a.dst).size() > topo.shortest_path(b.src, b.dst).size();
    });
    auto paths = route_first_fit(topo, requests);
    if (out_paths) *out_paths = paths;
    return solve_bmp(encode_rwa(topo, paths), BmpStrategy::RDC);
}

struct SizeTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive optimum over all W! row orders (refilling per order), W <= 8.
inline BandPlan oracle_bmp(const RwaMatrix& m) {
    if (m.wavelengths > 8) throw SizeTooLarge("oracle limited to 8 wavelengths");
    std::vector<int> order(m.wavelengths);
    std::iota(order.begin(), order.end(), 0);
    BandPlan best;
    do {
        BandCount bc = count_bands(fill_with_order(m, order));
        if (best.order.empty() || bc.total < best.total_bands) {
            best.order = order;
            best.total_bands = bc.total;
            best.per_column = bc.per_column;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

inline RwaMatrix to_ternary(const BinaryMatrix& b) {
    RwaMatrix m;
    m.wavelengths = (int)b.size();
    if (!b.empty()) m.columns.resize(b[0].size());
    for (const auto& row : b) {
        std::vector<Cell> r;
        for (uint8_t v : row) r.push_back(v ? Cell::One : Cell::Zero);
        m.cells.push_back(r);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Dynamic-traffic band expansion: scale an all-to-all plan from W_m rows to
// W_s wavelengths, duplicating rows in place so the band count is preserved.
// ---------------------------------------------------------------------------

struct BandExpansion {
    // expanded row i (0..W_s-1) originates from plan row source_row[i]
    std::vector<int> source_row;
    // per original wavelength id: its expanded wavelength indices
    std::map<int, std::vector<int>> designated;
};

inline BandExpansion expand_bands(const BandPlan& plan, int w_m, int w_s) {
    if (w_s < w_m) throw std::invalid_argument("expanded count below matrix rows");
    int n = w_s / w_m;
    int r = w_s % w_m;
    BandExpansion e;
    for (int i = 0; i < w_m; ++i) {
        int copies = n + (i < r ? 1 : 0);
        int row = plan.order.empty() ? i : plan.order[i];
        for (int c = 0; c < copies; ++c) {
            e.designated[row].push_back((int)e.source_row.size());
            e.source_row.push_back(row);
        }
    }
    return e;
}

// First-Fit over the designated wavelength set for the node pair, then over
// all remaining wavelengths. A wavelength is feasible iff it is free on both
// directions of every hop of the shortest path.
class DesignatedFfPolicy : public AdmissionPolicy {
public:
    DesignatedFfPolicy(const Topology& topo, int w_s,
                       std::map<std::pair<int, int>, std::vector<int>> designated)
        : topo_(topo), w_s_(w_s), designated_(std::move(designated)) {}

    std::optional<Connection> admit(const Request& req, SpectrumState& state) override {
        auto route = topo_.shortest_path(req.src, req.dst);
        if (route.empty()) return std::nullopt;
        std::vector<int> links;
        for (size_t i = 0; i + 1 < route.size(); ++i) {
            links.push_back(topo_.link_between(route[i], route[i + 1]));
            links.push_back(topo_.link_between(route[i + 1], route[i]));
        }
        std::vector<char> tried(w_s_, 0);
        auto feasible = [&](int w) {
            for (int l : links)
                if (state.first_free_fiber(l, {w, 1}) < 0) return false;
            return true;
        };
        auto commit = [&](int w) {
            Connection conn;
            for (int l : links) conn.slices.push_back({state.first_free_fiber(l, {w, 1}), {w, 1}});
            return conn;
        };
        auto it = designated_.find({std::min(req.src, req.dst), std::max(req.src, req.dst)});
        if (it != designated_.end()) {
            for (int w : it->second) {
                tried[w] = 1;
                if (feasible(w)) return commit(w);
            }
        }
        for (int w = 0; w < w_s_; ++w)
            if (!tried[w] && feasible(w)) return commit(w);
        return std::nullopt;
    }

private:
    const Topology& topo_;
    int w_s_;
    std::map<std::pair<int, int>, std::vector<int>> designated_;
};

}  // namespace mgon

#endif
