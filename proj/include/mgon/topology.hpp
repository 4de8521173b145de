#ifndef MGON_TOPOLOGY_HPP
#define MGON_TOPOLOGY_HPP

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgon {

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Directed link; bidirectional input lines expand to two of these.
struct Link {
    int src = 0;
    int dst = 0;
    int fiber_count = 1;
};

struct Topology {
    int node_count = 0;
    int slots_per_fiber = 0;
    std::vector<Link> links;

    // adjacency: out_links[v] = link ids leaving v
    std::vector<std::vector<int>> out_links;

    void build_adjacency() {
        out_links.assign(node_count, {});
        for (int i = 0; i < (int)links.size(); ++i)
            out_links[links[i].src].push_back(i);
    }

    int link_between(int u, int v) const {
        for (int id : out_links[u])
            if (links[id].dst == v) return id;
        return -1;
    }

    int degree(int v) const { return (int)out_links[v].size(); }

    // total fibers incident per direction (in == out by construction)
    int port_count(int v) const {
        int n = 0;
        for (int id : out_links[v]) n += links[id].fiber_count;
        return n;
    }

    int total_fibers() const {
        int n = 0;
        for (const Link& l : links) n += l.fiber_count;
        return n;
    }

    // Hop-count shortest path as a node sequence; empty if unreachable.
    std::vector<int> shortest_path(int s, int d) const {
        std::vector<int> prev(node_count, -1);
        std::vector<char> seen(node_count, 0);
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            if (u == d) break;
            for (int id : out_links[u]) {
                int w = links[id].dst;
                if (!seen[w]) {
                    seen[w] = 1;
                    prev[w] = u;
                    q.push(w);
                }
            }
        }
        if (!seen[d]) return {};
        std::vector<int> path;
        for (int v = d; v != -1; v = prev[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
    }

    std::vector<int> path_links(const std::vector<int>& nodes) const {
        std::vector<int> ids;
        for (size_t i = 0; i + 1 < nodes.size(); ++i) {
            int id = link_between(nodes[i], nodes[i + 1]);
            if (id < 0) throw TopologyError("no link on path");
            ids.push_back(id);
        }
        return ids;
    }

    // Yen's algorithm: up to K loopless shortest paths (hop metric), as node
    // sequences ordered by length then lexicographically.
    std::vector<std::vector<int>> k_shortest_paths(int s, int d, int K) const;
};

inline Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TopologyError("cannot open topology file: " + path);
    Topology t;
    std::set<std::pair<int, int>> seen_links;
    std::string line;
    int lineno = 0;
    bool have_nodes = false, have_slots = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw)) continue;
        auto fail = [&](const std::string& what) {
            throw TopologyError(path + ":" + std::to_string(lineno) + ": " + what);
        };
        if (kw == "nodes") {
            if (!(ss >> t.node_count) || t.node_count <= 0) fail("bad node count");
            have_nodes = true;
        } else if (kw == "slots") {
            if (!(ss >> t.slots_per_fiber) || t.slots_per_fiber <= 0) fail("bad slot count");
            have_slots = true;
        } else if (kw == "link") {
            int u, v, f;
            if (!(ss >> u >> v >> f)) fail("bad link line");
            if (!have_nodes) fail("link before nodes");
            if (u < 0 || u >= t.node_count || v < 0 || v >= t.node_count)
                fail("node id out of range");
            if (u == v) fail("self-loop");
            if (f < 1) fail("fiber count must be >= 1");
            if (!seen_links.insert({std::min(u, v), std::max(u, v)}).second)
                fail("duplicate link");
            t.links.push_back({u, v, f});
            t.links.push_back({v, u, f});
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (!have_nodes || !have_slots)
        throw TopologyError(path + ": missing nodes/slots header");
    t.build_adjacency();
    return t;
}

inline std::vector<std::vector<int>> Topology::k_shortest_paths(int s, int d, int K) const {
    auto dijkstra = [&](const std::set<int>& banned_links,
                        const std::set<int>& banned_nodes,
                        int from) -> std::vector<int> {
        std::vector<int> dist(node_count, std::numeric_limits<int>::max());
        std::vector<int> prev(node_count, -1);
        using Item = std::pair<int, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        if (banned_nodes.count(from)) return {};
        dist[from] = 0;
        pq.push({0, from});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > dist[u]) continue;
            for (int id : out_links[u]) {
                if (banned_links.count(id)) continue;
                int w = links[id].dst;
                if (banned_nodes.count(w)) continue;
                if (du + 1 < dist[w]) {
                    dist[w] = du + 1;
                    prev[w] = u;
                    pq.push({dist[w], w});
                }
            }
        }
        if (dist[d] == std::numeric_limits<int>::max()) return {};
        std::vector<int> p;
        for (int v = d; v != -1; v = prev[v]) p.push_back(v);
        std::reverse(p.begin(), p.end());
        return p;
    };

    std::vector<std::vector<int>> result;
    std::vector<std::vector<int>> candidates;
    auto first = dijkstra({}, {}, s);
    if (first.empty()) return result;
    result.push_back(first);
    while ((int)result.size() < K) {
        const auto& last = result.back();
        for (size_t i = 0; i + 1 < last.size(); ++i) {
            std::vector<int> root(last.begin(), last.begin() + i + 1);
            std::set<int> banned_links, banned_nodes;
            for (const auto& p : result) {
                if (p.size() > i && std::equal(root.begin(), root.end(), p.begin())) {
                    int id = link_between(p[i], p[i + 1]);
                    if (id >= 0) banned_links.insert(id);
                }
            }
            for (size_t j = 0; j < i; ++j) banned_nodes.insert(root[j]);
            auto spur = dijkstra(banned_links, banned_nodes, root.back());
            if (spur.empty()) continue;
            std::vector<int> total = root;
            total.insert(total.end(), spur.begin() + 1, spur.end());
            if (std::find(candidates.begin(), candidates.end(), total) == candidates.end() &&
                std::find(result.begin(), result.end(), total) == result.end())
                candidates.push_back(total);
        }
        if (candidates.empty()) break;
        auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const auto& a, const auto& b) {
                                         if (a.size() != b.size()) return a.size() < b.size();
                                         return a < b;
                                     });
        result.push_back(*best);
        candidates.erase(best);
    }
    return result;
}

}  // namespace mgon

#endif
