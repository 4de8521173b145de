#ifndef MGON_EDGE_COLORING_HPP
#define MGON_EDGE_COLORING_HPP

#include <stdexcept>
#include <vector>

namespace mgon {

// Proper edge coloring of a bipartite multigraph with max-degree colors
// (Koenig's theorem, constructive): insert edges one at a time; when the
// lowest free colors at the two endpoints differ, flip the alternating
// two-color path starting at the right endpoint. Edges are (left, right)
// pairs; returns one color per edge, colors in [0, max_degree).
inline std::vector<int> bipartite_edge_coloring(int n_left, int n_right,
                                                const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> deg_l(n_left, 0), deg_r(n_right, 0);
    for (auto [u, v] : edges) {
        ++deg_l.at(u);
        ++deg_r.at(v);
    }
    int delta = 0;
    for (int d : deg_l) delta = std::max(delta, d);
    for (int d : deg_r) delta = std::max(delta, d);

    // at_l[u][c] / at_r[v][c]: edge currently colored c at that vertex, or -1
    std::vector<std::vector<int>> at_l(n_left, std::vector<int>(delta, -1));
    std::vector<std::vector<int>> at_r(n_right, std::vector<int>(delta, -1));
    std::vector<int> color(edges.size(), -1);

    auto free_color = [&](const std::vector<int>& slots) {
        for (int c = 0; c < (int)slots.size(); ++c)
            if (slots[c] < 0) return c;
        throw std::logic_error("no free color at vertex");
    };

    for (int e = 0; e < (int)edges.size(); ++e) {
        auto [u, v] = edges[e];
        int a = free_color(at_l[u]);
        int b = free_color(at_r[v]);
        if (a != b) {
            // Walk the path of edges alternately colored a, b starting from
            // v's a-colored edge, swapping colors as we go. The path cannot
            // end at u, so color a becomes free at v.
            int want = a, other = b;
            bool from_right = true;  // current edge fetched from the right side
            int cur = at_r[v][want];
            while (cur >= 0) {
                auto [cu, cv] = edges[cur];
                int far = from_right ? cu : cv;  // endpoint we advance to
                // detach only where this edge still owns the slot (the slot
                // at the shared vertex was already taken by the prior edge)
                if (at_l[cu][want] == cur) at_l[cu][want] = -1;
                if (at_r[cv][want] == cur) at_r[cv][want] = -1;
                int next = from_right ? at_l[far][other] : at_r[far][other];
                color[cur] = other;
                at_l[cu][other] = cur;
                at_r[cv][other] = cur;
                std::swap(want, other);
                from_right = !from_right;
                cur = next;
            }
        }
        color[e] = a;
        at_l[u][a] = e;
        at_r[v][a] = e;
    }
    return color;
}

}  // namespace mgon

#endif
