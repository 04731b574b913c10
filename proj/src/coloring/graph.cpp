#include "itercheck/coloring/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace itercheck::coloring {

void Graph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("vertex out of range");
    if (u > v) std::swap(u, v);
    edges.insert({u, v});
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return edges.count({u, v}) > 0;
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n, 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

Graph Graph::complete(int n) {
    Graph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.edges.insert({u, v});
    return g;
}

Graph Graph::complete_bipartite(int a, int b) {
    Graph g;
    g.n = a + b;
    for (int u = 0; u < a; ++u)
        for (int v = a; v < a + b; ++v) g.edges.insert({u, v});
    return g;
}

Graph Graph::cycle(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph Graph::path(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

int chromatic_number_exact(const Graph& g) {
    if (g.n == 0) return 0;
    if (g.edges.empty()) return 1;
    auto adj = g.adjacency();

    // Order vertices by descending degree; fail-fast on dense vertices.
    std::vector<int> order(g.n);
    for (int i = 0; i < g.n; ++i) order[i] = i;
    auto deg = g.degrees();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deg[a] > deg[b]; });

    // colorable(k): backtracking with symmetry breaking (a vertex may only
    // open one new color beyond those already in use).
    auto colorable = [&](int k) {
        std::vector<int> assigned(g.n, -1);
        auto rec = [&](auto&& self, int idx, int used) -> bool {
            if (idx == g.n) return true;
            int v = order[idx];
            int limit = std::min(k, used + 1);
            for (int c = 0; c < limit; ++c) {
                bool ok = true;
                for (int w : adj[v]) {
                    if (assigned[w] == c) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                assigned[v] = c;
                if (self(self, idx + 1, std::max(used, c + 1))) return true;
                assigned[v] = -1;
            }
            return false;
        };
        return rec(rec, 0, 0);
    };

    for (int k = 2;; ++k) {
        if (k >= g.n) return g.n;  // complete-graph ceiling
        if (colorable(k)) return k;
    }
}

bool isomorphic(const Graph& a, const Graph& b) {
    if (a.n != b.n || a.m() != b.m()) return false;
    auto da = a.degrees();
    auto db = b.degrees();
    {
        auto sa = da;
        auto sb = db;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    auto adj_a = a.adjacency();
    std::vector<int> map(a.n, -1);
    std::vector<bool> used(b.n, false);

    // Map vertices in descending-degree order of a.
    std::vector<int> order(a.n);
    for (int i = 0; i < a.n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return da[x] > da[y]; });

    auto rec = [&](auto&& self, int idx) -> bool {
        if (idx == a.n) return true;
        int u = order[idx];
        for (int v = 0; v < b.n; ++v) {
            if (used[v] || db[v] != da[u]) continue;
            bool ok = true;
            for (int w : adj_a[u]) {
                if (map[w] != -1 && !b.has_edge(v, map[w])) {
                    ok = false;
                    break;
                }
            }
            // Also reject if v is adjacent to an image of a non-neighbor.
            if (ok) {
                for (int w = 0; w < a.n; ++w) {
                    if (map[w] != -1 && !a.has_edge(u, w) && b.has_edge(v, map[w])) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            map[u] = v;
            used[v] = true;
            if (self(self, idx + 1)) return true;
            map[u] = -1;
            used[v] = false;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace itercheck::coloring
