#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace itercheck::coloring {

// Simple undirected graph on vertices 0..n-1.
struct Graph {
    int n = 0;
    std::set<std::pair<int, int>> edges;  // normalized u < v

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    int m() const { return static_cast<int>(edges.size()); }
    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> degrees() const;

    bool operator==(const Graph&) const = default;

    static Graph complete(int n);
    static Graph complete_bipartite(int a, int b);
    static Graph cycle(int n);
    static Graph path(int n);
};

// Complete combinatorial planarity test (Demoucron face embedding per
// biconnected component). The Euler bound alone is used only as a fast
// rejection.
bool is_planar(const Graph& g);

// Exact minimum proper-coloring count via iterative deepening backtracking
// with vertex 0 fixed to color 0.
int chromatic_number_exact(const Graph& g);

// Backtracking isomorphism test with degree-sequence pruning. Intended for
// the small graphs this project generates (n <= ~14).
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace itercheck::coloring
