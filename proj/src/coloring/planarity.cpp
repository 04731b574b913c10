#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stack>
#include <stdexcept>

#include "itercheck/coloring/graph.hpp"

// Demoucron-Malgrange-Pertuiset face embedding, run per biconnected
// component. Sound and complete for simple graphs; sized for the small
// instances this project generates.

namespace itercheck::coloring {

namespace {

using Edge = std::pair<int, int>;

Edge norm(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

// Biconnected components as edge sets (Tarjan, edge stack).
std::vector<std::set<Edge>> biconnected_components(const Graph& g) {
    std::vector<std::set<Edge>> comps;
    auto adj = g.adjacency();
    std::vector<int> disc(g.n, -1), low(g.n, 0);
    std::vector<Edge> estack;
    int timer = 0;

    struct Frame {
        int v;
        int parent;
        std::size_t next = 0;
    };

    for (int root = 0; root < g.n; ++root) {
        if (disc[root] != -1) continue;
        std::stack<Frame> st;
        st.push({root, -1});
        disc[root] = low[root] = timer++;
        while (!st.empty()) {
            Frame& f = st.top();
            if (f.next < adj[f.v].size()) {
                int w = adj[f.v][f.next++];
                if (disc[w] == -1) {
                    estack.push_back(norm(f.v, w));
                    disc[w] = low[w] = timer++;
                    st.push({w, f.v});
                } else if (w != f.parent && disc[w] < disc[f.v]) {
                    estack.push_back(norm(f.v, w));
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                int v = f.v;
                int parent = f.parent;
                st.pop();
                if (parent != -1) {
                    low[parent] = std::min(low[parent], low[v]);
                    if (low[v] >= disc[parent]) {
                        std::set<Edge> comp;
                        Edge top = norm(parent, v);
                        while (!estack.empty()) {
                            Edge e = estack.back();
                            estack.pop_back();
                            comp.insert(e);
                            if (e == top) break;
                        }
                        if (!comp.empty()) comps.push_back(std::move(comp));
                    }
                }
            }
        }
    }
    return comps;
}

struct Fragment {
    std::set<int> attachments;
    std::set<int> interior;          // empty for chord fragments
    std::optional<Edge> chord;       // set for single-edge fragments
};

// A cycle in a biconnected graph with >= 3 vertices, via recursive DFS
// (back edges always reach an ancestor on the current path).
std::vector<int> find_cycle(const std::map<int, std::vector<int>>& adj) {
    std::vector<int> path;
    std::map<int, int> on_path;  // vertex -> index in path
    std::set<int> visited;
    std::vector<int> cycle;

    auto dfs = [&](auto&& self, int v, int parent) -> bool {
        visited.insert(v);
        on_path[v] = static_cast<int>(path.size());
        path.push_back(v);
        bool parent_skipped = false;
        for (int w : adj.at(v)) {
            if (w == parent && !parent_skipped) {
                parent_skipped = true;
                continue;
            }
            if (auto it = on_path.find(w); it != on_path.end()) {
                cycle.assign(path.begin() + it->second, path.end());
                if (cycle.size() >= 3) return true;
                cycle.clear();
                continue;
            }
            if (!visited.count(w) && self(self, w, v)) return true;
        }
        path.pop_back();
        on_path.erase(v);
        return false;
    };

    if (dfs(dfs, adj.begin()->first, -1)) return cycle;
    throw std::logic_error("no cycle in biconnected component");
}

bool demoucron_planar(const std::set<Edge>& edges) {
    std::set<int> verts;
    for (auto [u, v] : edges) {
        verts.insert(u);
        verts.insert(v);
    }
    int n = static_cast<int>(verts.size());
    if (n <= 4) return true;
    if (static_cast<int>(edges.size()) > 3 * n - 6) return false;

    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    std::vector<int> cycle = find_cycle(adj);
    std::set<int> embedded_verts(cycle.begin(), cycle.end());
    std::set<Edge> embedded_edges;
    for (std::size_t i = 0; i < cycle.size(); ++i)
        embedded_edges.insert(norm(cycle[i], cycle[(i + 1) % cycle.size()]));

    std::vector<std::vector<int>> faces{cycle, {cycle.rbegin(), cycle.rend()}};

    while (embedded_edges.size() < edges.size()) {
        // Fragments relative to the embedded subgraph.
        std::vector<Fragment> fragments;
        for (auto e : edges) {
            if (embedded_edges.count(e)) continue;
            if (embedded_verts.count(e.first) && embedded_verts.count(e.second)) {
                Fragment f;
                f.attachments = {e.first, e.second};
                f.chord = e;
                fragments.push_back(std::move(f));
            }
        }
        std::set<int> assigned;
        for (int v : verts) {
            if (embedded_verts.count(v) || assigned.count(v)) continue;
            Fragment f;
            std::deque<int> q{v};
            assigned.insert(v);
            f.interior.insert(v);
            while (!q.empty()) {
                int x = q.front();
                q.pop_front();
                for (int w : adj[x]) {
                    if (embedded_verts.count(w)) {
                        f.attachments.insert(w);
                    } else if (!assigned.count(w)) {
                        assigned.insert(w);
                        f.interior.insert(w);
                        q.push_back(w);
                    }
                }
            }
            fragments.push_back(std::move(f));
        }
        if (fragments.empty()) return false;  // disconnected leftover; not biconnected input

        // Admissible faces per fragment.
        std::vector<std::vector<std::size_t>> admissible(fragments.size());
        for (std::size_t fi = 0; fi < fragments.size(); ++fi) {
            for (std::size_t i = 0; i < faces.size(); ++i) {
                std::set<int> fv(faces[i].begin(), faces[i].end());
                bool ok = std::all_of(fragments[fi].attachments.begin(),
                                      fragments[fi].attachments.end(),
                                      [&](int a) { return fv.count(a) > 0; });
                if (ok) admissible[fi].push_back(i);
            }
            if (admissible[fi].empty()) return false;
        }
        std::size_t pick = 0;
        for (std::size_t fi = 0; fi < fragments.size(); ++fi) {
            if (admissible[fi].size() == 1) {
                pick = fi;
                break;
            }
        }
        const Fragment& frag = fragments[pick];
        std::size_t face_idx = admissible[pick].front();
        if (frag.attachments.size() < 2)
            throw std::logic_error("fragment with < 2 attachments in biconnected component");

        // A path between two attachments through the fragment.
        std::vector<int> path;
        if (frag.chord) {
            path = {frag.chord->first, frag.chord->second};
        } else {
            int a = *frag.attachments.begin();
            std::map<int, int> parent;
            parent[a] = a;
            std::deque<int> q{a};
            int found = -1;
            while (!q.empty() && found == -1) {
                int x = q.front();
                q.pop_front();
                for (int w : adj[x]) {
                    if (parent.count(w)) continue;
                    if (frag.interior.count(w)) {
                        parent[w] = x;
                        q.push_back(w);
                    } else if (frag.attachments.count(w) && x != a) {
                        parent[w] = x;
                        found = w;
                        break;
                    }
                }
            }
            if (found == -1) throw std::logic_error("no path through fragment");
            for (int x = found; x != a; x = parent[x]) path.push_back(x);
            path.push_back(a);
            std::reverse(path.begin(), path.end());
        }

        // Embed the path, splitting the face.
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            embedded_edges.insert(norm(path[i], path[i + 1]));
        for (int v : path) embedded_verts.insert(v);

        std::vector<int> face = faces[face_idx];
        auto pos_of = [&](int v) {
            return std::find(face.begin(), face.end(), v) - face.begin();
        };
        std::size_t ia = pos_of(path.front());
        std::size_t ib = pos_of(path.back());

        std::vector<int> face1, face2;
        // Walk face from a to b, then path interior reversed.
        for (std::size_t i = ia;; i = (i + 1) % face.size()) {
            face1.push_back(face[i]);
            if (i == ib) break;
        }
        for (std::size_t i = path.size() - 2; i >= 1; --i) face1.push_back(path[i]);
        // Walk face from b to a, then path interior forward.
        for (std::size_t i = ib;; i = (i + 1) % face.size()) {
            face2.push_back(face[i]);
            if (i == ia) break;
        }
        for (std::size_t i = 1; i + 1 < path.size(); ++i) face2.push_back(path[i]);

        faces[face_idx] = std::move(face1);
        faces.push_back(std::move(face2));
    }
    return true;
}

}  // namespace

bool is_planar(const Graph& g) {
    if (g.n <= 4) return true;
    if (g.n >= 3 && g.m() > 3 * g.n - 6) return false;
    for (const auto& comp : biconnected_components(g)) {
        if (!demoucron_planar(comp)) return false;
    }
    return true;
}

}  // namespace itercheck::coloring
