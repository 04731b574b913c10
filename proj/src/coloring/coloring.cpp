#include "itercheck/coloring/coloring.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace itercheck::coloring {

const std::vector<std::string>& color_palette() {
    static const std::vector<std::string> palette = {
        "red",  "green",   "blue", "yellow", "orange", "purple", "pink",
        "brown", "cyan",   "magenta", "lime", "teal",  "olive",  "navy"};
    return palette;
}

std::string color_name(int index) {
    const auto& p = color_palette();
    if (index >= 0 && index < static_cast<int>(p.size())) return p[index];
    return "color" + std::to_string(index);
}

// --- instance generation ----------------------------------------------

InstanceGenerator::InstanceGenerator(GenerationConfig config, std::uint64_t seed)
    : config_(config), rng_(seed) {
    if (config_.n_min < 3 || config_.n_min > config_.n_max)
        throw std::invalid_argument("require 3 <= n_min <= n_max");
    if (!(config_.p > 0.0 && config_.p < 1.0)) throw std::invalid_argument("require 0 < p < 1");
}

ColoringInstance InstanceGenerator::next() {
    std::uniform_int_distribution<int> n_dist(config_.n_min, config_.n_max);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int attempt = 0; attempt < config_.retry_budget; ++attempt) {
        Graph g;
        g.n = n_dist(rng_);
        for (int u = 0; u < g.n; ++u)
            for (int v = u + 1; v < g.n; ++v)
                if (coin(rng_) < config_.p) g.edges.insert({u, v});
        if (!is_planar(g)) continue;
        bool repeat = false;
        for (const auto& prev : emitted_) {
            if (isomorphic(g, prev)) {
                repeat = true;
                break;
            }
        }
        if (repeat) continue;
        ColoringInstance inst;
        inst.chromatic_number = chromatic_number_exact(g);
        inst.graph = g;
        emitted_.push_back(std::move(g));
        return inst;
    }
    throw std::runtime_error("instance generation retry budget exceeded (" +
                             std::to_string(config_.retry_budget) + " rejections)");
}

// --- DIMACS ------------------------------------------------------------

std::string to_dimacs(const ColoringInstance& instance) {
    std::string out = "c chromatic number " + std::to_string(instance.chromatic_number) + "\n";
    out += "p edge " + std::to_string(instance.graph.n) + " " +
           std::to_string(instance.graph.m()) + "\n";
    for (auto [u, v] : instance.graph.edges)
        out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    return out;
}

ColoringInstance from_dimacs(const std::string& text) {
    ColoringInstance inst;
    bool have_p = false;
    bool have_chromatic = false;
    int declared_m = 0;
    int seen_m = 0;
    int lineno = 0;
    std::istringstream in(text);
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("DIMACS line " + std::to_string(lineno) + ": " + msg);
    };
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "c") {
            std::string word1, word2;
            int k;
            if (ls >> word1 >> word2 >> k && word1 == "chromatic" && word2 == "number") {
                inst.chromatic_number = k;
                have_chromatic = true;
            }
        } else if (head == "p") {
            if (have_p) fail("duplicate p line");
            std::string fmt;
            int n, m;
            if (!(ls >> fmt >> n >> m) || fmt != "edge") fail("expected 'p edge <n> <m>'");
            if (n < 1) fail("vertex count must be positive");
            inst.graph.n = n;
            declared_m = m;
            have_p = true;
        } else if (head == "e") {
            if (!have_p) fail("edge before p line");
            int u, v;
            if (!(ls >> u >> v)) fail("expected 'e <u> <v>'");
            if (u == v) fail("self-loop");
            if (u < 1 || v < 1 || u > inst.graph.n || v > inst.graph.n)
                fail("vertex out of range");
            auto [it, inserted] = inst.graph.edges.insert(
                {std::min(u, v) - 1, std::max(u, v) - 1});
            if (!inserted) fail("duplicate edge");
            ++seen_m;
        } else {
            fail("unrecognized line '" + head + "'");
        }
    }
    if (!have_p) throw std::runtime_error("DIMACS: missing p line");
    if (seen_m != declared_m)
        throw std::runtime_error("DIMACS: p line declares " + std::to_string(declared_m) +
                                 " edges but " + std::to_string(seen_m) + " were given");
    if (!have_chromatic) inst.chromatic_number = chromatic_number_exact(inst.graph);
    return inst;
}

// --- verification ------------------------------------------------------

std::vector<std::pair<int, int>> violated_edges(const Graph& g, const Coloring& candidate) {
    std::vector<std::pair<int, int>> out;
    for (auto [u, v] : g.edges) {
        auto cu = candidate.assignment.find(u);
        auto cv = candidate.assignment.find(v);
        if (cu != candidate.assignment.end() && cv != candidate.assignment.end() &&
            cu->second == cv->second)
            out.push_back({u, v});
    }
    return out;
}

namespace {

Verdict make_rejection(FeedbackLevel level, std::vector<std::string> items) {
    Verdict v;
    v.accepted = false;
    v.source = VerdictSource::SoundVerifier;
    Critique c;
    c.level = level;
    if (level == FeedbackLevel::Binary) {
        c.rendered = "Your previous answer was wrong.";
    } else {
        if (level == FeedbackLevel::FirstError && items.size() > 1) items.resize(1);
        c.items = items;
        std::string joined;
        for (const auto& item : c.items) {
            if (!joined.empty()) joined += "\n";
            joined += item;
        }
        c.rendered = joined;
    }
    v.critique = c;
    return v;
}

std::string edge_fault(int u, int v, const std::string& color) {
    return "Vertices " + std::to_string(u) + " and " + std::to_string(v) +
           " were both colored " + color + " despite sharing an edge.";
}

}  // namespace

Verdict verify_coloring(const ColoringInstance& instance, const Coloring& candidate,
                        const VerifyOptions& options) {
    std::vector<std::string> missing;
    for (int v = 0; v < instance.graph.n; ++v) {
        if (!candidate.assignment.count(v))
            missing.push_back("Vertex " + std::to_string(v) + " was not assigned a color.");
    }
    if (!missing.empty()) return make_rejection(options.level, std::move(missing));

    std::vector<std::string> faults;
    for (auto [u, v] : violated_edges(instance.graph, candidate))
        faults.push_back(edge_fault(u, v, candidate.assignment.at(u)));

    std::set<std::string> used;
    for (const auto& [v, c] : candidate.assignment) used.insert(c);
    if (options.reject_non_optimal &&
        static_cast<int>(used.size()) > instance.chromatic_number) {
        faults.push_back("The coloring uses " + std::to_string(used.size()) +
                         " colors but only " + std::to_string(instance.chromatic_number) +
                         " are allowed.");
    }
    if (faults.empty()) {
        Verdict v;
        v.accepted = true;
        v.source = VerdictSource::SoundVerifier;
        return v;
    }
    return make_rejection(options.level, std::move(faults));
}

std::optional<Coloring> parse_coloring(const std::string& raw, int n) {
    static const std::regex line_re(
        R"(^\s*(?:vertex\s+)?(\d+)\s*(?:[:=]|->|--)?\s+?([A-Za-z][A-Za-z0-9_]*|\d+)\s*[,.]?\s*$)",
        std::regex::icase);
    static const std::regex inline_re(R"((?:vertex\s+)?(\d+)\s*[:=]\s*([A-Za-z][A-Za-z0-9_]*|\d+))",
                                      std::regex::icase);
    Coloring c;
    std::istringstream in(raw);
    for (std::string line; std::getline(in, line);) {
        std::smatch m;
        if (std::regex_match(line, m, line_re)) {
            int v = std::stoi(m[1]);
            if (v >= 0 && v < n) c.assignment[v] = m[2];
            continue;
        }
        for (auto it = std::sregex_iterator(line.begin(), line.end(), inline_re);
             it != std::sregex_iterator(); ++it) {
            int v = std::stoi((*it)[1]);
            if (v >= 0 && v < n) c.assignment[v] = (*it)[2];
        }
    }
    if (c.assignment.empty()) return std::nullopt;
    return c;
}

std::string canonical_form(const Coloring& c) {
    std::string out;
    for (const auto& [v, color] : c.assignment) {
        if (!out.empty()) out += ";";
        std::string lowered = color;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        out += std::to_string(v) + "=" + lowered;
    }
    return out;
}

Coloring solve_coloring(const ColoringInstance& instance) {
    const Graph& g = instance.graph;
    int k = instance.chromatic_number;
    auto adj = g.adjacency();
    std::vector<int> assigned(g.n, -1);
    auto rec = [&](auto&& self, int v, int used) -> bool {
        if (v == g.n) return true;
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
            if (self(self, v + 1, std::max(used, c + 1))) return true;
            assigned[v] = -1;
        }
        return false;
    };
    if (!rec(rec, 0, 0))
        throw std::logic_error("instance chromatic number is inconsistent");
    Coloring out;
    for (int v = 0; v < g.n; ++v) out.assignment[v] = color_name(assigned[v]);
    return out;
}

ColoringSuite generate_coloring_suite(const ColoringInstance& instance, std::mt19937_64& rng) {
    const Graph& g = instance.graph;
    ColoringSuite suite;
    suite.correct = solve_coloring(instance);

    if (g.edges.empty()) throw std::runtime_error("ablated coloring needs at least one edge");
    std::vector<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
    std::shuffle(edges.begin(), edges.end(), rng);
    bool found = false;
    for (auto [u, v] : edges) {
        for (auto [from, to] : {std::pair{u, v}, std::pair{v, u}}) {
            Coloring c = suite.correct;
            c.assignment[from] = c.assignment[to];
            if (violated_edges(g, c).size() == 1) {
                suite.ablated = c;
                found = true;
                break;
            }
        }
        if (found) break;
    }
    if (!found) throw std::runtime_error("could not ablate exactly one edge");

    if (g.n <= instance.chromatic_number)
        throw std::runtime_error("non-optimal coloring impossible: n <= chromatic number");
    for (int v = 0; v < g.n; ++v) suite.non_optimal.assignment[v] = color_name(v);

    std::uniform_int_distribution<int> pick(0, instance.chromatic_number - 1);
    for (int v = 0; v < g.n; ++v) suite.random.assignment[v] = color_name(pick(rng));
    return suite;
}

// --- LLM-critique study ------------------------------------------------

std::string to_string(HallucinationClass h) {
    switch (h) {
        case HallucinationClass::Vertex: return "vertex";
        case HallucinationClass::Edge: return "edge";
        case HallucinationClass::Both: return "both";
        case HallucinationClass::None: return "none";
    }
    throw std::logic_error("bad HallucinationClass");
}

std::vector<CritiqueClaim> parse_llm_critique(const std::string& text) {
    // Versioned pattern set; the golden corpus in tests/fixtures pins its
    // behavior.
    struct Pattern {
        std::regex re;
        // Capture-group indices: u, v, color_u, color_v (0 = absent).
        int u, v, cu, cv;
    };
    static const std::vector<Pattern> patterns = {
        // "vertices 1 and 3 are/were both colored red"
        {std::regex(R"(vert(?:ices|exes|ex)\s+(\d+)\s+and\s+(?:vertex\s+)?(\d+)\s+(?:are|were|have been)?\s*both\s+colored\s+([A-Za-z0-9]+))",
                    std::regex::icase),
         1, 2, 3, 3},
        // "vertex 1 (red) and vertex 3 (red) share an edge"
        {std::regex(R"(vertex\s+(\d+)\s*\(([A-Za-z0-9]+)\)\s+and\s+vertex\s+(\d+)\s*\(([A-Za-z0-9]+)\))",
                    std::regex::icase),
         1, 3, 2, 4},
        // "vertices 1 and 3 share an edge and have the same color"
        {std::regex(R"(vert(?:ices|exes|ex)\s+(\d+)\s+and\s+(?:vertex\s+)?(\d+)\s+(?:share an edge|are (?:adjacent|connected)))",
                    std::regex::icase),
         1, 2, 0, 0},
        // "edge (1, 3) is violated" / "the edge between 1 and 3"
        {std::regex(R"(edge\s+(?:between\s+)?\(?\s*(\d+)\s*(?:,|and)\s*(\d+)\s*\)?)",
                    std::regex::icase),
         1, 2, 0, 0},
    };

    struct Hit {
        std::size_t begin, end;
        CritiqueClaim claim;
    };
    std::vector<Hit> hits;
    for (const auto& p : patterns) {
        for (auto it = std::sregex_iterator(text.begin(), text.end(), p.re);
             it != std::sregex_iterator(); ++it) {
            const std::smatch& m = *it;
            CritiqueClaim claim;
            claim.kind = CritiqueClaim::Kind::EdgeConflict;
            claim.u = std::stoi(m[p.u]);
            claim.v = std::stoi(m[p.v]);
            if (p.cu != 0) {
                std::string a = m[p.cu];
                std::string b = m[p.cv];
                auto lower = [](std::string s) {
                    std::transform(s.begin(), s.end(), s.begin(),
                                   [](unsigned char c) { return std::tolower(c); });
                    return s;
                };
                claim.claimed_colors = {lower(a), lower(b)};
            }
            hits.push_back({static_cast<std::size_t>(m.position(0)),
                            static_cast<std::size_t>(m.position(0) + m.length(0)), claim});
        }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        return a.end > b.end;  // prefer the longer (more specific) match
    });
    std::vector<CritiqueClaim> claims;
    std::size_t covered = 0;
    for (const auto& h : hits) {
        if (h.begin < covered) continue;  // overlapping weaker match
        claims.push_back(h.claim);
        covered = h.end;
    }
    return claims;
}

CritiqueClassification classify_critique(const ColoringInstance& instance,
                                         const Coloring& candidate,
                                         const std::vector<CritiqueClaim>& claims) {
    CritiqueClassification out;
    out.parse_failure = claims.empty();
    bool any_edge = false, any_vertex = false, any_both = false;
    for (const auto& claim : claims) {
        if (claim.kind == CritiqueClaim::Kind::Other) {
            out.per_claim.push_back(HallucinationClass::None);
            continue;
        }
        bool edge_hall = !instance.graph.has_edge(claim.u, claim.v) || claim.u == claim.v ||
                         claim.u >= instance.graph.n || claim.v >= instance.graph.n;
        bool vertex_hall = false;
        if (claim.claimed_colors) {
            auto actual = [&](int v) -> std::string {
                auto it = candidate.assignment.find(v);
                if (it == candidate.assignment.end()) return "";
                std::string s = it->second;
                std::transform(s.begin(), s.end(), s.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                return s;
            };
            vertex_hall = actual(claim.u) != claim.claimed_colors->first ||
                          actual(claim.v) != claim.claimed_colors->second;
        }
        HallucinationClass h = HallucinationClass::None;
        if (edge_hall && vertex_hall) h = HallucinationClass::Both;
        else if (edge_hall) h = HallucinationClass::Edge;
        else if (vertex_hall) h = HallucinationClass::Vertex;
        any_edge |= h == HallucinationClass::Edge;
        any_vertex |= h == HallucinationClass::Vertex;
        any_both |= h == HallucinationClass::Both;
        out.per_claim.push_back(h);
    }
    if (any_both || (any_edge && any_vertex)) out.instance_label = HallucinationClass::Both;
    else if (any_edge) out.instance_label = HallucinationClass::Edge;
    else if (any_vertex) out.instance_label = HallucinationClass::Vertex;
    else out.instance_label = HallucinationClass::None;
    return out;
}

// --- plumbing ----------------------------------------------------------

std::vector<ColoringInstance> load_instances(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::vector<ColoringInstance> out;
    std::string block;
    auto flush = [&] {
        if (block.find_first_not_of(" \t\r\n") == std::string::npos) {
            block.clear();
            return;
        }
        out.push_back(from_dimacs(block));
        block.clear();
    };
    for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
        } else {
            block += line;
            block += '\n';
        }
    }
    flush();
    return out;
}

ProblemInstance make_problem(const ColoringInstance& instance, const std::string& id) {
    ProblemInstance p;
    p.id = id;
    p.domain_tag = DomainTag::Coloring;
    p.payload = instance;
    return p;
}

}  // namespace itercheck::coloring
