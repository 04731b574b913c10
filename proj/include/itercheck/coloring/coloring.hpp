#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "itercheck/coloring/graph.hpp"
#include "itercheck/core/types.hpp"

namespace itercheck::coloring {

struct ColoringInstance {
    Graph graph;
    int chromatic_number = 0;
};

// Total for a well-formed candidate; color labels are free-form strings
// (names or small integers, as emitted by the generator).
struct Coloring {
    std::map<int, std::string> assignment;
};

// Standard palette used when rendering colorings and prompts.
const std::vector<std::string>& color_palette();
std::string color_name(int index);

// --- instance generation ----------------------------------------------

struct GenerationConfig {
    int n_min = 4;
    int n_max = 14;
    double p = 0.4;
    int retry_budget = 20000;  // rejected samples allowed per instance
};

// Erdos-Renyi sampling with rejection of non-planar graphs and graphs
// isomorphic to previously emitted ones. Deterministic given seed.
class InstanceGenerator {
public:
    explicit InstanceGenerator(GenerationConfig config, std::uint64_t seed);

    ColoringInstance next();

private:
    GenerationConfig config_;
    std::mt19937_64 rng_;
    std::vector<Graph> emitted_;
};

// --- DIMACS ------------------------------------------------------------

// Grammar: optional "c ..." comments; one "p edge <n> <m>" line; m lines
// "e <u> <v>" with 1 <= u < v <= n. The chromatic number rides in a
// leading "c chromatic number <k>" comment. Emission sorts edges.
std::string to_dimacs(const ColoringInstance& instance);
ColoringInstance from_dimacs(const std::string& text);

// --- verification ------------------------------------------------------

struct VerifyOptions {
    FeedbackLevel level = FeedbackLevel::FirstError;
    bool reject_non_optimal = true;  // color count must be <= chromatic number
};

// Accepted iff the assignment is total, every edge's endpoints differ, and
// (strict mode) the number of distinct colors used is <= the chromatic
// number.
Verdict verify_coloring(const ColoringInstance& instance, const Coloring& candidate,
                        const VerifyOptions& options = {});

// Violated edges in sorted order.
std::vector<std::pair<int, int>> violated_edges(const Graph& g, const Coloring& candidate);

// Lenient parse of an LLM answer into a coloring ("0: red", "vertex 1 = blue", ...).
std::optional<Coloring> parse_coloring(const std::string& raw, int n);

std::string canonical_form(const Coloring& c);

// Proper coloring with exactly instance.chromatic_number colors.
Coloring solve_coloring(const ColoringInstance& instance);

// --- appendix coloring types -------------------------------------------

struct ColoringSuite {
    Coloring correct;
    Coloring ablated;      // exactly one violated edge
    Coloring non_optimal;  // proper but uses > chromatic_number colors
    Coloring random;       // iid uniform over a palette of chromatic_number colors
};

ColoringSuite generate_coloring_suite(const ColoringInstance& instance, std::mt19937_64& rng);

// --- LLM-critique study ------------------------------------------------

struct CritiqueClaim {
    enum class Kind { EdgeConflict, Other };
    Kind kind = Kind::EdgeConflict;
    int u = -1;
    int v = -1;
    std::optional<std::pair<std::string, std::string>> claimed_colors;
};

enum class HallucinationClass { Vertex, Edge, Both, None };

std::string to_string(HallucinationClass h);

// Lenient extraction of vertex-pair conflict statements from free-form
// critique text. Unmatched text is ignored; claims come out in textual order.
std::vector<CritiqueClaim> parse_llm_critique(const std::string& text);

struct CritiqueClassification {
    std::vector<HallucinationClass> per_claim;
    HallucinationClass instance_label = HallucinationClass::None;
    bool parse_failure = false;  // no claims extracted from a rejection
};

CritiqueClassification classify_critique(const ColoringInstance& instance,
                                         const Coloring& candidate,
                                         const std::vector<CritiqueClaim>& claims);

// --- plumbing ----------------------------------------------------------

std::vector<ColoringInstance> load_instances(const std::string& path);
ProblemInstance make_problem(const ColoringInstance& instance, const std::string& id);

}  // namespace itercheck::coloring
