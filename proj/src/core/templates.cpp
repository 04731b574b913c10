#include "itercheck/core/templates.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace itercheck {

namespace {

struct BuiltinEntry {
    const char* key;
    const char* text;
};

const BuiltinEntry kBuiltin[] = {
    // --- game24 ---
    {"game24/generate",
     "Use the numbers {instance} exactly once each, with the operations + - * / and "
     "parentheses, to construct an arithmetic expression that evaluates to exactly 24.\n"
     "Output only the expression on the final line.\n"},
    {"game24/history_item",
     "You previously proposed:\n{answer}\nIt received this feedback:\n{feedback}\n\n"},
    {"game24/last_answer", "Your most recent proposal was:\n{answer}\n\n"},
    {"game24/critique_wrap",
     "{critique}\nTaking this feedback into account, try again. Output only the new "
     "expression on the final line.\n"},
    {"game24/verify_direct",
     "Consider the following Game of 24 puzzle: combine the numbers {instance} with + - * / "
     "and parentheses to reach exactly 24.\nProposed expression:\n{candidate}\n"
     "Is the proposed expression a correct solution? Answer on the final line with exactly "
     "'Verdict: correct' or 'Verdict: incorrect'. If it is incorrect, briefly explain the "
     "error first.\n"},
    {"game24/verify_cot",
     "Consider the following Game of 24 puzzle: combine the numbers {instance} with + - * / "
     "and parentheses to reach exactly 24.\nProposed expression:\n{candidate}\n"
     "First evaluate the expression step by step, showing your reasoning. Then answer on "
     "the final line with exactly 'Verdict: correct' or 'Verdict: incorrect'.\n"},
    {"game24/verify_swapped",
     "Consider the following Game of 24 puzzle: combine the numbers {instance} with + - * / "
     "and parentheses to reach exactly 24.\nProposed expression:\n{candidate}\n"
     "Answer on the first line with exactly 'Verdict: correct' or 'Verdict: incorrect', "
     "then explain your answer.\n"},
    // --- coloring ---
    {"coloring/generate",
     "Color the following graph, described in DIMACS format, using at most the optimal "
     "number of colors stated in the comment, so that no two adjacent vertices share a "
     "color.\n{instance}\nOutput one line per vertex in the form '<vertex>: <color>'.\n"},
    {"coloring/history_item",
     "You previously proposed:\n{answer}\nIt received this feedback:\n{feedback}\n\n"},
    {"coloring/last_answer", "Your most recent proposal was:\n{answer}\n\n"},
    {"coloring/critique_wrap",
     "{critique}\nTaking this feedback into account, produce a new coloring. Output one "
     "line per vertex in the form '<vertex>: <color>'.\n"},
    {"coloring/verify_direct",
     "Consider the following graph coloring problem in DIMACS format:\n{instance}\n"
     "Proposed coloring:\n{candidate}\n"
     "Is the proposed coloring correct, i.e. no two adjacent vertices share a color and it "
     "uses at most the optimal number of colors? Answer on the final line with exactly "
     "'Verdict: correct' or 'Verdict: incorrect'. If it is incorrect, point out a violated "
     "edge first, e.g. 'Vertices 1 and 3 were both colored red.'\n"},
    {"coloring/verify_cot",
     "Consider the following graph coloring problem in DIMACS format:\n{instance}\n"
     "Proposed coloring:\n{candidate}\n"
     "Check every edge one by one, stating the colors of both endpoints. Then answer on "
     "the final line with exactly 'Verdict: correct' or 'Verdict: incorrect'.\n"},
    {"coloring/verify_swapped",
     "Consider the following graph coloring problem in DIMACS format:\n{instance}\n"
     "Proposed coloring:\n{candidate}\n"
     "Answer on the first line with exactly 'Verdict: correct' or 'Verdict: incorrect', "
     "then justify your answer by checking the edges.\n"},
    // --- strips ---
    {"strips/generate",
     "Solve the following planning problem.\n{instance}\n"
     "Output the plan as one ground action per line, e.g. '(stack a b)', and nothing "
     "else after it.\n"},
    {"strips/history_item",
     "You previously proposed:\n{answer}\nIt received this feedback:\n{feedback}\n\n"},
    {"strips/last_answer", "Your most recent proposal was:\n{answer}\n\n"},
    {"strips/critique_wrap",
     "{critique}\nTaking this feedback into account, produce a new plan. Output one ground "
     "action per line and nothing else after it.\n"},
    {"strips/verify_direct",
     "Consider the following planning problem.\n{instance}\nProposed plan:\n{candidate}\n"
     "Is the proposed plan valid, i.e. every action is executable in sequence from the "
     "initial state and the final state satisfies the goal?\n"
     "Respond in this format:\nVerdict: valid | invalid\n"
     "Type: inexecutable | non-goal-reaching   (only if invalid)\n"
     "Failed step: <number>                     (only if inexecutable)\n"
     "Unmet preconditions: (<atom>) ...         (only if inexecutable)\n"
     "Unmet goals: (<atom>) ...                 (only if non-goal-reaching)\n"},
    {"strips/verify_cot",
     "Consider the following planning problem.\n{instance}\nProposed plan:\n{candidate}\n"
     "Simulate the plan action by action, stating the state changes. Then respond in this "
     "format:\nVerdict: valid | invalid\nType: inexecutable | non-goal-reaching\n"
     "Failed step: <number>\nUnmet preconditions: (<atom>) ...\nUnmet goals: (<atom>) ...\n"},
    {"strips/verify_swapped",
     "Consider the following planning problem.\n{instance}\nProposed plan:\n{candidate}\n"
     "Respond first with 'Verdict: valid' or 'Verdict: invalid', then explain, including "
     "Type, Failed step, Unmet preconditions or Unmet goals lines as applicable.\n"},
};

}  // namespace

const std::vector<std::string>& TemplateSet::slot_names() {
    static const std::vector<std::string> slots = {
        "generate",      "history_item", "last_answer",   "critique_wrap",
        "verify_direct", "verify_cot",   "verify_swapped"};
    return slots;
}

TemplateSet TemplateSet::builtin_default() {
    TemplateSet set;
    set.id_ = "default";
    for (const auto& e : kBuiltin) set.texts_[e.key] = e.text;
    return set;
}

TemplateSet TemplateSet::load(const std::string& dir, const std::string& id) {
    TemplateSet set = builtin_default();
    set.id_ = id;
    for (DomainTag tag : {DomainTag::Game24, DomainTag::Coloring, DomainTag::Strips}) {
        for (const auto& slot : slot_names()) {
            std::filesystem::path path =
                std::filesystem::path(dir) / to_string(tag) / (slot + ".txt");
            std::ifstream in(path);
            if (!in) continue;
            std::ostringstream ss;
            ss << in.rdbuf();
            set.texts_[to_string(tag) + "/" + slot] = ss.str();
        }
    }
    return set;
}

const std::string& TemplateSet::raw(DomainTag domain, const std::string& slot) const {
    auto it = texts_.find(to_string(domain) + "/" + slot);
    if (it == texts_.end())
        throw std::out_of_range("no template for " + to_string(domain) + "/" + slot);
    return it->second;
}

std::string TemplateSet::substitute(const std::string& text,
                                    const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '{') {
            auto close = text.find('}', i);
            if (close != std::string::npos) {
                std::string key = text.substr(i + 1, close - i - 1);
                auto it = values.find(key);
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += text[i++];
    }
    return out;
}

std::string TemplateSet::render(DomainTag domain, const std::string& slot,
                                const std::map<std::string, std::string>& values) const {
    return substitute(raw(domain, slot), values);
}

std::map<std::string, std::string> TemplateSet::all() const { return texts_; }

}  // namespace itercheck
