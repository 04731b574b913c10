#include "itercheck/strips/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace itercheck::strips {

std::string Atom::str() const {
    std::string out = "(" + pred;
    for (const auto& a : args) out += " " + a;
    return out + ")";
}

bool Atom::ground() const {
    return std::none_of(args.begin(), args.end(),
                        [](const std::string& a) { return !a.empty() && a[0] == '?'; });
}

std::string GroundAction::str() const {
    std::string out = "(" + name;
    for (const auto& a : args) out += " " + a;
    return out + ")";
}

std::string Plan::str() const {
    std::string out;
    for (const auto& s : steps) {
        out += s.str();
        out += '\n';
    }
    return out;
}

const ActionSchema* DomainDef::find_action(const std::string& n) const {
    for (const auto& a : actions)
        if (a.name == n) return &a;
    return nullptr;
}

std::optional<int> DomainDef::predicate_arity(const std::string& n) const {
    for (const auto& [name, arity] : predicates)
        if (name == n) return arity;
    return std::nullopt;
}

namespace {

// --- s-expressions -----------------------------------------------------

struct SExpr {
    // Either an atom token or a list.
    std::string token;
    std::vector<SExpr> list;
    bool is_list = false;
    int line = 0, column = 0;
};

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, column = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {  // comment to end of line
                while (pos < text.size() && text[pos] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr parse() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", line, column);
        SExpr e;
        e.line = line;
        e.column = column;
        if (text[pos] == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_ws();
                if (pos >= text.size())
                    throw ParseError("unclosed parenthesis", e.line, e.column);
                if (text[pos] == ')') {
                    advance();
                    return e;
                }
                e.list.push_back(parse());
            }
        }
        if (text[pos] == ')') throw ParseError("unexpected ')'", line, column);
        std::string tok;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')' && text[pos] != ';') {
            tok += static_cast<char>(
                std::tolower(static_cast<unsigned char>(text[pos])));
            advance();
        }
        e.token = tok;
        return e;
    }
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.column);
}

const SExpr& expect_list(const SExpr& e, const std::string& what) {
    if (!e.is_list) fail(e, "expected " + what);
    return e;
}

std::string head(const SExpr& e) {
    if (!e.is_list || e.list.empty() || e.list[0].is_list) return "";
    return e.list[0].token;
}

Atom parse_atom(const SExpr& e) {
    expect_list(e, "an atom");
    if (e.list.empty() || e.list[0].is_list) fail(e, "expected a predicate name");
    Atom a;
    a.pred = e.list[0].token;
    for (std::size_t i = 1; i < e.list.size(); ++i) {
        if (e.list[i].is_list) fail(e.list[i], "expected a simple argument");
        a.args.push_back(e.list[i].token);
    }
    return a;
}

std::vector<Atom> parse_conjunction(const SExpr& e) {
    std::vector<Atom> atoms;
    if (head(e) == "and") {
        for (std::size_t i = 1; i < e.list.size(); ++i) atoms.push_back(parse_atom(e.list[i]));
    } else {
        atoms.push_back(parse_atom(e));
    }
    return atoms;
}

void check_atom(const SExpr& at, const Atom& a, const DomainDef& domain,
                const std::vector<std::string>& allowed_args) {
    auto arity = domain.predicate_arity(a.pred);
    if (!arity) fail(at, "unknown predicate '" + a.pred + "'");
    if (*arity != static_cast<int>(a.args.size()))
        fail(at, "predicate '" + a.pred + "' expects " + std::to_string(*arity) +
                     " arguments, got " + std::to_string(a.args.size()));
    for (const auto& arg : a.args) {
        if (std::find(allowed_args.begin(), allowed_args.end(), arg) == allowed_args.end())
            fail(at, "unknown name '" + arg + "' in " + a.str());
    }
}

}  // namespace

DomainDef parse_domain(const std::string& text) {
    Lexer lex(text);
    SExpr root = lex.parse();
    if (head(root) != "define") fail(root, "expected (define (domain ...) ...)");
    DomainDef d;
    std::set<std::string> pred_names, action_names;
    for (std::size_t i = 1; i < root.list.size(); ++i) {
        const SExpr& sec = root.list[i];
        std::string h = head(sec);
        if (h == "domain") {
            if (sec.list.size() != 2 || sec.list[1].is_list) fail(sec, "expected (domain <name>)");
            d.name = sec.list[1].token;
        } else if (h == ":requirements") {
            for (std::size_t j = 1; j < sec.list.size(); ++j) {
                if (sec.list[j].token != ":strips" && sec.list[j].token != ":typing")
                    fail(sec.list[j], "unsupported requirement '" + sec.list[j].token + "'");
                if (sec.list[j].token == ":typing")
                    fail(sec.list[j], "typed domains are not supported");
            }
        } else if (h == ":predicates") {
            for (std::size_t j = 1; j < sec.list.size(); ++j) {
                Atom a = parse_atom(sec.list[j]);
                if (!pred_names.insert(a.pred).second)
                    fail(sec.list[j], "duplicate predicate '" + a.pred + "'");
                d.predicates.push_back({a.pred, static_cast<int>(a.args.size())});
            }
        } else if (h == ":action") {
            if (sec.list.size() < 2 || sec.list[1].is_list) fail(sec, "expected an action name");
            ActionSchema schema;
            schema.name = sec.list[1].token;
            if (!action_names.insert(schema.name).second)
                fail(sec, "duplicate action '" + schema.name + "'");
            for (std::size_t j = 2; j + 1 < sec.list.size(); j += 2) {
                const std::string& key = sec.list[j].token;
                const SExpr& val = sec.list[j + 1];
                if (key == ":parameters") {
                    expect_list(val, "a parameter list");
                    for (const auto& p : val.list) {
                        if (p.is_list || p.token.empty() || p.token[0] != '?')
                            fail(p, "parameters must be ?variables");
                        schema.parameters.push_back(p.token);
                    }
                } else if (key == ":precondition") {
                    schema.preconditions = parse_conjunction(val);
                } else if (key == ":effect") {
                    std::vector<const SExpr*> effects;
                    if (head(val) == "and") {
                        for (std::size_t k = 1; k < val.list.size(); ++k)
                            effects.push_back(&val.list[k]);
                    } else {
                        effects.push_back(&val);
                    }
                    for (const SExpr* eff : effects) {
                        if (head(*eff) == "not") {
                            if (eff->list.size() != 2) fail(*eff, "expected (not (atom))");
                            schema.del_effects.push_back(parse_atom(eff->list[1]));
                        } else {
                            schema.add_effects.push_back(parse_atom(*eff));
                        }
                    }
                } else {
                    fail(sec.list[j], "unexpected key '" + key + "' in action");
                }
            }
            // Validate literals against declared predicates and parameters.
            for (const Atom* a : [&] {
                     std::vector<const Atom*> all;
                     for (const auto& x : schema.preconditions) all.push_back(&x);
                     for (const auto& x : schema.add_effects) all.push_back(&x);
                     for (const auto& x : schema.del_effects) all.push_back(&x);
                     return all;
                 }()) {
                check_atom(sec, *a, d, schema.parameters);
            }
            for (const auto& add : schema.add_effects) {
                if (std::find(schema.del_effects.begin(), schema.del_effects.end(), add) !=
                    schema.del_effects.end())
                    fail(sec, "literal " + add.str() + " appears in both add and delete effects");
            }
            d.actions.push_back(std::move(schema));
        } else {
            fail(sec, "unexpected section '" + h + "'");
        }
    }
    if (d.name.empty()) fail(root, "missing (domain <name>)");
    return d;
}

ProblemDef parse_problem(const std::string& text, const DomainDef& domain) {
    Lexer lex(text);
    SExpr root = lex.parse();
    if (head(root) != "define") fail(root, "expected (define (problem ...) ...)");
    ProblemDef p;
    for (std::size_t i = 1; i < root.list.size(); ++i) {
        const SExpr& sec = root.list[i];
        std::string h = head(sec);
        if (h == "problem") {
            if (sec.list.size() != 2 || sec.list[1].is_list)
                fail(sec, "expected (problem <name>)");
            p.name = sec.list[1].token;
        } else if (h == ":domain") {
            if (sec.list.size() != 2 || sec.list[1].token != domain.name)
                fail(sec, "problem references domain '" +
                              (sec.list.size() == 2 ? sec.list[1].token : "") +
                              "', expected '" + domain.name + "'");
        } else if (h == ":objects") {
            for (std::size_t j = 1; j < sec.list.size(); ++j) {
                if (sec.list[j].is_list) fail(sec.list[j], "objects must be simple names");
                p.objects.push_back(sec.list[j].token);
            }
        } else if (h == ":init") {
            for (std::size_t j = 1; j < sec.list.size(); ++j) {
                Atom a = parse_atom(sec.list[j]);
                check_atom(sec.list[j], a, domain, p.objects);
                p.init.insert(std::move(a));
            }
        } else if (h == ":goal") {
            if (sec.list.size() != 2) fail(sec, "expected (:goal <conjunction>)");
            for (Atom& a : parse_conjunction(sec.list[1])) {
                check_atom(sec.list[1], a, domain, p.objects);
                p.goal.insert(std::move(a));
            }
        } else {
            fail(sec, "unexpected section '" + h + "'");
        }
    }
    return p;
}

namespace {

std::optional<GroundAction> parse_action_line(const std::string& line, const DomainDef& domain,
                                              const ProblemDef& problem, std::string* error) {
    // Lenient tokenization: strip parens, numbering like "1.", commas.
    std::string cleaned;
    for (char c : line) {
        if (c == '(' || c == ')' || c == ',') cleaned += ' ';
        else cleaned += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    std::istringstream in(cleaned);
    std::vector<std::string> toks;
    for (std::string t; in >> t;) toks.push_back(t);
    // Drop a leading "3." / "step" marker.
    while (!toks.empty() &&
           (toks.front() == "step" ||
            (std::isdigit(static_cast<unsigned char>(toks.front()[0])) &&
             toks.front().back() == '.') ||
            std::all_of(toks.front().begin(), toks.front().end(),
                        [](unsigned char c) { return std::isdigit(c) || c == '.' || c == ':'; })))
        toks.erase(toks.begin());
    if (toks.empty()) {
        if (error) *error = "empty step";
        return std::nullopt;
    }
    const ActionSchema* schema = domain.find_action(toks[0]);
    if (!schema) {
        if (error) *error = "unknown action '" + toks[0] + "'";
        return std::nullopt;
    }
    GroundAction a;
    a.name = toks[0];
    for (std::size_t i = 1; i < toks.size(); ++i) {
        if (std::find(problem.objects.begin(), problem.objects.end(), toks[i]) ==
            problem.objects.end()) {
            if (error) *error = "unknown object '" + toks[i] + "'";
            return std::nullopt;
        }
        a.args.push_back(toks[i]);
    }
    if (a.args.size() != schema->parameters.size()) {
        if (error)
            *error = "action '" + a.name + "' expects " +
                     std::to_string(schema->parameters.size()) + " arguments, got " +
                     std::to_string(a.args.size());
        return std::nullopt;
    }
    return a;
}

}  // namespace

Plan parse_plan(const std::string& text, const DomainDef& domain, const ProblemDef& problem) {
    Plan plan;
    std::istringstream in(text);
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string error;
        auto action = parse_action_line(line, domain, problem, &error);
        if (!action) throw ParseError(error, lineno, 1);
        plan.steps.push_back(std::move(*action));
    }
    return plan;
}

std::optional<std::string> extract_plan_text(const std::string& raw, const DomainDef& domain,
                                             const ProblemDef& problem) {
    std::vector<std::string> lines;
    std::istringstream in(raw);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    while (!lines.empty() &&
           lines.back().find_first_not_of(" \t\r") == std::string::npos)
        lines.pop_back();
    std::size_t start = lines.size();
    while (start > 0) {
        const std::string& line = lines[start - 1];
        if (line.find_first_not_of(" \t\r") == std::string::npos) break;
        if (!parse_action_line(line, domain, problem, nullptr)) break;
        --start;
    }
    if (start == lines.size()) return std::nullopt;
    std::string out;
    for (std::size_t i = start; i < lines.size(); ++i) {
        out += lines[i];
        out += '\n';
    }
    return out;
}

std::string render_domain(const DomainDef& domain) {
    std::string out = "(define (domain " + domain.name + ")\n  (:requirements :strips)\n";
    out += "  (:predicates";
    for (const auto& [name, arity] : domain.predicates) {
        out += " (" + name;
        for (int i = 0; i < arity; ++i) out += " ?x" + std::to_string(i);
        out += ")";
    }
    out += ")\n";
    for (const auto& a : domain.actions) {
        out += "  (:action " + a.name + "\n    :parameters (";
        for (std::size_t i = 0; i < a.parameters.size(); ++i) {
            if (i) out += " ";
            out += a.parameters[i];
        }
        out += ")\n    :precondition (and";
        for (const auto& pre : a.preconditions) out += " " + pre.str();
        out += ")\n    :effect (and";
        for (const auto& add : a.add_effects) out += " " + add.str();
        for (const auto& del : a.del_effects) out += " (not " + del.str() + ")";
        out += "))\n";
    }
    out += ")\n";
    return out;
}

std::string render_problem(const ProblemDef& problem, const DomainDef& domain) {
    std::string out = "(define (problem " + problem.name + ")\n  (:domain " + domain.name + ")\n";
    out += "  (:objects";
    for (const auto& o : problem.objects) out += " " + o;
    out += ")\n  (:init";
    for (const auto& a : problem.init) out += " " + a.str();
    out += ")\n  (:goal (and";
    for (const auto& a : problem.goal) out += " " + a.str();
    out += ")))\n";
    return out;
}

}  // namespace itercheck::strips
