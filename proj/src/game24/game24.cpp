#include "itercheck/game24/game24.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace itercheck::game24 {

bool G24Instance::well_formed() const {
    return std::all_of(numbers.begin(), numbers.end(),
                       [&](int v) { return v >= 1 && v <= max_value; });
}

char op_char(Op op) {
    switch (op) {
        case Op::Add: return '+';
        case Op::Sub: return '-';
        case Op::Mul: return '*';
        case Op::Div: return '/';
    }
    throw std::logic_error("bad Op");
}

ExprPtr Expr::leaf(int v) {
    auto e = std::make_shared<Expr>();
    e->leaf_value = v;
    return e;
}

ExprPtr Expr::node(Op op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

bool is_24(const ExactValue& v) {
    const auto* r = std::get_if<Rational>(&v);
    return r && r->num == 24 && r->den == 1;
}

std::string value_str(const ExactValue& v) {
    if (std::holds_alternative<DivByZero>(v)) return "undefined";
    return std::get<Rational>(v).str();
}

namespace {

// --- parser -----------------------------------------------------------

struct Parser {
    const std::string& text;
    std::size_t pos = 0;
    std::optional<MalformedError> error;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    std::optional<char> peek() {
        skip_ws();
        if (pos >= text.size()) return std::nullopt;
        return text[pos];
    }

    void fail(const std::string& msg) {
        if (!error) error = MalformedError{msg + " at position " + std::to_string(pos)};
    }

    ExprPtr expr() {
        ExprPtr left = term();
        if (!left) return nullptr;
        while (auto c = peek()) {
            if (*c != '+' && *c != '-') break;
            ++pos;
            ExprPtr right = term();
            if (!right) return nullptr;
            left = Expr::node(*c == '+' ? Op::Add : Op::Sub, left, right);
        }
        return left;
    }

    ExprPtr term() {
        ExprPtr left = factor();
        if (!left) return nullptr;
        while (auto c = peek()) {
            Op op;
            if (*c == '*') op = Op::Mul;
            else if (*c == '/') op = Op::Div;
            else break;
            ++pos;
            ExprPtr right = factor();
            if (!right) return nullptr;
            left = Expr::node(op, left, right);
        }
        return left;
    }

    ExprPtr factor() {
        auto c = peek();
        if (!c) {
            fail("unexpected end of expression");
            return nullptr;
        }
        if (*c == '(') {
            ++pos;
            ExprPtr inner = expr();
            if (!inner) return nullptr;
            if (peek() == ')') {
                ++pos;
                return inner;
            }
            fail("missing closing parenthesis");
            return nullptr;
        }
        if (std::isdigit(static_cast<unsigned char>(*c))) {
            int v = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                v = v * 10 + (text[pos] - '0');
                ++pos;
            }
            return Expr::leaf(v);
        }
        fail(std::string("unexpected character '") + *c + "'");
        return nullptr;
    }
};

std::string normalize_operators(std::string s) {
    // Common unicode variants emitted by LLMs.
    struct Sub {
        const char* from;
        char to;
    };
    static const Sub subs[] = {{"\xc3\x97", '*'},      // multiplication sign
                               {"\xc3\xb7", '/'},      // division sign
                               {"\xe2\x88\x92", '-'},  // minus sign
                               {"\xc2\xb7", '*'}};     // middle dot
    for (const auto& sub : subs) {
        std::size_t n = std::string(sub.from).size();
        for (std::size_t p = s.find(sub.from); p != std::string::npos; p = s.find(sub.from, p)) {
            s.replace(p, n, 1, sub.to);
        }
    }
    for (char& c : s) {
        if (c == 'x' || c == 'X') c = '*';
    }
    return s;
}

}  // namespace

std::variant<ExprPtr, MalformedError> parse_expression(const std::string& text) {
    std::string cleaned = normalize_operators(text);
    Parser p(cleaned);
    ExprPtr e = p.expr();
    if (!e) return p.error.value_or(MalformedError{"empty expression"});
    if (!p.at_end()) return MalformedError{"stray tokens after expression"};
    return e;
}

std::optional<std::string> extract_expression_text(const std::string& raw) {
    std::vector<std::string> lines;
    std::istringstream in(raw);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        std::string line = *it;
        // Drop a leading label like "Answer:".
        if (auto colon = line.find(':'); colon != std::string::npos) {
            bool arithmetic_before = line.find_first_of("0123456789()") < colon;
            if (!arithmetic_before) line = line.substr(colon + 1);
        }
        // Drop an "= ..." tail ("1+1+4+6 = 12" keeps the left side).
        if (auto eq = line.find('='); eq != std::string::npos) line = line.substr(0, eq);
        // Trim.
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r.");
        line = line.substr(first, last - first + 1);
        if (line.empty()) continue;
        if (std::holds_alternative<ExprPtr>(parse_expression(line))) return line;
    }
    return std::nullopt;
}

ExactValue evaluate_exact(const Expr& expr) {
    if (expr.is_leaf()) return Rational(expr.leaf_value, 1);
    ExactValue lv = evaluate_exact(*expr.lhs);
    ExactValue rv = evaluate_exact(*expr.rhs);
    if (std::holds_alternative<DivByZero>(lv) || std::holds_alternative<DivByZero>(rv))
        return DivByZero{};
    const Rational& a = std::get<Rational>(lv);
    const Rational& b = std::get<Rational>(rv);
    switch (expr.op) {
        case Op::Add: return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
        case Op::Sub: return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
        case Op::Mul: return Rational(a.num * b.num, a.den * b.den);
        case Op::Div:
            if (b.num == 0) return DivByZero{};
            return Rational(a.num * b.den, a.den * b.num);
    }
    throw std::logic_error("bad Op");
}

ExactValue evaluate_exact(const ExprPtr& expr) { return evaluate_exact(*expr); }

namespace {
void collect_leaves(const Expr& e, std::vector<int>& out) {
    if (e.is_leaf()) {
        out.push_back(e.leaf_value);
        return;
    }
    collect_leaves(*e.lhs, out);
    collect_leaves(*e.rhs, out);
}
}  // namespace

std::vector<int> leaves(const Expr& expr) {
    std::vector<int> out;
    collect_leaves(expr, out);
    return out;
}

std::string render(const Expr& expr) {
    if (expr.is_leaf()) return std::to_string(expr.leaf_value);
    return "(" + render(*expr.lhs) + op_char(expr.op) + render(*expr.rhs) + ")";
}

namespace {

Critique make_binary_critique() {
    Critique c;
    c.level = FeedbackLevel::Binary;
    c.rendered = "Your previous answer was wrong.";
    return c;
}

Verdict rejected(FeedbackLevel level, const std::string& fault) {
    Verdict v;
    v.accepted = false;
    v.source = VerdictSource::SoundVerifier;
    if (level == FeedbackLevel::Binary) {
        v.critique = make_binary_critique();
    } else {
        Critique c;
        c.level = FeedbackLevel::FirstError;
        c.items = {fault};
        c.rendered = fault;
        v.critique = c;
    }
    return v;
}

}  // namespace

Verdict verify_expression(const G24Instance& instance, const std::string& text,
                          FeedbackLevel level) {
    auto extracted = extract_expression_text(text);
    if (!extracted) return rejected(level, "Your expression was malformed.");
    auto parsed = parse_expression(*extracted);
    if (std::holds_alternative<MalformedError>(parsed))
        return rejected(level, "Your expression was malformed.");
    const ExprPtr& expr = std::get<ExprPtr>(parsed);

    std::vector<int> got = leaves(*expr);
    std::vector<int> want(instance.numbers.begin(), instance.numbers.end());
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
        std::string fault = "Your expression does not use exactly the numbers";
        for (int v : instance.numbers) fault += " " + std::to_string(v);
        fault += ".";
        return rejected(level, fault);
    }

    ExactValue value = evaluate_exact(*expr);
    if (is_24(value)) {
        Verdict v;
        v.accepted = true;
        v.source = VerdictSource::SoundVerifier;
        return v;
    }
    // Keep the shape "<expr>=<value> not 24" grep-able by report scripts.
    std::string shown = *extracted;
    std::erase_if(shown, [](char c) { return c == ' ' || c == '\t'; });
    return rejected(level, shown + "=" + value_str(value) + " not 24");
}

namespace {

// The 5 shapes of a binary tree on 4 leaves, as nesting patterns over
// leaves a,b,c,d and ops o0,o1,o2.
ExprPtr build_shape(int shape, const std::array<int, 4>& lv, const std::array<Op, 3>& ops) {
    auto a = Expr::leaf(lv[0]);
    auto b = Expr::leaf(lv[1]);
    auto c = Expr::leaf(lv[2]);
    auto d = Expr::leaf(lv[3]);
    switch (shape) {
        case 0: return Expr::node(ops[2], Expr::node(ops[1], Expr::node(ops[0], a, b), c), d);
        case 1: return Expr::node(ops[2], Expr::node(ops[1], a, Expr::node(ops[0], b, c)), d);
        case 2: return Expr::node(ops[2], Expr::node(ops[0], a, b), Expr::node(ops[1], c, d));
        case 3: return Expr::node(ops[2], a, Expr::node(ops[1], Expr::node(ops[0], b, c), d));
        case 4: return Expr::node(ops[2], a, Expr::node(ops[1], b, Expr::node(ops[0], c, d)));
    }
    throw std::logic_error("bad shape");
}

constexpr std::array<Op, 4> kAllOps = {Op::Add, Op::Sub, Op::Mul, Op::Div};

}  // namespace

void enumerate_expressions(const G24Instance& instance,
                           const std::function<void(const ExprPtr&)>& visit) {
    std::array<int, 4> nums = instance.numbers;
    std::sort(nums.begin(), nums.end());
    do {
        for (int shape = 0; shape < 5; ++shape) {
            for (Op o0 : kAllOps)
                for (Op o1 : kAllOps)
                    for (Op o2 : kAllOps) visit(build_shape(shape, nums, {o0, o1, o2}));
        }
    } while (std::next_permutation(nums.begin(), nums.end()));
}

std::optional<ExprPtr> solve_brute_force(const G24Instance& instance) {
    std::optional<ExprPtr> witness;
    enumerate_expressions(instance, [&](const ExprPtr& e) {
        if (!witness && is_24(evaluate_exact(*e))) witness = e;
    });
    return witness;
}

namespace {

ExprPtr replace_op_at(const ExprPtr& e, int target, int& counter, Op replacement) {
    if (e->is_leaf()) return e;
    ExprPtr l = replace_op_at(e->lhs, target, counter, replacement);
    ExprPtr r = replace_op_at(e->rhs, target, counter, replacement);
    Op op = (counter++ == target) ? replacement : e->op;
    return Expr::node(op, l, r);
}

ExprPtr replace_leaf_at(const ExprPtr& e, int target, int& counter, int replacement) {
    if (e->is_leaf()) {
        int v = (counter++ == target) ? replacement : e->leaf_value;
        return Expr::leaf(v);
    }
    ExprPtr l = replace_leaf_at(e->lhs, target, counter, replacement);
    ExprPtr r = replace_leaf_at(e->rhs, target, counter, replacement);
    return Expr::node(e->op, l, r);
}

ExprPtr random_expression(const G24Instance& instance, std::mt19937_64& rng) {
    std::array<int, 4> nums = instance.numbers;
    std::shuffle(nums.begin(), nums.end(), rng);
    std::uniform_int_distribution<int> shape_dist(0, 4);
    std::uniform_int_distribution<int> op_dist(0, 3);
    std::array<Op, 3> ops{kAllOps[op_dist(rng)], kAllOps[op_dist(rng)], kAllOps[op_dist(rng)]};
    return build_shape(shape_dist(rng), nums, ops);
}

}  // namespace

ExpressionSuite generate_expression_suite(const G24Instance& instance, const ExprPtr& solution,
                                          std::mt19937_64& rng) {
    if (!verify_expression(instance, render(*solution)).accepted)
        throw std::runtime_error("seed solution does not verify");

    ExpressionSuite suite;
    suite.correct = solution;

    constexpr int kBudget = 1000;
    std::uniform_int_distribution<int> op_pos(0, 2);
    std::uniform_int_distribution<int> op_pick(0, 3);
    for (int tries = 0;; ++tries) {
        if (tries > kBudget) throw std::runtime_error("ablated_op resampling budget exceeded");
        int counter = 0;
        ExprPtr variant = replace_op_at(solution, op_pos(rng), counter, kAllOps[op_pick(rng)]);
        if (render(*variant) == render(*solution)) continue;  // same op chosen
        if (!is_24(evaluate_exact(*variant))) {
            suite.ablated_op = variant;
            break;
        }
    }

    std::uniform_int_distribution<int> leaf_pos(0, 3);
    std::uniform_int_distribution<int> leaf_pick(1, instance.max_value);
    for (int tries = 0;; ++tries) {
        if (tries > kBudget) throw std::runtime_error("ablated_number resampling budget exceeded");
        int pos = leaf_pos(rng);
        int replacement = leaf_pick(rng);
        std::vector<int> lv = leaves(*solution);
        if (lv[pos] == replacement) continue;
        int counter = 0;
        ExprPtr variant = replace_leaf_at(solution, pos, counter, replacement);
        if (!is_24(evaluate_exact(*variant))) {
            suite.ablated_number = variant;
            break;
        }
    }

    for (int tries = 0;; ++tries) {
        if (tries > kBudget) throw std::runtime_error("random resampling budget exceeded");
        ExprPtr variant = random_expression(instance, rng);
        if (!is_24(evaluate_exact(*variant))) {
            suite.random = variant;
            break;
        }
    }
    return suite;
}

std::optional<std::string> canonical_form(const std::string& raw) {
    auto extracted = extract_expression_text(raw);
    if (!extracted) return std::nullopt;
    auto parsed = parse_expression(*extracted);
    if (std::holds_alternative<MalformedError>(parsed)) return std::nullopt;
    return render(*std::get<ExprPtr>(parsed));
}

std::vector<G24Instance> load_instances(const std::string& path, int max_value) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::vector<G24Instance> out;
    std::string line;
    int rank = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++rank;
        std::istringstream ls(line);
        G24Instance inst;
        inst.max_value = max_value;
        for (int i = 0; i < 4; ++i) {
            if (!(ls >> inst.numbers[i]))
                throw std::runtime_error(path + ": line " + std::to_string(rank) +
                                         ": expected four integers");
        }
        int extra;
        if (ls >> extra)
            throw std::runtime_error(path + ": line " + std::to_string(rank) +
                                     ": expected exactly four integers");
        inst.human_difficulty_rank = rank;
        if (!inst.well_formed())
            throw std::runtime_error(path + ": line " + std::to_string(rank) +
                                     ": number out of range");
        out.push_back(inst);
    }
    return out;
}

std::string instances_to_text(const std::vector<G24Instance>& instances) {
    std::string out;
    for (const auto& inst : instances) {
        for (int i = 0; i < 4; ++i) {
            if (i) out += ' ';
            out += std::to_string(inst.numbers[i]);
        }
        out += '\n';
    }
    return out;
}

ProblemInstance make_problem(const G24Instance& instance, const std::string& id) {
    ProblemInstance p;
    p.id = id;
    p.domain_tag = DomainTag::Game24;
    p.payload = instance;
    return p;
}

}  // namespace itercheck::game24
