#include "avpode/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <utility>

namespace avpode {

namespace {

enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += i + 1 == items.size() ? " or " : ", ";
        out += items[i];
    }
    return out;
}

}  // namespace

struct Expression::Node {
    enum class Kind { Number, VarX, VarY, Negate, Binary, Call };

    Kind kind = Kind::Number;
    double number = 0.0;
    int y_index = 0;       // 0-based component for VarY
    bool y_alias = false;  // written as plain "y"
    char op = 0;           // one of + - * / ^
    Func func = Func::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_ws();
        if (at_end()) {
            fail("empty input", {"expression"});
        }
        NodePtr root = parse_expression();
        skip_ws();
        if (!at_end()) {
            fail("unexpected trailing input", {"operator", "end of input"});
        }
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
        std::ostringstream os;
        os << "syntax error at offset " << pos_ << ": " << what;
        if (!expected.empty()) {
            os << " (expected " << join(expected) << ")";
        }
        throw ParseError(os.str(), pos_, std::move(expected));
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* token) {
        if (!accept(c)) {
            skip_ws();
            fail(at_end() ? "unexpected end of input" : std::string("unexpected '") + (at_end() ? ' ' : peek()) + "'",
                 {token});
        }
    }

    NodePtr parse_expression() {
        NodePtr node = parse_term();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                node = make_binary('+', node, parse_term());
            } else if (accept('-')) {
                node = make_binary('-', node, parse_term());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr node = parse_factor();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                node = make_binary('*', node, parse_factor());
            } else if (accept('/')) {
                node = make_binary('/', node, parse_factor());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_factor() {
        skip_ws();
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Negate;
            n->lhs = parse_factor();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        if (accept('^')) {
            return make_binary('^', base, parse_exponent());
        }
        return base;
    }

    // The exponent is restricted to a literal or a parenthesized expression;
    // chains associate to the right.
    NodePtr parse_exponent() {
        skip_ws();
        NodePtr head;
        if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
            head = parse_number();
        } else if (accept('(')) {
            head = parse_expression();
            expect(')', "')'");
        } else {
            fail(at_end() ? "unexpected end of input" : "invalid exponent",
                 {"number", "'('"});
        }
        skip_ws();
        if (accept('^')) {
            return make_binary('^', head, parse_exponent());
        }
        return head;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (at_end()) {
            fail("unexpected end of input", {"number", "identifier", "'('"});
        }
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expression();
            expect(')', "')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        fail(std::string("unexpected '") + c + "'", {"number", "identifier", "'('"});
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (!at_end() && peek() == '.') {
            ++pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
            pos_ = start;
            fail("invalid number", {"digit"});
        }
        // Exponent suffix only when it is complete; otherwise `e` starts an
        // identifier token and errors there.
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t probe = pos_ + 1;
            if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
            if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
                pos_ = probe;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            }
        }
        const std::string token(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) {
            pos_ = start;
            fail("invalid number", {"number"});
        }
        return make_number(value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            ++pos_;
        }
        const std::string_view id = text_.substr(start, pos_ - start);
        if (id == "x") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::VarX;
            return n;
        }
        if (id == "y") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::VarY;
            n->y_index = 0;
            n->y_alias = true;
            return n;
        }
        if (id.size() > 1 && id[0] == 'y') {
            bool digits = true;
            for (std::size_t i = 1; i < id.size(); ++i) {
                digits = digits && std::isdigit(static_cast<unsigned char>(id[i]));
            }
            if (digits) {
                int index = 0;
                std::from_chars(id.data() + 1, id.data() + id.size(), index);
                if (index < 1) {
                    pos_ = start;
                    fail("unknown identifier '" + std::string(id) + "'", {"y1..yn"});
                }
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::VarY;
                n->y_index = index - 1;
                return n;
            }
        }
        for (Func f : {Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Ln, Func::Sqrt, Func::Abs}) {
            if (id == func_name(f)) {
                expect('(', "'('");
                NodePtr arg = parse_expression();
                expect(')', "')'");
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Call;
                n->func = f;
                n->lhs = std::move(arg);
                return n;
            }
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'",
             {"x", "y", "y<k>", "sin", "cos", "tan", "exp", "ln", "sqrt", "abs"});
    }
};

double eval_node(const Node& node, double x, std::span<const double> y) {
    switch (node.kind) {
        case Node::Kind::Number:
            return node.number;
        case Node::Kind::VarX:
            return x;
        case Node::Kind::VarY:
            if (node.y_alias && y.size() != 1) {
                throw EvalError("variable 'y' is only bound in one-dimensional systems; "
                                "use y1..yn");
            }
            if (static_cast<std::size_t>(node.y_index) >= y.size()) {
                throw EvalError("unbound variable y" + std::to_string(node.y_index + 1));
            }
            return y[static_cast<std::size_t>(node.y_index)];
        case Node::Kind::Negate:
            return -eval_node(*node.lhs, x, y);
        case Node::Kind::Binary: {
            const double l = eval_node(*node.lhs, x, y);
            const double r = eval_node(*node.rhs, x, y);
            switch (node.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/': return l / r;
                case '^': return std::pow(l, r);
            }
            throw EvalError("unknown operator");
        }
        case Node::Kind::Call: {
            const double a = eval_node(*node.lhs, x, y);
            switch (node.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Tan: return std::tan(a);
                case Func::Exp: return std::exp(a);
                case Func::Ln: return std::log(a);
                case Func::Sqrt: return std::sqrt(a);
                case Func::Abs: return std::fabs(a);
            }
            throw EvalError("unknown function");
        }
    }
    throw EvalError("unknown node kind");
}

void print_node(const Node& node, std::string& out) {
    switch (node.kind) {
        case Node::Kind::Number: {
            std::ostringstream os;
            os.precision(17);
            os << node.number;
            out += os.str();
            return;
        }
        case Node::Kind::VarX:
            out += 'x';
            return;
        case Node::Kind::VarY:
            if (node.y_alias) {
                out += 'y';
            } else {
                out += 'y' + std::to_string(node.y_index + 1);
            }
            return;
        case Node::Kind::Negate:
            out += "(-";
            print_node(*node.lhs, out);
            out += ')';
            return;
        case Node::Kind::Binary:
            if (node.op == '^') {
                out += '(';
                print_node(*node.lhs, out);
                out += '^';
                if (node.rhs->kind == Node::Kind::Number) {
                    print_node(*node.rhs, out);
                } else {
                    out += '(';
                    print_node(*node.rhs, out);
                    out += ')';
                }
                out += ')';
                return;
            }
            out += '(';
            print_node(*node.lhs, out);
            out += node.op;
            print_node(*node.rhs, out);
            out += ')';
            return;
        case Node::Kind::Call:
            out += func_name(node.func);
            out += '(';
            print_node(*node.lhs, out);
            out += ')';
            return;
    }
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Number:
            return a.number == b.number;
        case Node::Kind::VarX:
            return true;
        case Node::Kind::VarY:
            return a.y_index == b.y_index && a.y_alias == b.y_alias;
        case Node::Kind::Negate:
            return nodes_equal(*a.lhs, *b.lhs);
        case Node::Kind::Binary:
            return a.op == b.op && nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
        case Node::Kind::Call:
            return a.func == b.func && nodes_equal(*a.lhs, *b.lhs);
    }
    return false;
}

// Highest state variable index referenced (1-based), 0 when none; flags use
// of the plain-y alias.
void scan_variables(const Node& node, int& max_index, bool& uses_alias) {
    switch (node.kind) {
        case Node::Kind::VarY:
            if (node.y_alias) {
                uses_alias = true;
            }
            max_index = std::max(max_index, node.y_index + 1);
            return;
        case Node::Kind::Negate:
        case Node::Kind::Call:
            scan_variables(*node.lhs, max_index, uses_alias);
            return;
        case Node::Kind::Binary:
            scan_variables(*node.lhs, max_index, uses_alias);
            scan_variables(*node.rhs, max_index, uses_alias);
            return;
        default:
            return;
    }
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset_,
                       std::vector<std::string> expected_)
    : Error(message), offset(offset_), expected(std::move(expected_)) {}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {
    if (!root_) {
        throw InvalidArgumentError("expression needs a root node");
    }
}

double Expression::evaluate(double x, std::span<const double> y) const {
    return eval_node(*root_, x, y);
}

std::string Expression::to_string() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Expression::structurally_equal(const Expression& other) const {
    return nodes_equal(*root_, *other.root_);
}

Expression parse_expression(std::string_view text) {
    return Expression(Parser(text).parse());
}

double evaluate(const Expression& expr, double x, std::span<const double> y) {
    return expr.evaluate(x, y);
}

int max_state_index(const Expression& expr) {
    int max_index = 0;
    bool uses_alias = false;
    scan_variables(*expr.root(), max_index, uses_alias);
    return max_index;
}

OdeSystem compile_system(const std::vector<std::string>& texts, int dimension) {
    if (dimension < 1) {
        throw InvalidArgumentError("dimension must be positive");
    }
    if (static_cast<int>(texts.size()) != dimension) {
        throw InvalidArgumentError("expected " + std::to_string(dimension) +
                                   " rhs expressions, got " + std::to_string(texts.size()));
    }
    auto exprs = std::make_shared<std::vector<Expression>>();
    exprs->reserve(texts.size());
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        try {
            Expression e = parse_expression(texts[i]);
            int max_index = 0;
            bool uses_alias = false;
            scan_variables(*e.root(), max_index, uses_alias);
            if (uses_alias && dimension != 1) {
                problems.push_back("component " + std::to_string(i + 1) +
                                   ": 'y' is ambiguous for dimension " +
                                   std::to_string(dimension) + "; use y1..y" +
                                   std::to_string(dimension));
            } else if (max_index > dimension) {
                problems.push_back("component " + std::to_string(i + 1) +
                                   ": unknown identifier 'y" + std::to_string(max_index) +
                                   "' (dimension is " + std::to_string(dimension) + ")");
            } else {
                exprs->push_back(std::move(e));
            }
        } catch (const ParseError& e) {
            problems.push_back("component " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string msg;
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (i > 0) msg += "; ";
            msg += problems[i];
        }
        throw InvalidArgumentError(msg);
    }
    return OdeSystem::single(dimension, [exprs](double x, std::span<const double> y,
                                                std::span<double> out) {
        for (std::size_t i = 0; i < exprs->size(); ++i) {
            out[i] = (*exprs)[i].evaluate(x, y);
        }
    });
}

}  // namespace avpode
