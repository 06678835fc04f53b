#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avpode/core.hpp"
#include "avpode/errors.hpp"

namespace avpode {

/// Syntax error carrying the byte offset and the tokens that were expected.
struct ParseError : Error {
    ParseError(const std::string& message, std::size_t offset_, std::vector<std::string> expected_);

    std::size_t offset;
    std::vector<std::string> expected;
};

struct EvalError : Error {
    using Error::Error;
};

/// Immutable arithmetic expression over x and the state variables y1..yn
/// (plain y is an alias of y1 in one-dimensional systems).
///
/// Grammar (see docs/expression-grammar.md):
///   expression := term (('+' | '-') term)*
///   term       := factor (('*' | '/') factor)*
///   factor     := '-' factor | power
///   power      := primary ('^' exponent)?
///   exponent   := (number | '(' expression ')') ('^' exponent)?
///   primary    := number | variable | function '(' expression ')'
///               | '(' expression ')'
/// '^' binds tighter than unary minus and is right-associative; its exponent
/// must be a literal or parenthesized.
class Expression {
public:
    struct Node;

    explicit Expression(std::shared_ptr<const Node> root);

    double evaluate(double x, std::span<const double> y) const;
    std::string to_string() const;
    bool structurally_equal(const Expression& other) const;

    const std::shared_ptr<const Node>& root() const { return root_; }

private:
    std::shared_ptr<const Node> root_;
};

Expression parse_expression(std::string_view text);

double evaluate(const Expression& expr, double x, std::span<const double> y);

/// Highest state-variable index referenced, 1-based (plain y counts as 1);
/// 0 when the expression involves only x and constants.
int max_state_index(const Expression& expr);

/// Parses one rhs expression per component and packages them as a system.
/// Variables are validated against the dimension; errors are aggregated with
/// component indices.
OdeSystem compile_system(const std::vector<std::string>& texts, int dimension);

}  // namespace avpode
