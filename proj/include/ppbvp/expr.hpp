#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ppbvp {

/// Parse failure; `offset` is the byte position in the input string.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation domain failure (division by zero, sqrt of a negative value,
/// non-integer exponent); `subexpression` names the offending node.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& msg, std::string subexpression)
        : std::runtime_error(msg + " in '" + subexpression + "'"),
          subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

/// Immutable arithmetic expression in the variables x and y.
///
/// Supported syntax: numeric literals, x, y, binary + - * / ^ (integer
/// exponents, ^ binds tightest and associates right), unary minus, and the
/// functions sin, cos, exp, sqrt, abs, step.  step(t) is 0 for t < 0 and 1
/// otherwise, so discontinuous coefficients are written e.g. step(x-0.5).
///
/// Expr values are immutable after parsing and safe to share across threads.
class Expr {
public:
    struct Node;

    Expr() = default;

    /// Parse `text`; throws ParseError with the failing offset.
    static Expr parse(std::string_view text);

    /// Convenience: an expression that evaluates to the constant `v`.
    static Expr constant(double v);

    /// Value at (x, y); throws EvalError on domain failures.
    double eval(double x, double y) const;

    /// Round-trippable rendering: parse(to_string()) evaluates identically.
    std::string to_string() const;

    /// True if the expression references the given variable ("x" or "y").
    bool uses(char var) const;

    bool valid() const { return root_ != nullptr; }

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace ppbvp
