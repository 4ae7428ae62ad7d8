#include "ppbvp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

namespace ppbvp {

namespace {

enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Exp, Sqrt, Abs, Step };

// Precedence used both by the parser (implicitly, via grammar levels) and by
// the printer: + - < * / < unary - < ^ < atoms.
int precedence(Kind k) {
    switch (k) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Exp: return "exp";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
        case Fn::Step: return "step";
    }
    return "?";
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

struct Expr::Node {
    Kind kind;
    double value = 0.0;   // Number
    char var = 0;         // Var: 'x' or 'y'
    Fn fn = Fn::Sin;      // Call
    std::shared_ptr<const Node> a, b;

    double eval(double x, double y) const;
    std::string print() const;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
}

NodePtr make_var(char c) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Var;
    n->var = c;
    return n;
}

NodePtr make_unary(NodePtr a) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Neg;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_call(Fn f, NodePtr a) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Call;
    n->fn = f;
    n->a = std::move(a);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        if (text_.empty())
            throw ParseError("empty expression", 0);
        NodePtr e = expression();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr e = term();
        for (;;) {
            if (eat('+'))
                e = make_binary(Kind::Add, e, term());
            else if (eat('-'))
                e = make_binary(Kind::Sub, e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (eat('*'))
                e = make_binary(Kind::Mul, e, factor());
            else if (eat('/'))
                e = make_binary(Kind::Div, e, factor());
            else
                return e;
        }
    }

    // factor handles unary minus below ^, so -x^2 parses as -(x^2) and the
    // exponent position admits a sign: x^-3.
    NodePtr factor() {
        if (eat('-'))
            return make_unary(factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^'))
            return make_binary(Kind::Pow, base, factor());  // right associative
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("expected operand", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!eat(')'))
                throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin)
            throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return make_number(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "x" || name == "y") {
            return make_var(name[0]);
        }
        Fn fn;
        if (name == "sin") fn = Fn::Sin;
        else if (name == "cos") fn = Fn::Cos;
        else if (name == "exp") fn = Fn::Exp;
        else if (name == "sqrt") fn = Fn::Sqrt;
        else if (name == "abs") fn = Fn::Abs;
        else if (name == "step") fn = Fn::Step;
        else
            throw ParseError("unknown identifier '" + name + "'", start);
        if (!eat('('))
            throw ParseError("expected '(' after '" + name + "'", pos_);
        NodePtr arg = expression();
        if (!eat(')'))
            throw ParseError("expected ')'", pos_);
        return make_call(fn, arg);
    }
};

double integer_pow(double base, long long n, const Expr::Node& where) {
    if (n < 0) {
        if (base == 0.0)
            throw EvalError("zero raised to a negative power", where.print());
        return 1.0 / integer_pow(base, -n, where);
    }
    double r = 1.0;
    double p = base;
    while (n > 0) {
        if (n & 1) r *= p;
        p *= p;
        n >>= 1;
    }
    return r;
}

}  // namespace

double Expr::Node::eval(double x, double y) const {
    switch (kind) {
        case Kind::Number: return value;
        case Kind::Var: return var == 'x' ? x : y;
        case Kind::Neg: return -a->eval(x, y);
        case Kind::Add: return a->eval(x, y) + b->eval(x, y);
        case Kind::Sub: return a->eval(x, y) - b->eval(x, y);
        case Kind::Mul: return a->eval(x, y) * b->eval(x, y);
        case Kind::Div: {
            double den = b->eval(x, y);
            if (den == 0.0)
                throw EvalError("division by zero", print());
            return a->eval(x, y) / den;
        }
        case Kind::Pow: {
            double base = a->eval(x, y);
            double e = b->eval(x, y);
            double rounded = std::nearbyint(e);
            if (std::abs(e - rounded) > 1e-9 || std::abs(rounded) > 1e9)
                throw EvalError("non-integer exponent", print());
            return integer_pow(base, static_cast<long long>(rounded), *this);
        }
        case Kind::Call: {
            double v = a->eval(x, y);
            switch (fn) {
                case Fn::Sin: return std::sin(v);
                case Fn::Cos: return std::cos(v);
                case Fn::Exp: return std::exp(v);
                case Fn::Sqrt:
                    if (v < 0.0)
                        throw EvalError("sqrt of negative value", print());
                    return std::sqrt(v);
                case Fn::Abs: return std::abs(v);
                case Fn::Step: return v < 0.0 ? 0.0 : 1.0;
            }
        }
    }
    return 0.0;  // unreachable
}

std::string Expr::Node::print() const {
    auto child = [](const Node& n, bool parens) {
        std::string s = n.print();
        return parens ? "(" + s + ")" : s;
    };
    switch (kind) {
        case Kind::Number: return format_number(value);
        case Kind::Var: return std::string(1, var);
        case Kind::Neg:
            return "-" + child(*a, precedence(a->kind) < precedence(Kind::Neg));
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            int p = precedence(kind);
            const char* op = kind == Kind::Add ? "+" : kind == Kind::Sub ? "-"
                           : kind == Kind::Mul ? "*" : "/";
            // Left-associative: an equal-precedence right child keeps its
            // parentheses so the reparsed tree evaluates identically.
            return child(*a, precedence(a->kind) < p) + op +
                   child(*b, precedence(b->kind) <= p);
        }
        case Kind::Pow:
            // Right-associative, binds tightest.
            return child(*a, precedence(a->kind) <= precedence(Kind::Pow)) + "^" +
                   child(*b, precedence(b->kind) < precedence(Kind::Pow));
        case Kind::Call:
            return std::string(fn_name(fn)) + "(" + a->print() + ")";
    }
    return "?";
}

Expr Expr::parse(std::string_view text) {
    Parser p(text);
    return Expr(p.run());
}

Expr Expr::constant(double v) { return Expr(make_number(v)); }

double Expr::eval(double x, double y) const {
    if (!root_)
        throw EvalError("empty expression", "");
    return root_->eval(x, y);
}

std::string Expr::to_string() const { return root_ ? root_->print() : ""; }

bool Expr::uses(char var) const {
    if (!root_) return false;
    // Iterative walk; expressions are small but may be deep.
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (n->kind == Kind::Var && n->var == var) return true;
        if (n->a) stack.push_back(n->a.get());
        if (n->b) stack.push_back(n->b.get());
    }
    return false;
}

}  // namespace ppbvp
