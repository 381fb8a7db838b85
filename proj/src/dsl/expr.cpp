#include <cmath>
#include <cstdio>

#include "fbmsde/error.hpp"
#include "fbmsde/expr.hpp"

namespace fbmsde {

// A null node is the constant 0; this keeps default-constructed child slots
// in ExprNode free of allocations.
namespace {
const Expr& empty_expr() {
    static const Expr e;
    return e;
}

const std::string& empty_name() {
    static const std::string s;
    return s;
}

bool is_binary(ExprOp op) {
    return op == ExprOp::add || op == ExprOp::sub || op == ExprOp::mul || op == ExprOp::div;
}

bool is_function(ExprOp op) {
    return op == ExprOp::sin || op == ExprOp::cos || op == ExprOp::exp || op == ExprOp::tanh;
}

double apply_function(ExprOp op, double v) {
    switch (op) {
        case ExprOp::sin: return std::sin(v);
        case ExprOp::cos: return std::cos(v);
        case ExprOp::exp: return std::exp(v);
        case ExprOp::tanh: return std::tanh(v);
        default: return v;
    }
}

double integer_power(double base, int k) {
    if (k < 0) return 1.0 / integer_power(base, -k);
    double result = 1.0;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}
}  // namespace

Expr::Expr() = default;

Expr Expr::constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::constant;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::param(std::string name) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::param;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::var() {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::var;
    return Expr(std::move(n));
}

Expr Expr::unary(ExprOp op, Expr operand) {
    if (operand.op() == ExprOp::constant) {
        const double v = operand.value();
        if (op == ExprOp::neg) return constant(-v);
        const double folded = apply_function(op, v);
        if (std::isfinite(folded)) return constant(folded);
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(operand);
    return Expr(std::move(n));
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs) {
    const bool lc = lhs.op() == ExprOp::constant;
    const bool rc = rhs.op() == ExprOp::constant;
    if (lc && rc) {
        const double a = lhs.value();
        const double b = rhs.value();
        switch (op) {
            case ExprOp::add: return constant(a + b);
            case ExprOp::sub: return constant(a - b);
            case ExprOp::mul: return constant(a * b);
            case ExprOp::div:
                if (b != 0.0) return constant(a / b);
                break;
            default: break;
        }
    }
    // Additive and multiplicative identities arising from derivative rules.
    switch (op) {
        case ExprOp::add:
            if (lhs.is_constant(0.0)) return rhs;
            if (rhs.is_constant(0.0)) return lhs;
            break;
        case ExprOp::sub:
            if (rhs.is_constant(0.0)) return lhs;
            if (lhs.is_constant(0.0)) return unary(ExprOp::neg, std::move(rhs));
            break;
        case ExprOp::mul:
            if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
            if (lhs.is_constant(1.0)) return rhs;
            if (rhs.is_constant(1.0)) return lhs;
            break;
        case ExprOp::div:
            if (rhs.is_constant(1.0)) return lhs;
            break;
        default: break;
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return base;
    if (base.op() == ExprOp::constant) {
        const double folded = integer_power(base.value(), exponent);
        if (std::isfinite(folded)) return constant(folded);
    }
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::pow;
    n->exponent = exponent;
    n->lhs = std::move(base);
    return Expr(std::move(n));
}

ExprOp Expr::op() const noexcept { return node_ ? node_->op : ExprOp::constant; }
double Expr::value() const noexcept { return node_ ? node_->value : 0.0; }
const std::string& Expr::name() const noexcept { return node_ ? node_->name : empty_name(); }
int Expr::exponent() const noexcept { return node_ ? node_->exponent : 0; }
const Expr& Expr::lhs() const noexcept { return node_ ? node_->lhs : empty_expr(); }
const Expr& Expr::rhs() const noexcept { return node_ ? node_->rhs : empty_expr(); }

bool Expr::is_constant(double v) const noexcept { return op() == ExprOp::constant && value() == v; }

std::size_t Expr::node_count() const noexcept {
    const ExprOp o = op();
    if (o == ExprOp::constant || o == ExprOp::param || o == ExprOp::var) return 1;
    if (is_binary(o)) return 1 + lhs().node_count() + rhs().node_count();
    return 1 + lhs().node_count();
}

bool operator==(const Expr& a, const Expr& b) noexcept {
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case ExprOp::constant: return a.value() == b.value();
        case ExprOp::param: return a.name() == b.name();
        case ExprOp::var: return true;
        case ExprOp::pow: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
        default:
            if (is_binary(a.op())) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
            return a.lhs() == b.lhs();
    }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(ExprOp op) {
    switch (op) {
        case ExprOp::add:
        case ExprOp::sub: return 1;
        case ExprOp::mul:
        case ExprOp::div: return 2;
        case ExprOp::pow: return 3;
        case ExprOp::neg: return 4;
        default: return 5;  // atoms and function calls
    }
}

const char* function_name(ExprOp op) {
    switch (op) {
        case ExprOp::sin: return "sin";
        case ExprOp::cos: return "cos";
        case ExprOp::exp: return "exp";
        case ExprOp::tanh: return "tanh";
        default: return "?";
    }
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
    int p = precedence(child.op());
    // Negative literals print with a sign, so treat them like negation.
    if (child.op() == ExprOp::constant && std::signbit(child.value())) p = 4;
    if (p < min_prec) {
        out += '(';
        print_into(child, out);
        out += ')';
    } else {
        print_into(child, out);
    }
}

void print_into(const Expr& e, std::string& out) {
    const ExprOp op = e.op();
    switch (op) {
        case ExprOp::constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.value());
            out += buf;
            return;
        }
        case ExprOp::param: out += e.name(); return;
        case ExprOp::var: out += 'x'; return;
        case ExprOp::neg:
            out += '-';
            print_child(e.lhs(), 5, out);
            return;
        case ExprOp::pow:
            print_child(e.lhs(), 5, out);
            out += '^';
            out += std::to_string(e.exponent());
            return;
        case ExprOp::add:
        case ExprOp::sub:
        case ExprOp::mul:
        case ExprOp::div: {
            const int p = precedence(op);
            print_child(e.lhs(), p, out);
            out += op == ExprOp::add ? " + " : op == ExprOp::sub ? " - " : op == ExprOp::mul ? "*" : "/";
            print_child(e.rhs(), p + 1, out);
            return;
        }
        default:
            out += function_name(op);
            out += '(';
            print_into(e.lhs(), out);
            out += ')';
            return;
    }
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const Expr& e, double x, const ParamMap& params) {
    switch (e.op()) {
        case ExprOp::constant: return e.value();
        case ExprOp::var: return x;
        case ExprOp::param: {
            auto it = params.find(e.name());
            if (it == params.end()) throw EvaluationError("unbound parameter '" + e.name() + "'");
            return it->second;
        }
        case ExprOp::neg: return -eval_node(e.lhs(), x, params);
        case ExprOp::add: return eval_node(e.lhs(), x, params) + eval_node(e.rhs(), x, params);
        case ExprOp::sub: return eval_node(e.lhs(), x, params) - eval_node(e.rhs(), x, params);
        case ExprOp::mul: return eval_node(e.lhs(), x, params) * eval_node(e.rhs(), x, params);
        case ExprOp::div: {
            const double num = eval_node(e.lhs(), x, params);
            const double den = eval_node(e.rhs(), x, params);
            if (den == 0.0) throw EvaluationError("division by zero");
            return num / den;
        }
        case ExprOp::pow: {
            const double base = eval_node(e.lhs(), x, params);
            if (base == 0.0 && e.exponent() < 0) throw EvaluationError("division by zero");
            return integer_power(base, e.exponent());
        }
        default: return apply_function(e.op(), eval_node(e.lhs(), x, params));
    }
}

void collect_params(const Expr& e, std::set<std::string>& out) {
    const ExprOp op = e.op();
    if (op == ExprOp::param) {
        out.insert(e.name());
    } else if (is_binary(op)) {
        collect_params(e.lhs(), out);
        collect_params(e.rhs(), out);
    } else if (op == ExprOp::neg || op == ExprOp::pow || is_function(op)) {
        collect_params(e.lhs(), out);
    }
}

}  // namespace

double evaluate(const Expr& e, double x, const ParamMap& params) {
    const double v = eval_node(e, x, params);
    if (!std::isfinite(v)) throw EvaluationError("non-finite result evaluating " + print_expr(e));
    return v;
}

std::set<std::string> parameters(const Expr& e) {
    std::set<std::string> out;
    collect_params(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
    using enum ExprOp;
    const Expr& u = e.lhs();
    switch (e.op()) {
        case constant:
        case param: return Expr::constant(0.0);
        case var: return Expr::constant(1.0);
        case neg: return Expr::unary(neg, differentiate(u));
        case add: return Expr::binary(add, differentiate(u), differentiate(e.rhs()));
        case sub: return Expr::binary(sub, differentiate(u), differentiate(e.rhs()));
        case mul:
            return Expr::binary(add, Expr::binary(mul, differentiate(u), e.rhs()),
                                Expr::binary(mul, u, differentiate(e.rhs())));
        case div: {
            const Expr& v = e.rhs();
            Expr num = Expr::binary(sub, Expr::binary(mul, differentiate(u), v), Expr::binary(mul, u, differentiate(v)));
            return Expr::binary(div, std::move(num), Expr::power(v, 2));
        }
        case pow: {
            const int k = e.exponent();
            Expr outer = Expr::binary(mul, Expr::constant(static_cast<double>(k)), Expr::power(u, k - 1));
            return Expr::binary(mul, std::move(outer), differentiate(u));
        }
        case sin: return Expr::binary(mul, Expr::unary(cos, u), differentiate(u));
        case cos: return Expr::binary(mul, Expr::unary(neg, Expr::unary(sin, u)), differentiate(u));
        case exp: return Expr::binary(mul, e, differentiate(u));
        case tanh:
            return Expr::binary(mul, Expr::binary(sub, Expr::constant(1.0), Expr::power(e, 2)), differentiate(u));
    }
    return Expr::constant(0.0);
}

}  // namespace fbmsde
