#pragma once

// Coefficient expression language.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := power (('*' | '/') power)*
//   power   := unary ('^' integer)*          integer may carry a leading '-'
//   unary   := '-' unary | primary
//   primary := number | identifier | function '(' expr ')' | '(' expr ')'
//
// Unary minus binds tighter than '^', so "-x^2" is (-x)^2. Identifiers other
// than `x` are parameters; functions are sin, cos, exp and tanh.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fbmsde {

using ParamMap = std::map<std::string, double, std::less<>>;

enum class ExprOp { constant, param, var, neg, add, sub, mul, div, pow, sin, cos, exp, tanh };

struct ExprNode;

/// Immutable expression tree; copies share structure.
class Expr {
public:
    Expr();  // the constant 0
    static Expr constant(double v);
    static Expr param(std::string name);
    static Expr var();
    static Expr unary(ExprOp op, Expr operand);
    static Expr binary(ExprOp op, Expr lhs, Expr rhs);
    static Expr power(Expr base, int exponent);

    [[nodiscard]] ExprOp op() const noexcept;
    [[nodiscard]] double value() const noexcept;             // constant
    [[nodiscard]] const std::string& name() const noexcept;  // param
    [[nodiscard]] int exponent() const noexcept;             // pow
    [[nodiscard]] const Expr& lhs() const noexcept;          // unary operand / binary left / pow base
    [[nodiscard]] const Expr& rhs() const noexcept;          // binary right

    [[nodiscard]] bool is_constant(double v) const noexcept;
    [[nodiscard]] std::size_t node_count() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b) noexcept;

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    ExprOp op = ExprOp::constant;
    double value = 0.0;
    std::string name;
    int exponent = 0;
    Expr lhs;
    Expr rhs;
};

/// Parse an expression; throws ParseError (with byte offset) on bad input.
Expr parse_expr(std::string_view source);

/// Print in the grammar above; parse_expr(print_expr(e)) evaluates equal to e.
std::string print_expr(const Expr& e);

/// Exact symbolic derivative with respect to x (parameters are constants).
/// Only constant folding is applied to the result.
Expr differentiate(const Expr& e);

/// Tree-walking evaluation. Throws EvaluationError on unbound parameters,
/// division by zero or a non-finite result.
double evaluate(const Expr& e, double x, const ParamMap& params);

/// Names of all parameters referenced by e.
std::set<std::string> parameters(const Expr& e);

/// Expression compiled to postfix code with parameters resolved; the hot path
/// for scheme evaluation.
class Program {
public:
    Program() = default;
    Program(const Expr& e, const ParamMap& params);

    /// Same error contract as evaluate().
    [[nodiscard]] double operator()(double x) const;

private:
    struct Instr {
        ExprOp op;
        double value;
        int exponent;
    };
    std::vector<Instr> code_;
    std::size_t max_depth_ = 0;
};

/// Parsed coefficient together with derivatives up to third order.
class CoefficientFn {
public:
    CoefficientFn() = default;
    CoefficientFn(Expr expr, ParamMap params);
    static CoefficientFn parse(std::string_view source, ParamMap params = {});

    [[nodiscard]] double operator()(double x) const { return programs_[0](x); }
    /// k-th derivative, k in 0..3.
    [[nodiscard]] double derivative(int k, double x) const { return programs_[k](x); }
    [[nodiscard]] double d1(double x) const { return programs_[1](x); }
    [[nodiscard]] double d2(double x) const { return programs_[2](x); }
    [[nodiscard]] double d3(double x) const { return programs_[3](x); }

    [[nodiscard]] const Expr& expr(int k = 0) const { return exprs_[k]; }
    [[nodiscard]] const ParamMap& params() const noexcept { return params_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    Expr exprs_[4];
    Program programs_[4];
    ParamMap params_;
    std::string source_;
};

struct ProbeRange {
    double lo = -10.0;
    double hi = 10.0;
};

struct AssumptionReport {
    std::size_t probes = 0;
    double min_sigma = 0.0;
    double max_abs_a = 0.0;
    double max_abs_sigma = 0.0;
    double max_abs_a_derivs[2] = {0.0, 0.0};      // a', a''
    double max_abs_sigma_derivs[3] = {0.0, 0.0, 0.0};  // sigma', sigma'', sigma'''
    bool sigma_positive = true;
    bool drift_growth_suspected = false;
    bool sigma_constant = false;
    /// Hard violations (positivity, magnitude bound, evaluation failure).
    std::vector<std::string> violations;
    /// Advisory notes that do not invalidate the problem.
    std::vector<std::string> warnings;

    [[nodiscard]] bool acceptable() const noexcept { return violations.empty(); }
};

/// Dense probing of the standing assumptions on (a, sigma): boundedness of
/// the coefficients and their derivatives and, when requested, inf sigma > 0.
/// Advisory only; global bounds cannot be decided by sampling.
AssumptionReport validate_assumptions(const CoefficientFn& a, const CoefficientFn& sigma, ProbeRange range,
                                      bool needs_positivity, double magnitude_bound = 1e6,
                                      std::size_t probes = 10001);

}  // namespace fbmsde
