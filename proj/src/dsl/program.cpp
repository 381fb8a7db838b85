#include <algorithm>
#include <array>
#include <cmath>

#include "fbmsde/error.hpp"
#include "fbmsde/expr.hpp"

namespace fbmsde {

namespace {

constexpr std::size_t kInlineStack = 32;

}  // namespace

Program::Program(const Expr& e, const ParamMap& params) {
    std::size_t depth = 0;
    // Post-order emission; parameters become literals.
    auto emit = [&](auto&& self, const Expr& node) -> void {
        const ExprOp op = node.op();
        switch (op) {
            case ExprOp::constant:
                code_.push_back({ExprOp::constant, node.value(), 0});
                ++depth;
                break;
            case ExprOp::param: {
                auto it = params.find(node.name());
                if (it == params.end()) throw EvaluationError("unbound parameter '" + node.name() + "'");
                code_.push_back({ExprOp::constant, it->second, 0});
                ++depth;
                break;
            }
            case ExprOp::var:
                code_.push_back({ExprOp::var, 0.0, 0});
                ++depth;
                break;
            case ExprOp::add:
            case ExprOp::sub:
            case ExprOp::mul:
            case ExprOp::div:
                self(self, node.lhs());
                self(self, node.rhs());
                code_.push_back({op, 0.0, 0});
                --depth;
                break;
            default:
                self(self, node.lhs());
                code_.push_back({op, 0.0, node.exponent()});
                break;
        }
        max_depth_ = std::max(max_depth_, depth);
    };
    emit(emit, e);
}

namespace {

double ipow(double base, int k) {
    if (k < 0) return 1.0 / ipow(base, -k);
    double result = 1.0;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

template <typename Stack>
double run(const auto& code, double x, Stack& stack) {
    std::size_t sp = 0;
    for (const auto& ins : code) {
        switch (ins.op) {
            case ExprOp::constant: stack[sp++] = ins.value; break;
            case ExprOp::var: stack[sp++] = x; break;
            case ExprOp::neg: stack[sp - 1] = -stack[sp - 1]; break;
            case ExprOp::add: --sp; stack[sp - 1] += stack[sp]; break;
            case ExprOp::sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case ExprOp::mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case ExprOp::div:
                --sp;
                if (stack[sp] == 0.0) throw EvaluationError("division by zero");
                stack[sp - 1] /= stack[sp];
                break;
            case ExprOp::pow:
                if (stack[sp - 1] == 0.0 && ins.exponent < 0) throw EvaluationError("division by zero");
                stack[sp - 1] = ipow(stack[sp - 1], ins.exponent);
                break;
            case ExprOp::sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
            case ExprOp::cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
            case ExprOp::exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
            case ExprOp::tanh: stack[sp - 1] = std::tanh(stack[sp - 1]); break;
            case ExprOp::param: break;  // resolved at compile time
        }
    }
    return stack[0];
}

}  // namespace

double Program::operator()(double x) const {
    if (code_.empty()) return 0.0;
    double v;
    if (max_depth_ <= kInlineStack) {
        std::array<double, kInlineStack> stack;
        v = run(code_, x, stack);
    } else {
        std::vector<double> stack(max_depth_);
        v = run(code_, x, stack);
    }
    if (!std::isfinite(v)) throw EvaluationError("non-finite coefficient value at x = " + std::to_string(x));
    return v;
}

}  // namespace fbmsde
