#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlct/rational.hpp"
#include "rlct/series.hpp"

namespace rlct {

// AST for model probability expressions. Pow exponents are literal
// non-negative integers so every expression stays rational in the parameters.
struct ExprNode {
    enum class Op { Literal, Param, Add, Sub, Mul, Div, Pow, Neg };

    Op op = Op::Literal;
    Rat literal;                 // Literal
    int param_index = -1;        // Param
    std::string param_name;     // Param
    int exponent = 0;            // Pow
    std::vector<std::shared_ptr<const ExprNode>> children;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

// Parses an expression over + - * / ^ ( ), rational literals and declared
// parameter names. line/col_base locate the expression inside its model file
// for error reporting.
ExprPtr parse_expression(const std::string& text, const std::vector<std::string>& params,
                         int line = 1, int col_base = 1);

std::string to_string(const ExprNode& node);

bool structurally_equal(const ExprNode& a, const ExprNode& b);

// Evaluation over any scalar providing +,-,*,/ and integer pow. `values`
// holds one scalar per declared parameter.
template <typename T>
T evaluate_expr(const ExprNode& node, const std::vector<T>& values) {
    using Op = ExprNode::Op;
    switch (node.op) {
        case Op::Literal: return T(node.literal);
        case Op::Param: return values[node.param_index];
        case Op::Add:
            return evaluate_expr(*node.children[0], values) +
                   evaluate_expr(*node.children[1], values);
        case Op::Sub:
            return evaluate_expr(*node.children[0], values) -
                   evaluate_expr(*node.children[1], values);
        case Op::Mul:
            return evaluate_expr(*node.children[0], values) *
                   evaluate_expr(*node.children[1], values);
        case Op::Div:
            return evaluate_expr(*node.children[0], values) /
                   evaluate_expr(*node.children[1], values);
        case Op::Neg: return -evaluate_expr(*node.children[0], values);
        case Op::Pow: {
            T base = evaluate_expr(*node.children[0], values);
            T out(1);
            for (int k = 0; k < node.exponent; ++k) out *= base;
            return out;
        }
    }
    throw Error(Error::Kind::Internal, "unreachable expression op");
}

// double specialization of T(node.literal)
template <>
inline double evaluate_expr<double>(const ExprNode& node, const std::vector<double>& values) {
    using Op = ExprNode::Op;
    switch (node.op) {
        case Op::Literal: return to_double(node.literal);
        case Op::Param: return values[node.param_index];
        case Op::Add:
            return evaluate_expr(*node.children[0], values) +
                   evaluate_expr(*node.children[1], values);
        case Op::Sub:
            return evaluate_expr(*node.children[0], values) -
                   evaluate_expr(*node.children[1], values);
        case Op::Mul:
            return evaluate_expr(*node.children[0], values) *
                   evaluate_expr(*node.children[1], values);
        case Op::Div:
            return evaluate_expr(*node.children[0], values) /
                   evaluate_expr(*node.children[1], values);
        case Op::Neg: return -evaluate_expr(*node.children[0], values);
        case Op::Pow: {
            double base = evaluate_expr(*node.children[0], values);
            double out = 1;
            for (int k = 0; k < node.exponent; ++k) out *= base;
            return out;
        }
    }
    throw Error(Error::Kind::Internal, "unreachable expression op");
}

// Jet-valued evaluation; division uses series inversion, so a divisor whose
// constant term vanishes surfaces as DivisionByZeroConstantTerm.
Jet<Rat> evaluate_expr_jet(const ExprNode& node, const std::vector<Jet<Rat>>& seeds);

}  // namespace rlct
