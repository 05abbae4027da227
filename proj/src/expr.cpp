#include "rlct/expr.hpp"

#include <cctype>

namespace rlct {

namespace {

struct Parser {
    const std::string& text;
    const std::vector<std::string>& params;
    int line;
    int col_base;
    std::size_t pos = 0;

    int column() const { return col_base + static_cast<int>(pos); }

    [[noreturn]] void fail(Error::Kind kind, const std::string& message) {
        throw ParseError(kind, message, line, column());
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    ExprPtr make(ExprNode::Op op, ExprPtr a, ExprPtr b = nullptr) {
        auto node = std::make_shared<ExprNode>();
        node->op = op;
        node->children.push_back(std::move(a));
        if (b) node->children.push_back(std::move(b));
        return node;
    }

    // expression := term (('+'|'-') term)*
    ExprPtr expression() {
        ExprPtr acc = term();
        while (true) {
            if (eat('+')) acc = make(ExprNode::Op::Add, acc, term());
            else if (eat('-')) acc = make(ExprNode::Op::Sub, acc, term());
            else return acc;
        }
    }

    // term := factor (('*'|'/') factor)*
    ExprPtr term() {
        ExprPtr acc = factor();
        while (true) {
            if (eat('*')) acc = make(ExprNode::Op::Mul, acc, factor());
            else if (eat('/')) acc = make(ExprNode::Op::Div, acc, factor());
            else return acc;
        }
    }

    // factor := atom ('^' integer)? | '-' factor
    ExprPtr factor() {
        if (eat('-')) return make(ExprNode::Op::Neg, factor());
        ExprPtr base = atom();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos;
            if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            std::string digits = text.substr(start, pos - start);
            bool bad = digits.empty() || digits == "-" || digits == "+" || digits[0] == '-';
            if (!bad && pos < text.size() &&
                (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                 text[pos] == '.'))
                bad = true;
            if (bad)
                fail(Error::Kind::NonIntegerExponent,
                     "exponent must be a literal non-negative integer");
            auto node = std::make_shared<ExprNode>();
            node->op = ExprNode::Op::Pow;
            node->exponent = std::stoi(digits);
            node->children.push_back(base);
            return node;
        }
        return base;
    }

    // atom := number | identifier | '(' expression ')'
    ExprPtr atom() {
        skip_ws();
        if (pos >= text.size()) fail(Error::Kind::SyntaxError, "unexpected end of expression");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            ExprPtr inner = expression();
            if (!eat(')')) fail(Error::Kind::SyntaxError, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            auto node = std::make_shared<ExprNode>();
            node->op = ExprNode::Op::Literal;
            node->literal = Rat(Int(text.substr(start, pos - start)));
            return node;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            int index = -1;
            for (std::size_t i = 0; i < params.size(); ++i)
                if (params[i] == name) index = static_cast<int>(i);
            if (index < 0)
                fail(Error::Kind::UnknownParameter, "unknown parameter '" + name + "'");
            auto node = std::make_shared<ExprNode>();
            node->op = ExprNode::Op::Param;
            node->param_index = index;
            node->param_name = name;
            return node;
        }
        fail(Error::Kind::SyntaxError, std::string("unexpected character '") + c + "'");
    }
};

int precedence(ExprNode::Op op) {
    using Op = ExprNode::Op;
    switch (op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        default: return 5;
    }
}

void print_node(const ExprNode& node, std::ostringstream& os, int parent_prec) {
    using Op = ExprNode::Op;
    int prec = precedence(node.op);
    bool parens = prec < parent_prec;
    if (parens) os << "(";
    switch (node.op) {
        case Op::Literal: os << node.literal; break;
        case Op::Param: os << node.param_name; break;
        case Op::Add:
            print_node(*node.children[0], os, prec);
            os << " + ";
            print_node(*node.children[1], os, prec + 1);
            break;
        case Op::Sub:
            print_node(*node.children[0], os, prec);
            os << " - ";
            print_node(*node.children[1], os, prec + 1);
            break;
        case Op::Mul:
            print_node(*node.children[0], os, prec);
            os << "*";
            print_node(*node.children[1], os, prec + 1);
            break;
        case Op::Div:
            print_node(*node.children[0], os, prec);
            os << "/";
            print_node(*node.children[1], os, prec + 1);
            break;
        case Op::Neg:
            os << "-";
            print_node(*node.children[0], os, prec + 1);
            break;
        case Op::Pow:
            print_node(*node.children[0], os, prec + 1);
            os << "^" << node.exponent;
            break;
    }
    if (parens) os << ")";
}

}  // namespace

ExprPtr parse_expression(const std::string& text, const std::vector<std::string>& params,
                         int line, int col_base) {
    Parser parser{text, params, line, col_base};
    ExprPtr out = parser.expression();
    parser.skip_ws();
    if (parser.pos != text.size())
        parser.fail(Error::Kind::SyntaxError, "trailing characters after expression");
    return out;
}

std::string to_string(const ExprNode& node) {
    std::ostringstream os;
    print_node(node, os, 0);
    return os.str();
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.op != b.op || a.children.size() != b.children.size()) return false;
    switch (a.op) {
        case ExprNode::Op::Literal:
            if (a.literal != b.literal) return false;
            break;
        case ExprNode::Op::Param:
            if (a.param_index != b.param_index) return false;
            break;
        case ExprNode::Op::Pow:
            if (a.exponent != b.exponent) return false;
            break;
        default: break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

Jet<Rat> evaluate_expr_jet(const ExprNode& node, const std::vector<Jet<Rat>>& seeds) {
    using Op = ExprNode::Op;
    const int dim = seeds.at(0).dim();
    const int cap = seeds.at(0).cap();
    switch (node.op) {
        case Op::Literal: return Jet<Rat>::constant(dim, cap, node.literal);
        case Op::Param: return seeds[node.param_index];
        case Op::Add:
            return evaluate_expr_jet(*node.children[0], seeds) +
                   evaluate_expr_jet(*node.children[1], seeds);
        case Op::Sub:
            return evaluate_expr_jet(*node.children[0], seeds) -
                   evaluate_expr_jet(*node.children[1], seeds);
        case Op::Mul:
            return evaluate_expr_jet(*node.children[0], seeds) *
                   evaluate_expr_jet(*node.children[1], seeds);
        case Op::Div:
            return evaluate_expr_jet(*node.children[0], seeds) /
                   evaluate_expr_jet(*node.children[1], seeds);
        case Op::Neg: return -evaluate_expr_jet(*node.children[0], seeds);
        case Op::Pow: return evaluate_expr_jet(*node.children[0], seeds).pow(node.exponent);
    }
    throw Error(Error::Kind::Internal, "unreachable expression op");
}

}  // namespace rlct
