#include "subcurv/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace subcurv {

namespace {

enum class Fun { Exp, Log, Sqrt, Sin, Cos, Tan, Sinh, Cosh };

const char* fun_name(Fun f) {
    switch (f) {
        case Fun::Exp: return "exp";
        case Fun::Log: return "log";
        case Fun::Sqrt: return "sqrt";
        case Fun::Sin: return "sin";
        case Fun::Cos: return "cos";
        case Fun::Tan: return "tan";
        case Fun::Sinh: return "sinh";
        case Fun::Cosh: return "cosh";
    }
    return "?";
}

}  // namespace

struct Expression::Node {
    enum class Kind { Num, Pi, E, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    double num = 0.0;  // Num
    int var = -1;      // Var, zero-based
    Fun fun = Fun::Exp;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Num;
    n->num = v;
    return n;
}

NodePtr variable(int idx) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var = idx;
    return n;
}

NodePtr call(Fun f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->fun = f;
    n->a = std::move(arg);
    return n;
}

bool is_num(const NodePtr& n, double v) {
    return n->kind == Kind::Num && n->num == v;
}

// --- simplifying constructors (used by derivative) ------------------------

NodePtr s_neg(NodePtr a) {
    if (a->kind == Kind::Num) return num(-a->num);
    if (a->kind == Kind::Neg) return a->a;
    return make(Kind::Neg, std::move(a));
}

NodePtr s_add(NodePtr a, NodePtr b) {
    if (is_num(a, 0)) return b;
    if (is_num(b, 0)) return a;
    if (a->kind == Kind::Num && b->kind == Kind::Num) return num(a->num + b->num);
    return make(Kind::Add, std::move(a), std::move(b));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
    if (is_num(b, 0)) return a;
    if (is_num(a, 0)) return s_neg(std::move(b));
    if (a->kind == Kind::Num && b->kind == Kind::Num) return num(a->num - b->num);
    return make(Kind::Sub, std::move(a), std::move(b));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
    if (is_num(a, 0) || is_num(b, 0)) return num(0);
    if (is_num(a, 1)) return b;
    if (is_num(b, 1)) return a;
    if (a->kind == Kind::Num && b->kind == Kind::Num) return num(a->num * b->num);
    return make(Kind::Mul, std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b) {
    if (is_num(a, 0)) return num(0);
    if (is_num(b, 1)) return a;
    return make(Kind::Div, std::move(a), std::move(b));
}

NodePtr s_pow(NodePtr a, NodePtr b) {
    if (is_num(b, 1)) return a;
    if (is_num(b, 0)) return num(1);
    return make(Kind::Pow, std::move(a), std::move(b));
}

bool node_is_constant(const NodePtr& n) {
    if (n->kind == Kind::Var) return false;
    if (n->a && !node_is_constant(n->a)) return false;
    if (n->b && !node_is_constant(n->b)) return false;
    return true;
}

// --- parser ---------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+'))
                e = make(Kind::Add, e, term());
            else if (eat('-'))
                e = make(Kind::Sub, e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*'))
                e = make(Kind::Mul, e, unary());
            else if (eat('/'))
                e = make(Kind::Div, e, unary());
            else
                return e;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return make(Kind::Pow, base, unary());  // right-associative
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_lit();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    NodePtr number_lit() {
        std::size_t start = pos_;
        bool any_digit = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            any_digit = true;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                any_digit = true;
            }
        }
        if (!any_digit) throw SyntaxError("malformed number", start);
        // exponent only if followed by digits (so "2*e" still parses as the constant e)
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;
            }
        }
        double v = std::stod(std::string(text_.substr(start, pos_ - start)));
        return num(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));

        if (name == "pi") return make(Kind::Pi);
        if (name == "e") return make(Kind::E);

        static const std::pair<const char*, Fun> funs[] = {
            {"exp", Fun::Exp},   {"log", Fun::Log}, {"sqrt", Fun::Sqrt},
            {"sin", Fun::Sin},   {"cos", Fun::Cos}, {"tan", Fun::Tan},
            {"sinh", Fun::Sinh}, {"cosh", Fun::Cosh},
        };
        for (auto [fname, f] : funs) {
            if (name == fname) {
                if (!eat('('))
                    throw SyntaxError("expected '(' after '" + name + "'", pos_);
                if (peek() == ')')
                    throw ArityError(name + " expects 1 argument, got 0");
                NodePtr arg = expr();
                if (eat(',')) {
                    int extra = 1;
                    do {
                        expr();
                        ++extra;
                    } while (eat(','));
                    if (!eat(')')) throw SyntaxError("expected ')'", pos_);
                    throw ArityError(name + " expects 1 argument, got " + std::to_string(extra));
                }
                if (!eat(')')) throw SyntaxError("expected ')'", pos_);
                return call(f, arg);
            }
        }

        if (name.size() >= 2 && name[0] == 'x' && name[1] != '0' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
            int idx = std::stoi(name.substr(1));
            return variable(idx - 1);
        }
        throw UnknownIdentifier("unknown identifier '" + name + "'");
    }
};

// --- evaluation -----------------------------------------------------------

double eval_node(const Node& n, std::span<const double> x) {
    switch (n.kind) {
        case Kind::Num: return n.num;
        case Kind::Pi: return M_PI;
        case Kind::E: return M_E;
        case Kind::Var:
            if (n.var >= static_cast<int>(x.size()))
                throw ShapeError("expression references x" + std::to_string(n.var + 1) +
                                 " but only " + std::to_string(x.size()) + " coordinates given");
            return x[n.var];
        case Kind::Neg: return -eval_node(*n.a, x);
        case Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Kind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Kind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
        case Kind::Pow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
        case Kind::Call: {
            double v = eval_node(*n.a, x);
            switch (n.fun) {
                case Fun::Exp: return std::exp(v);
                case Fun::Log: return std::log(v);
                case Fun::Sqrt: return std::sqrt(v);
                case Fun::Sin: return std::sin(v);
                case Fun::Cos: return std::cos(v);
                case Fun::Tan: return std::tan(v);
                case Fun::Sinh: return std::sinh(v);
                case Fun::Cosh: return std::cosh(v);
            }
        }
    }
    return 0.0;
}

struct Dual {
    double v, d;
};

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }

Dual dual_pow(Dual a, Dual b) {
    double v = std::pow(a.v, b.v);
    if (b.d == 0.0)  // constant exponent: valid for negative bases too
        return {v, b.v * std::pow(a.v, b.v - 1) * a.d};
    return {v, v * (b.d * std::log(a.v) + b.v * a.d / a.v)};
}

Dual eval_dual_node(const Node& n, std::span<const double> x, int var) {
    switch (n.kind) {
        case Kind::Num: return {n.num, 0};
        case Kind::Pi: return {M_PI, 0};
        case Kind::E: return {M_E, 0};
        case Kind::Var:
            if (n.var >= static_cast<int>(x.size()))
                throw ShapeError("expression references x" + std::to_string(n.var + 1) +
                                 " but only " + std::to_string(x.size()) + " coordinates given");
            return {x[n.var], n.var == var ? 1.0 : 0.0};
        case Kind::Neg: return -eval_dual_node(*n.a, x, var);
        case Kind::Add: return eval_dual_node(*n.a, x, var) + eval_dual_node(*n.b, x, var);
        case Kind::Sub: return eval_dual_node(*n.a, x, var) - eval_dual_node(*n.b, x, var);
        case Kind::Mul: return eval_dual_node(*n.a, x, var) * eval_dual_node(*n.b, x, var);
        case Kind::Div: return eval_dual_node(*n.a, x, var) / eval_dual_node(*n.b, x, var);
        case Kind::Pow:
            return dual_pow(eval_dual_node(*n.a, x, var), eval_dual_node(*n.b, x, var));
        case Kind::Call: {
            Dual a = eval_dual_node(*n.a, x, var);
            switch (n.fun) {
                case Fun::Exp: return {std::exp(a.v), std::exp(a.v) * a.d};
                case Fun::Log: return {std::log(a.v), a.d / a.v};
                case Fun::Sqrt: return {std::sqrt(a.v), a.d / (2 * std::sqrt(a.v))};
                case Fun::Sin: return {std::sin(a.v), std::cos(a.v) * a.d};
                case Fun::Cos: return {std::cos(a.v), -std::sin(a.v) * a.d};
                case Fun::Tan: {
                    double c = std::cos(a.v);
                    return {std::tan(a.v), a.d / (c * c)};
                }
                case Fun::Sinh: return {std::sinh(a.v), std::cosh(a.v) * a.d};
                case Fun::Cosh: return {std::cosh(a.v), std::sinh(a.v) * a.d};
            }
        }
    }
    return {0, 0};
}

// --- symbolic derivative --------------------------------------------------

NodePtr diff(const NodePtr& n, int var) {
    switch (n->kind) {
        case Kind::Num:
        case Kind::Pi:
        case Kind::E: return num(0);
        case Kind::Var: return num(n->var == var ? 1.0 : 0.0);
        case Kind::Neg: return s_neg(diff(n->a, var));
        case Kind::Add: return s_add(diff(n->a, var), diff(n->b, var));
        case Kind::Sub: return s_sub(diff(n->a, var), diff(n->b, var));
        case Kind::Mul:
            return s_add(s_mul(diff(n->a, var), n->b), s_mul(n->a, diff(n->b, var)));
        case Kind::Div:
            return s_div(s_sub(s_mul(diff(n->a, var), n->b), s_mul(n->a, diff(n->b, var))),
                         s_pow(n->b, num(2)));
        case Kind::Pow: {
            if (node_is_constant(n->b)) {
                // d(a^c) = c * a^(c-1) * a'
                NodePtr cm1 = n->b->kind == Kind::Num ? num(n->b->num - 1)
                                                      : s_sub(n->b, num(1));
                return s_mul(s_mul(n->b, s_pow(n->a, cm1)), diff(n->a, var));
            }
            // d(a^b) = a^b * (b' * log(a) + b * a' / a)
            return s_mul(s_pow(n->a, n->b),
                         s_add(s_mul(diff(n->b, var), call(Fun::Log, n->a)),
                               s_div(s_mul(n->b, diff(n->a, var)), n->a)));
        }
        case Kind::Call: {
            NodePtr ad = diff(n->a, var);
            switch (n->fun) {
                case Fun::Exp: return s_mul(call(Fun::Exp, n->a), ad);
                case Fun::Log: return s_div(ad, n->a);
                case Fun::Sqrt: return s_div(ad, s_mul(num(2), call(Fun::Sqrt, n->a)));
                case Fun::Sin: return s_mul(call(Fun::Cos, n->a), ad);
                case Fun::Cos: return s_neg(s_mul(call(Fun::Sin, n->a), ad));
                case Fun::Tan: return s_div(ad, s_pow(call(Fun::Cos, n->a), num(2)));
                case Fun::Sinh: return s_mul(call(Fun::Cosh, n->a), ad);
                case Fun::Cosh: return s_mul(call(Fun::Sinh, n->a), ad);
            }
        }
    }
    return num(0);
}

// --- printing -------------------------------------------------------------

// precedence levels: 1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 5 atom
int prec(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print(const Node& n, std::ostream& os, int parent_prec) {
    int p = prec(n);
    bool paren = p < parent_prec;
    if (paren) os << '(';
    switch (n.kind) {
        case Kind::Num: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.num;
            os << tmp.str();
            break;
        }
        case Kind::Pi: os << "pi"; break;
        case Kind::E: os << "e"; break;
        case Kind::Var: os << 'x' << (n.var + 1); break;
        case Kind::Neg:
            os << '-';
            print(*n.a, os, p + 1);
            break;
        case Kind::Add:
            print(*n.a, os, p);
            os << " + ";
            print(*n.b, os, p + 1);
            break;
        case Kind::Sub:
            print(*n.a, os, p);
            os << " - ";
            print(*n.b, os, p + 1);
            break;
        case Kind::Mul:
            print(*n.a, os, p);
            os << "*";
            print(*n.b, os, p + 1);
            break;
        case Kind::Div:
            print(*n.a, os, p);
            os << "/";
            print(*n.b, os, p + 1);
            break;
        case Kind::Pow:
            print(*n.a, os, p + 1);
            os << "^";
            print(*n.b, os, p);  // right-associative
            break;
        case Kind::Call:
            os << fun_name(n.fun) << '(';
            print(*n.a, os, 0);
            os << ')';
            break;
    }
    if (paren) os << ')';
}

int max_var_node(const Node& n) {
    int m = n.kind == Kind::Var ? n.var + 1 : 0;
    if (n.a) m = std::max(m, max_var_node(*n.a));
    if (n.b) m = std::max(m, max_var_node(*n.b));
    return m;
}

}  // namespace

// --- Expression facade ----------------------------------------------------

Expression::Expression() : root_(num(0)) {}
Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

Expression Expression::parse(std::string_view text) {
    return Expression(Parser(text).run());
}

Expression Expression::number(double v) { return Expression(num(v)); }

double Expression::eval(std::span<const double> x) const {
    double v = eval_node(*root_, x);
    if (!std::isfinite(v))
        throw DomainViolation("expression '" + to_string() + "' is not finite at the given point");
    return v;
}

Expression Expression::derivative(int var) const {
    return Expression(diff(root_, var));
}

double Expression::eval_dual(std::span<const double> x, int var) const {
    Dual d = eval_dual_node(*root_, x, var);
    if (!std::isfinite(d.v) || !std::isfinite(d.d))
        throw DomainViolation("derivative of '" + to_string() + "' is not finite at the given point");
    return d.d;
}

int Expression::max_var() const { return max_var_node(*root_); }

bool Expression::is_constant() const { return node_is_constant(root_); }

std::string Expression::to_string() const {
    std::ostringstream os;
    print(*root_, os, 0);
    return os.str();
}

}  // namespace subcurv
