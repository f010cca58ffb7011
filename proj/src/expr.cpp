#include "crod/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace crod {

namespace {

ExprPtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

bool is_num(const ExprPtr& e, double v) {
    return e->kind == NodeKind::Num && e->value == v;
}
bool is_const(const ExprPtr& e) { return e->kind == NodeKind::Num; }

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
    }
    return "?";
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Num: out += fmt_num(n.value); break;
        case NodeKind::Var: out += n.var; break;
        case NodeKind::Neg:
            out += "(-";
            print_node(*n.a, out);
            out += ')';
            break;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div: {
            const char op = n.kind == NodeKind::Add   ? '+'
                            : n.kind == NodeKind::Sub ? '-'
                            : n.kind == NodeKind::Mul ? '*'
                                                      : '/';
            out += '(';
            print_node(*n.a, out);
            out += op;
            print_node(*n.b, out);
            out += ')';
            break;
        }
        case NodeKind::Pow:
            out += '(';
            print_node(*n.a, out);
            out += ")^";
            out += std::to_string(n.index);
            break;
        case NodeKind::Fun:
            out += fn_name(n.fn);
            out += '(';
            print_node(*n.a, out);
            out += ')';
            break;
        case NodeKind::MFun:
            out += "mf" + std::to_string(n.index) + "(";
            print_node(*n.a, out);
            out += ')';
            break;
    }
}

std::string node_str(const ExprNode& n) {
    std::string out;
    print_node(n, out);
    return out;
}

}  // namespace

ExprPtr Expr::number_node(double v) {
    ExprNode n;
    n.kind = NodeKind::Num;
    n.value = v;
    return make(std::move(n));
}

Expr Expr::var(char v) {
    ExprNode n;
    n.kind = NodeKind::Var;
    n.var = v;
    return Expr(make(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) {
    const ExprPtr &pa = a.ptr(), &pb = b.ptr();
    if (is_const(pa) && is_const(pb)) return Expr::number(pa->value + pb->value);
    if (is_num(pa, 0.0)) return b;
    if (is_num(pb, 0.0)) return a;
    ExprNode n;
    n.kind = NodeKind::Add;
    n.a = pa;
    n.b = pb;
    return Expr(make(std::move(n)));
}

Expr operator-(const Expr& a, const Expr& b) {
    const ExprPtr &pa = a.ptr(), &pb = b.ptr();
    if (is_const(pa) && is_const(pb)) return Expr::number(pa->value - pb->value);
    if (is_num(pb, 0.0)) return a;
    if (is_num(pa, 0.0)) return -b;
    ExprNode n;
    n.kind = NodeKind::Sub;
    n.a = pa;
    n.b = pb;
    return Expr(make(std::move(n)));
}

Expr operator-(const Expr& a) {
    const ExprPtr& pa = a.ptr();
    if (is_const(pa)) return Expr::number(-pa->value);
    if (pa->kind == NodeKind::Neg) return Expr(pa->a);
    ExprNode n;
    n.kind = NodeKind::Neg;
    n.a = pa;
    return Expr(make(std::move(n)));
}

Expr operator*(const Expr& a, const Expr& b) {
    const ExprPtr &pa = a.ptr(), &pb = b.ptr();
    if (is_const(pa) && is_const(pb)) return Expr::number(pa->value * pb->value);
    if (is_num(pa, 0.0) || is_num(pb, 0.0)) return Expr::number(0.0);
    if (is_num(pa, 1.0)) return b;
    if (is_num(pb, 1.0)) return a;
    ExprNode n;
    n.kind = NodeKind::Mul;
    n.a = pa;
    n.b = pb;
    return Expr(make(std::move(n)));
}

Expr operator/(const Expr& a, const Expr& b) {
    const ExprPtr &pa = a.ptr(), &pb = b.ptr();
    if (is_num(pb, 1.0)) return a;
    if (is_const(pa) && is_const(pb) && pb->value != 0.0)
        return Expr::number(pa->value / pb->value);
    if (is_num(pa, 0.0) && !is_num(pb, 0.0)) return Expr::number(0.0);
    ExprNode n;
    n.kind = NodeKind::Div;
    n.a = pa;
    n.b = pb;
    return Expr(make(std::move(n)));
}

Expr pow(const Expr& a, int n) {
    if (n == 0) return Expr::number(1.0);
    if (n == 1) return a;
    if (is_const(a.ptr())) return Expr::number(std::pow(a.ptr()->value, n));
    ExprNode node;
    node.kind = NodeKind::Pow;
    node.index = n;
    node.a = a.ptr();
    return Expr(make(std::move(node)));
}

Expr fun(Fn f, const Expr& a) {
    if (is_const(a.ptr())) {
        const double v = a.ptr()->value;
        switch (f) {
            case Fn::Sin: return Expr::number(std::sin(v));
            case Fn::Cos: return Expr::number(std::cos(v));
            case Fn::Tan: return Expr::number(std::tan(v));
            case Fn::Exp: return Expr::number(std::exp(v));
            case Fn::Sinh: return Expr::number(std::sinh(v));
            case Fn::Cosh: return Expr::number(std::cosh(v));
            case Fn::Log:
                if (v > 0.0) return Expr::number(std::log(v));
                break;
            case Fn::Sqrt:
                if (v >= 0.0) return Expr::number(std::sqrt(v));
                break;
        }
    }
    ExprNode n;
    n.kind = NodeKind::Fun;
    n.fn = f;
    n.a = a.ptr();
    return Expr(make(std::move(n)));
}

Expr mfun(int j, const Expr& a) {
    if (is_const(a.ptr())) return Expr::number(mfun_value(j, a.ptr()->value));
    ExprNode n;
    n.kind = NodeKind::MFun;
    n.index = j;
    n.a = a.ptr();
    return Expr(make(std::move(n)));
}

double eval(const Expr& e, EvalCache& cache) {
    const ExprNode* n = &e.node();
    auto it = cache.memo.find(n);
    if (it != cache.memo.end()) return it->second;

    double v = 0.0;
    switch (n->kind) {
        case NodeKind::Num: v = n->value; break;
        case NodeKind::Var: v = n->var == 's' ? cache.s : cache.t; break;
        case NodeKind::Neg: v = -eval(Expr(n->a), cache); break;
        case NodeKind::Add: v = eval(Expr(n->a), cache) + eval(Expr(n->b), cache); break;
        case NodeKind::Sub: v = eval(Expr(n->a), cache) - eval(Expr(n->b), cache); break;
        case NodeKind::Mul: v = eval(Expr(n->a), cache) * eval(Expr(n->b), cache); break;
        case NodeKind::Div: {
            const double den = eval(Expr(n->b), cache);
            if (den == 0.0)
                throw EvalDomainError("division by zero in '" + node_str(*n) + "'");
            v = eval(Expr(n->a), cache) / den;
            break;
        }
        case NodeKind::Pow: {
            const double base = eval(Expr(n->a), cache);
            if (base == 0.0 && n->index < 0)
                throw EvalDomainError("zero raised to negative power in '" + node_str(*n) + "'");
            v = std::pow(base, n->index);
            break;
        }
        case NodeKind::Fun: {
            const double a = eval(Expr(n->a), cache);
            switch (n->fn) {
                case Fn::Sin: v = std::sin(a); break;
                case Fn::Cos: v = std::cos(a); break;
                case Fn::Tan: v = std::tan(a); break;
                case Fn::Exp: v = std::exp(a); break;
                case Fn::Sinh: v = std::sinh(a); break;
                case Fn::Cosh: v = std::cosh(a); break;
                case Fn::Log:
                    if (a <= 0.0)
                        throw EvalDomainError("log of non-positive value in '" + node_str(*n) + "'");
                    v = std::log(a);
                    break;
                case Fn::Sqrt:
                    if (a < 0.0)
                        throw EvalDomainError("sqrt of negative value in '" + node_str(*n) + "'");
                    v = std::sqrt(a);
                    break;
            }
            break;
        }
        case NodeKind::MFun: v = mfun_value(n->index, eval(Expr(n->a), cache)); break;
    }
    cache.memo.emplace(n, v);
    return v;
}

Expr diff(const Expr& e, char var, DiffCache& cache) {
    const ExprNode* n = &e.node();
    const auto key = std::make_pair(n, var);
    auto it = cache.memo.find(key);
    if (it != cache.memo.end()) return Expr(it->second);

    Expr d;
    switch (n->kind) {
        case NodeKind::Num: d = Expr::number(0.0); break;
        case NodeKind::Var: d = Expr::number(n->var == var ? 1.0 : 0.0); break;
        case NodeKind::Neg: d = -diff(Expr(n->a), var, cache); break;
        case NodeKind::Add: d = diff(Expr(n->a), var, cache) + diff(Expr(n->b), var, cache); break;
        case NodeKind::Sub: d = diff(Expr(n->a), var, cache) - diff(Expr(n->b), var, cache); break;
        case NodeKind::Mul: {
            const Expr a(n->a), b(n->b);
            d = diff(a, var, cache) * b + a * diff(b, var, cache);
            break;
        }
        case NodeKind::Div: {
            const Expr a(n->a), b(n->b);
            d = (diff(a, var, cache) * b - a * diff(b, var, cache)) / pow(b, 2);
            break;
        }
        case NodeKind::Pow: {
            const Expr a(n->a);
            d = Expr::number(n->index) * pow(a, n->index - 1) * diff(a, var, cache);
            break;
        }
        case NodeKind::Fun: {
            const Expr a(n->a);
            const Expr da = diff(a, var, cache);
            switch (n->fn) {
                case Fn::Sin: d = fun(Fn::Cos, a) * da; break;
                case Fn::Cos: d = -(fun(Fn::Sin, a) * da); break;
                case Fn::Tan: d = da / pow(fun(Fn::Cos, a), 2); break;
                case Fn::Exp: d = fun(Fn::Exp, a) * da; break;
                case Fn::Log: d = da / a; break;
                case Fn::Sqrt: d = da / (Expr::number(2.0) * fun(Fn::Sqrt, a)); break;
                case Fn::Sinh: d = fun(Fn::Cosh, a) * da; break;
                case Fn::Cosh: d = fun(Fn::Sinh, a) * da; break;
            }
            break;
        }
        case NodeKind::MFun: {
            const Expr a(n->a);
            const int j = n->index;
            d = Expr::number(0.5) *
                (Expr::number(double(j)) * mfun(j + 2, a) - mfun(j + 1, a)) *
                diff(a, var, cache);
            break;
        }
    }
    cache.memo.emplace(key, d.ptr());
    return d;
}

bool depends_on(const Expr& e, char var) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case NodeKind::Num: return false;
        case NodeKind::Var: return n.var == var;
        default:
            if (n.a && depends_on(Expr(n.a), var)) return true;
            if (n.b && depends_on(Expr(n.b), var)) return true;
            return false;
    }
}

std::string to_string(const Expr& e) { return node_str(e.node()); }

// ---------------------------------------------------------------------------
// Recursive-descent parser for the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | 's' | 't' | func '(' expr ')' | '(' expr ')' | '-' base

namespace {

struct Token {
    enum Kind { Num, Ident, Op, End } kind;
    size_t offset;
    double value = 0.0;
    std::string text;  // Ident name or single-char op
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::End;
            tok_.text = "<end>";
            return;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = pos_;
            bool any_digit = false;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
                ++end;
                any_digit = true;
            }
            if (end < text_.size() && text_[end] == '.') {
                ++end;
                while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
                    ++end;
                    any_digit = true;
                }
            }
            if (!any_digit) throw ParseError(pos_, "number", err_at(pos_, "number"));
            if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
                size_t e = end + 1;
                if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
                size_t d = e;
                while (d < text_.size() && std::isdigit(static_cast<unsigned char>(text_[d]))) ++d;
                if (d > e) end = d;  // otherwise the 'e' is not part of the number
            }
            tok_.kind = Token::Num;
            tok_.text = text_.substr(pos_, end - pos_);
            tok_.value = std::stod(tok_.text);
            pos_ = end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            tok_.kind = Token::Ident;
            tok_.text = text_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            tok_.kind = Token::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw ParseError(pos_, "token", err_at(pos_, "a valid token"));
    }

    std::string err_at(size_t off, const std::string& expected) const {
        std::ostringstream os;
        os << "syntax error at offset " << off << ": expected " << expected;
        return os.str();
    }

    const std::string& text_;
    size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Expr parse() {
        Expr e = expr();
        if (lex_.peek().kind != Token::End)
            fail("end of input or one of '+', '-', '*', '/', '^'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) {
        const Token& t = lex_.peek();
        std::ostringstream os;
        os << "syntax error at offset " << t.offset << ": expected " << expected << ", got '"
           << t.text << "'";
        throw ParseError(t.offset, expected, os.str());
    }

    bool accept_op(char c) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Op && t.text[0] == c) {
            lex_.take();
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept_op('+'))
                e = e + term();
            else if (accept_op('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (accept_op('*'))
                e = e * factor();
            else if (accept_op('/'))
                e = e / factor();
            else
                return e;
        }
    }

    Expr factor() {
        Expr e = base();
        if (accept_op('^')) {
            bool neg = accept_op('-');
            const Token& t = lex_.peek();
            if (t.kind != Token::Num || t.value != std::floor(t.value))
                fail("integer exponent");
            lex_.take();
            int n = static_cast<int>(t.value);
            e = pow(e, neg ? -n : n);
        }
        return e;
    }

    Expr base() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Num) {
            double v = lex_.take().value;
            return Expr::number(v);
        }
        if (t.kind == Token::Op && t.text[0] == '-') {
            lex_.take();
            return -base();
        }
        if (t.kind == Token::Op && t.text[0] == '(') {
            lex_.take();
            Expr e = expr();
            if (!accept_op(')')) fail("')'");
            return e;
        }
        if (t.kind == Token::Ident) {
            Token id = lex_.take();
            if (id.text == "s") return Expr::var('s');
            if (id.text == "t") return Expr::var('t');
            static const std::map<std::string, Fn> fns = {
                {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
                {"exp", Fn::Exp},   {"log", Fn::Log},   {"sqrt", Fn::Sqrt},
                {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}};
            auto it = fns.find(id.text);
            int mf_index = -1;
            if (it == fns.end() && id.text.size() > 2 && id.text.compare(0, 2, "mf") == 0) {
                mf_index = 0;
                for (size_t i = 2; i < id.text.size(); ++i) {
                    if (!std::isdigit(static_cast<unsigned char>(id.text[i]))) {
                        mf_index = -1;
                        break;
                    }
                    mf_index = 10 * mf_index + (id.text[i] - '0');
                }
            }
            if (it == fns.end() && mf_index < 0) {
                std::ostringstream os;
                os << "unknown identifier '" << id.text << "' at offset " << id.offset
                   << ": expected 's', 't', or one of sin, cos, tan, exp, log, sqrt, sinh, cosh";
                throw ParseError(id.offset, "identifier", os.str());
            }
            if (!accept_op('(')) fail("'('");
            Expr arg = expr();
            if (!accept_op(')')) fail("')'");
            return mf_index >= 0 ? mfun(mf_index, arg) : fun(it->second, arg);
        }
        fail("number, 's', 't', function, '(' or '-'");
    }

    Lexer lex_;
};

}  // namespace

Expr parse(const std::string& text) { return Parser(text).parse(); }

VecExpr parse_vec(const std::string& x, const std::string& y, const std::string& z) {
    return {parse(x), parse(y), parse(z)};
}

}  // namespace crod
