#ifndef CROD_EXPR_HPP
#define CROD_EXPR_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "crod/linalg.hpp"

namespace crod {

// Expressions in the two variables (s, t): immutable shared ASTs with exact
// symbolic differentiation and pointwise evaluation.
//
// Besides the surface functions (sin .. cosh) the AST carries the even
// analytic family mf<j>(q) = sum_n (-q)^n / (2n+j)!, i.e.
//   mf0(q) = cos(sqrt q), mf1(q) = sin(sqrt q)/sqrt q,
//   mf2(q) = (1-cos sqrt q)/q, mf3(q) = (sqrt q - sin sqrt q)/q^(3/2), ...
// These make the rotation-series coefficients smooth functions of q = |p|^2,
// so assembled solution fields stay differentiable through p = 0. Their
// derivative is closed under the family: d/dq mf_j = (j*mf_{j+2} - mf_{j+1})/2.

enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

enum class NodeKind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Fun, MFun };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    double value = 0.0;  // Num
    char var = 0;        // Var: 's' or 't'
    int index = 0;       // Pow exponent / MFun order
    Fn fn = Fn::Sin;
    ExprPtr a, b;
};

struct ParseError : std::runtime_error {
    size_t offset;
    std::string expected;
    ParseError(size_t off, std::string exp, const std::string& what)
        : std::runtime_error(what), offset(off), expected(std::move(exp)) {}
};

struct EvalDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Expr {
public:
    Expr() : node_(number_node(0.0)) {}
    explicit Expr(ExprPtr n) : node_(std::move(n)) {}

    static Expr number(double v) { return Expr(number_node(v)); }
    static Expr var(char v);

    const ExprNode& node() const { return *node_; }
    const ExprPtr& ptr() const { return node_; }

    double operator()(double s, double t) const;

private:
    static ExprPtr number_node(double v);
    ExprPtr node_;
};

// construction (with constant folding and 0/1 identity elimination)
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& a, int n);
Expr fun(Fn f, const Expr& a);
Expr mfun(int j, const Expr& a);

Expr parse(const std::string& text);
std::string to_string(const Expr& e);

bool depends_on(const Expr& e, char var);

/// Batch-evaluation cache: one per point, shared across expressions so common
/// sub-DAGs are evaluated once.
struct EvalCache {
    double s = 0.0, t = 0.0;
    std::unordered_map<const ExprNode*, double> memo;
    void reset(double s_, double t_) {
        s = s_;
        t = t_;
        memo.clear();
    }
};
double eval(const Expr& e, EvalCache& cache);
inline double eval(const Expr& e, double s, double t) {
    EvalCache c;
    c.reset(s, t);
    return eval(e, c);
}
inline double Expr::operator()(double s, double t) const { return eval(*this, s, t); }

/// Derivative cache shared across several diff calls so that common
/// sub-DAGs produce the same derivative nodes.
struct DiffCache {
    std::map<std::pair<const ExprNode*, char>, ExprPtr> memo;
};
Expr diff(const Expr& e, char var, DiffCache& cache);
inline Expr diff(const Expr& e, char var) {
    DiffCache c;
    return diff(e, var, c);
}

struct VecExpr {
    Expr x, y, z;

    Vec3 operator()(double s, double t) const { return {x(s, t), y(s, t), z(s, t)}; }
    Vec3 eval(EvalCache& c) const { return {crod::eval(x, c), crod::eval(y, c), crod::eval(z, c)}; }
};
inline VecExpr diff(const VecExpr& v, char var, DiffCache& cache) {
    return {diff(v.x, var, cache), diff(v.y, var, cache), diff(v.z, var, cache)};
}
inline VecExpr diff(const VecExpr& v, char var) {
    DiffCache c;
    return diff(v, var, c);
}
inline bool depends_on(const VecExpr& v, char var) {
    return depends_on(v.x, var) || depends_on(v.y, var) || depends_on(v.z, var);
}
VecExpr parse_vec(const std::string& x, const std::string& y, const std::string& z);

}  // namespace crod

#endif
