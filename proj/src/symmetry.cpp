#include "crod/symmetry.hpp"

#include <stdexcept>
#include <unordered_map>

namespace crod {

namespace {

struct SymCross {
    Expr x, y, z;
};

VecExpr sym_cross(const VecExpr& a, const VecExpr& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Expr sym_dot(const VecExpr& a, const VecExpr& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Symbolic group action: w' = exp(A)w + (I + c2 A + c3 A^2) d, with the
/// coefficients expressed through mf<j>(q), q = |p|^2, so the assembled
/// expressions stay smooth through p = 0.
VecExpr act_sym(const VecExpr& p, const VecExpr& w, const VecExpr& d) {
    const Expr q = pow(p.x, 2) + pow(p.y, 2) + pow(p.z, 2);
    const Expr c1 = mfun(1, q), c2 = mfun(2, q), c3 = mfun(3, q);

    const VecExpr pxw = sym_cross(p, w);
    const VecExpr pxd = sym_cross(p, d);
    const Expr pw = sym_dot(p, w);
    const Expr pd = sym_dot(p, d);

    VecExpr out;
    Expr* o[3] = {&out.x, &out.y, &out.z};
    const Expr* wi[3] = {&w.x, &w.y, &w.z};
    const Expr* di[3] = {&d.x, &d.y, &d.z};
    const Expr* pi[3] = {&p.x, &p.y, &p.z};
    const Expr* pxwi[3] = {&pxw.x, &pxw.y, &pxw.z};
    const Expr* pxdi[3] = {&pxd.x, &pxd.y, &pxd.z};
    for (int i = 0; i < 3; ++i) {
        *o[i] = *wi[i] + c1 * *pxwi[i] + c2 * (*pi[i] * pw - q * *wi[i]) + *di[i] +
                c3 * (*pi[i] * pd - q * *di[i]) + c2 * *pxdi[i];
    }
    return out;
}

Vec3 act_num(Vec3 p, Vec3 w, Vec3 d) {
    const double pn = norm(p);
    const RotCoeffs c = rot_coeffs(pn);
    const double q = pn * pn;
    return w + c.c1 * cross(p, w) + c.c2 * (dot(p, w) * p - q * w) + d +
           c.c3 * (dot(p, d) * p - q * d) + c.c2 * cross(p, d);
}

void fill_partials(SolutionFamily& fam, DiffCache& dc) {
    fam.omega_ds = diff(fam.omega, 's', dc);
    fam.omega_dt = diff(fam.omega, 't', dc);
    fam.kappa_ds = diff(fam.kappa, 's', dc);
    fam.kappa_dt = diff(fam.kappa, 't', dc);
}

Expr subst_vars(const Expr& e, const Expr& s_repl, const Expr& t_repl,
                std::unordered_map<const ExprNode*, ExprPtr>& memo) {
    const ExprNode& n = e.node();
    auto it = memo.find(&n);
    if (it != memo.end()) return Expr(it->second);

    Expr out;
    switch (n.kind) {
        case NodeKind::Num: out = e; break;
        case NodeKind::Var: out = n.var == 's' ? s_repl : t_repl; break;
        case NodeKind::Neg: out = -subst_vars(Expr(n.a), s_repl, t_repl, memo); break;
        case NodeKind::Add:
            out = subst_vars(Expr(n.a), s_repl, t_repl, memo) +
                  subst_vars(Expr(n.b), s_repl, t_repl, memo);
            break;
        case NodeKind::Sub:
            out = subst_vars(Expr(n.a), s_repl, t_repl, memo) -
                  subst_vars(Expr(n.b), s_repl, t_repl, memo);
            break;
        case NodeKind::Mul:
            out = subst_vars(Expr(n.a), s_repl, t_repl, memo) *
                  subst_vars(Expr(n.b), s_repl, t_repl, memo);
            break;
        case NodeKind::Div:
            out = subst_vars(Expr(n.a), s_repl, t_repl, memo) /
                  subst_vars(Expr(n.b), s_repl, t_repl, memo);
            break;
        case NodeKind::Pow:
            out = pow(subst_vars(Expr(n.a), s_repl, t_repl, memo), n.index);
            break;
        case NodeKind::Fun:
            out = fun(n.fn, subst_vars(Expr(n.a), s_repl, t_repl, memo));
            break;
        case NodeKind::MFun:
            out = mfun(n.index, subst_vars(Expr(n.a), s_repl, t_repl, memo));
            break;
    }
    memo.emplace(&n, out.ptr());
    return out;
}

}  // namespace

SymmetryData SymmetryData::from(const VecExpr& p) {
    DiffCache dc;
    return {p, diff(p, 's', dc), diff(p, 't', dc)};
}

SymmetryData SymmetryData::from(const VecExpr& p, const VecExpr& dp_s, const VecExpr& dp_t) {
    DiffCache dc;
    const VecExpr ref_s = diff(p, 's', dc);
    const VecExpr ref_t = diff(p, 't', dc);
    for (int i = 0; i < 10; ++i) {
        const double s = 0.05 + 0.1 * i;
        const double t = 0.97 - 0.09 * i;
        if (max_abs(dp_s(s, t) - ref_s(s, t)) > 1e-12 ||
            max_abs(dp_t(s, t) - ref_t(s, t)) > 1e-12)
            throw std::invalid_argument(
                "SymmetryData: supplied derivative expressions disagree with "
                "symbolic derivatives of p");
    }
    return {p, dp_s, dp_t};
}

Vec3 act_omega(const SymmetryData& sd, Vec3 omega, double s, double t) {
    return act_num(sd.p(s, t), omega, sd.dp_t(s, t));
}

Vec3 act_kappa(const SymmetryData& sd, Vec3 kappa, double s, double t) {
    return act_num(sd.p(s, t), kappa, sd.dp_s(s, t));
}

Vec3 SolutionFamily::residual(EvalCache& cache) const {
    const Vec3 w = omega.eval(cache);
    const Vec3 k = kappa.eval(cache);
    return omega_ds.eval(cache) - kappa_dt.eval(cache) + cross(w, k);
}

SolutionFamily general_solution(const VecExpr& p, const VecExpr& f) {
    if (depends_on(f, 's'))
        throw std::invalid_argument("general_solution: f must depend on t only");

    DiffCache dc;
    const VecExpr dp_s = diff(p, 's', dc);
    const VecExpr dp_t = diff(p, 't', dc);
    const VecExpr zero{Expr::number(0), Expr::number(0), Expr::number(0)};

    SolutionFamily fam;
    fam.p = p;
    fam.f = f;
    fam.omega = act_sym(p, f, dp_t);
    fam.kappa = act_sym(p, zero, dp_s);
    fill_partials(fam, dc);
    return fam;
}

SolutionFamily transform_family(const SolutionFamily& base, const VecExpr& p_prime) {
    DiffCache dc;
    const VecExpr dp_s = diff(p_prime, 's', dc);
    const VecExpr dp_t = diff(p_prime, 't', dc);

    SolutionFamily fam;
    fam.p = p_prime;
    fam.f = base.f;
    fam.omega = act_sym(p_prime, base.omega, dp_t);
    fam.kappa = act_sym(p_prime, base.kappa, dp_s);
    fill_partials(fam, dc);
    return fam;
}

SolutionFamily shift_family(const SolutionFamily& base, double shift_s, double shift_t) {
    const Expr s_repl = Expr::var('s') + Expr::number(shift_s);
    const Expr t_repl = Expr::var('t') + Expr::number(shift_t);
    std::unordered_map<const ExprNode*, ExprPtr> memo;
    auto sub = [&](const VecExpr& v) {
        return VecExpr{subst_vars(v.x, s_repl, t_repl, memo),
                       subst_vars(v.y, s_repl, t_repl, memo),
                       subst_vars(v.z, s_repl, t_repl, memo)};
    };

    SolutionFamily fam;
    fam.p = sub(base.p);
    fam.f = sub(base.f);
    fam.omega = sub(base.omega);
    fam.kappa = sub(base.kappa);
    DiffCache dc;
    fill_partials(fam, dc);
    return fam;
}

}  // namespace crod
