#include "crod/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace crod {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void finalize_norms(ResidualReport& rep) {
    double mx = 0.0, sq = 0.0;
    for (const Vec3& r : rep.residuals) {
        mx = std::max(mx, max_abs(r));
        sq += dot(r, r);
    }
    rep.max_norm = mx;
    rep.l2_norm = std::sqrt(sq / rep.residuals.size());
}

/// Runs fn(j) for each t-row, split over `threads` workers. Rows are
/// independent; results land in preallocated storage, so the reduction is
/// deterministic regardless of thread count.
void for_each_row(int nt, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || nt < 2) {
        for (int j = 0; j < nt; ++j) fn(j);
        return;
    }
    const int nworkers = std::min(threads, nt);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) {
        pool.emplace_back([&, w] {
            for (int j = w; j < nt; j += nworkers) fn(j);
        });
    }
    for (auto& th : pool) th.join();
}

Vec3 fd_partial_s(const std::function<Vec3(double, double)>& f, double s, double t, double h) {
    return (f(s + h, t) - f(s - h, t)) / (2.0 * h);
}
Vec3 fd_partial_t(const std::function<Vec3(double, double)>& f, double s, double t, double h) {
    return (f(s, t + h) - f(s, t - h)) / (2.0 * h);
}

}  // namespace

std::string ResidualReport::to_json(bool include_points) const {
    std::ostringstream os;
    os << "{\"grid\":{\"s0\":" << fmt(grid.s0) << ",\"s1\":" << fmt(grid.s1)
       << ",\"ns\":" << grid.ns << ",\"t0\":" << fmt(grid.t0) << ",\"t1\":" << fmt(grid.t1)
       << ",\"nt\":" << grid.nt << "},\"max_norm\":" << fmt(max_norm)
       << ",\"l2_norm\":" << fmt(l2_norm);
    if (include_points) {
        os << ",\"points\":[";
        for (size_t k = 0; k < residuals.size(); ++k) {
            if (k) os << ',';
            os << '[' << fmt(residuals[k].x) << ',' << fmt(residuals[k].y) << ','
               << fmt(residuals[k].z) << ']';
        }
        os << ']';
    }
    os << '}';
    return os.str();
}

void ResidualReport::write_csv(std::ostream& os) const {
    os << "s,t,F1,F2,F3\n";
    for (int j = 0; j < grid.nt; ++j)
        for (int i = 0; i < grid.ns; ++i) {
            const Vec3& r = residuals[j * grid.ns + i];
            os << fmt(grid.s(i)) << ',' << fmt(grid.t(j)) << ',' << fmt(r.x) << ','
               << fmt(r.y) << ',' << fmt(r.z) << '\n';
        }
}

VecField as_field(const VecExpr& value, const VecExpr& d_s, const VecExpr& d_t) {
    VecField out;
    out.value = [value](double s, double t) { return value(s, t); };
    out.ds = [d_s](double s, double t) { return d_s(s, t); };
    out.dt = [d_t](double s, double t) { return d_t(s, t); };
    return out;
}

ResidualReport residual_subsystem(const VecField& omega, const VecField& kappa,
                                  const GridSpec& grid, int threads) {
    ResidualReport rep;
    rep.grid = grid;
    rep.residuals.resize(grid.points());
    for_each_row(grid.nt, threads, [&](int j) {
        const double t = grid.t(j);
        for (int i = 0; i < grid.ns; ++i) {
            const double s = grid.s(i);
            const Vec3 w = omega.value(s, t);
            const Vec3 k = kappa.value(s, t);
            const Vec3 dw = omega.ds ? omega.ds(s, t)
                                     : fd_partial_s(omega.value, s, t, omega.fd_step);
            const Vec3 dk = kappa.dt ? kappa.dt(s, t)
                                     : fd_partial_t(kappa.value, s, t, kappa.fd_step);
            rep.residuals[j * grid.ns + i] = dw - dk + cross(w, k);
        }
    });
    finalize_norms(rep);
    return rep;
}

ResidualReport residual_subsystem(const SolutionFamily& fam, const GridSpec& grid,
                                  int threads) {
    ResidualReport rep;
    rep.grid = grid;
    rep.residuals.resize(grid.points());
    for_each_row(grid.nt, threads, [&](int j) {
        EvalCache cache;
        const double t = grid.t(j);
        for (int i = 0; i < grid.ns; ++i) {
            cache.reset(grid.s(i), t);
            rep.residuals[j * grid.ns + i] = fam.residual(cache);
        }
    });
    finalize_norms(rep);
    return rep;
}

double fd_crosscheck(const VecField& field, const GridSpec& grid, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_crosscheck: step h must be positive");
    if (!field.ds || !field.dt)
        throw std::invalid_argument("fd_crosscheck: field must provide exact partials");
    double worst = 0.0;
    for (int j = 0; j < grid.nt; ++j) {
        const double t = grid.t(j);
        for (int i = 0; i < grid.ns; ++i) {
            const double s = grid.s(i);
            worst = std::max(worst,
                             max_abs(field.ds(s, t) - fd_partial_s(field.value, s, t, h)));
            worst = std::max(worst,
                             max_abs(field.dt(s, t) - fd_partial_t(field.value, s, t, h)));
        }
    }
    return worst;
}

ResidualReport symmetry_closure_test(const SolutionFamily& base, const VecExpr& p_prime,
                                     const GridSpec& grid, int threads) {
    return residual_subsystem(transform_family(base, p_prime), grid, threads);
}

namespace {
Expr random_term(ExprRng& rng) {
    const Expr s = Expr::var('s'), t = Expr::var('t');
    switch (rng.pick(7)) {
        case 0: return Expr::number(1.0);
        case 1: return s;
        case 2: return t;
        case 3: return s * t;
        case 4: return fun(Fn::Sin, s);
        case 5: return fun(Fn::Cos, t);
        default: return fun(Fn::Sin, s * t);
    }
}
Expr random_component(ExprRng& rng) {
    Expr e = Expr::number(0.0);
    for (int k = 0; k < 3; ++k) e = e + Expr::number(rng.uniform(-0.5, 0.5)) * random_term(rng);
    return e;
}
Expr random_f_component(ExprRng& rng) {
    const Expr t = Expr::var('t');
    return Expr::number(rng.uniform(-0.5, 0.5)) +
           Expr::number(rng.uniform(-0.5, 0.5)) * t +
           Expr::number(rng.uniform(-0.5, 0.5)) * fun(Fn::Cos, t);
}
}  // namespace

VecExpr random_p(ExprRng& rng) {
    return {random_component(rng), random_component(rng), random_component(rng)};
}

VecExpr random_f(ExprRng& rng) {
    return {random_f_component(rng), random_f_component(rng), random_f_component(rng)};
}

}  // namespace crod
