#ifndef CROD_VERIFY_HPP
#define CROD_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "crod/symmetry.hpp"

namespace crod {

/// Uniform grid with inclusive endpoints.
struct GridSpec {
    double s0 = 0.0, s1 = 1.0;
    int ns = 2;
    double t0 = 0.0, t1 = 1.0;
    int nt = 2;

    double s(int i) const { return ns < 2 ? s0 : s0 + (s1 - s0) * i / (ns - 1); }
    double t(int j) const { return nt < 2 ? t0 : t0 + (t1 - t0) * j / (nt - 1); }
    int points() const { return ns * nt; }
};

struct ResidualReport {
    GridSpec grid;
    std::vector<Vec3> residuals;  // row-major [j*ns + i]
    double max_norm = 0.0;
    double l2_norm = 0.0;

    std::string to_json(bool include_points = false) const;
    void write_csv(std::ostream& os) const;  // s, t, F1, F2, F3
};

/// A Vec3-valued field of (s, t). `ds`/`dt` are the exact partials when
/// available; leave them empty to select finite-difference mode with step
/// `fd_step`.
struct VecField {
    std::function<Vec3(double, double)> value;
    std::function<Vec3(double, double)> ds;
    std::function<Vec3(double, double)> dt;
    double fd_step = 1e-6;
};

VecField as_field(const VecExpr& value, const VecExpr& d_s, const VecExpr& d_t);

/// F = ds(omega) - dt(kappa) + omega x kappa over the grid. Missing partials
/// fall back to central differences with the field's fd_step.
ResidualReport residual_subsystem(const VecField& omega, const VecField& kappa,
                                  const GridSpec& grid, int threads = 1);

/// Fast path for exact families: all twelve component expressions share one
/// evaluation cache per point.
ResidualReport residual_subsystem(const SolutionFamily& fam, const GridSpec& grid,
                                  int threads = 1);

/// Max over the grid and over both variables of
/// |exact partial - central difference at step h|. Requires h > 0 and exact
/// partials on the field.
double fd_crosscheck(const VecField& field, const GridSpec& grid, double h);

/// Transforms `base` by the group element p' symbolically and reports the
/// residual of the transformed fields (contract: max-norm <= 1e-8).
ResidualReport symmetry_closure_test(const SolutionFamily& base, const VecExpr& p_prime,
                                     const GridSpec& grid, int threads = 1);

/// Deterministic generator for the documented random expression family:
/// every component is a sum of three terms coef * term with coef uniform in
/// [-0.5, 0.5] and term drawn from {1, s, t, s*t, sin(s), cos(t), sin(s*t)}
/// (t-only pool {1, t, cos(t)} for f). Keeps |p| < 2*pi on [0,1]^2 with high
/// probability.
struct ExprRng {
    uint64_t state;
    explicit ExprRng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    uint64_t next() {
        // splitmix64
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * ((next() >> 11) * 0x1.0p-53);
    }
    int pick(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};
VecExpr random_p(ExprRng& rng);
VecExpr random_f(ExprRng& rng);

}  // namespace crod

#endif
