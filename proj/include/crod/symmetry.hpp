#ifndef CROD_SYMMETRY_HPP
#define CROD_SYMMETRY_HPP

#include "crod/expr.hpp"
#include "crod/linalg.hpp"

namespace crod {

// Point-symmetry group action on (omega, kappa) fields and the closed-form
// general solution of the compatibility subsystem
//   F := ds omega - dt kappa + omega x kappa = 0.
//
// With A = hat(p), p = p(s,t) arbitrary, the group element (parameter
// absorbed into p) acts as
//   omega' = exp(A) omega + (I + c2(p) A + c3(p) A^2) dt p
//   kappa' = exp(A) kappa + (I + c2(p) A + c3(p) A^2) ds p
// where c1 = sin p / p, c2 = (1-cos p)/p^2, c3 = (p-sin p)/p^3.

/// The three series coefficients, Taylor-guarded below p = 1e-4.
inline RotCoeffs coeffs(double p) { return rot_coeffs(p); }

struct SymmetryData {
    VecExpr p, dp_s, dp_t;

    /// Derives dp_s/dp_t symbolically from p.
    static SymmetryData from(const VecExpr& p);
    /// Accepts precomputed derivative expressions; validates them against a
    /// fresh symbolic derivative at 10 sample points (|delta| <= 1e-12).
    static SymmetryData from(const VecExpr& p, const VecExpr& dp_s, const VecExpr& dp_t);
};

/// Group action on a pointwise omega value at (s, t).
Vec3 act_omega(const SymmetryData& sd, Vec3 omega, double s, double t);
/// Group action on a pointwise kappa value at (s, t).
Vec3 act_kappa(const SymmetryData& sd, Vec3 kappa, double s, double t);

/// Exact-solution fields with symbolic first partials; residual of the
/// subsystem stays <= 1e-9 at any evaluation point.
struct SolutionFamily {
    VecExpr omega, kappa;
    VecExpr omega_ds, omega_dt, kappa_ds, kappa_dt;
    VecExpr p, f;  // provenance

    Vec3 eval_omega(double s, double t) const { return omega(s, t); }
    Vec3 eval_kappa(double s, double t) const { return kappa(s, t); }
    /// F = ds omega - dt kappa + omega x kappa at one point, shared cache.
    Vec3 residual(EvalCache& cache) const;
};

/// Image of the seed solution (omega, kappa) = (f(t), 0) under the group
/// element generated by p(s,t). Rejects f depending on s.
SolutionFamily general_solution(const VecExpr& p, const VecExpr& f);

/// Symbolic group action applied to an existing family ("maps solutions to
/// solutions"); partials of the composed fields are re-derived exactly.
SolutionFamily transform_family(const SolutionFamily& base, const VecExpr& p_prime);

/// Translation symmetry of the autonomous system: the same fields evaluated
/// at (s + shift_s, t + shift_t).
SolutionFamily shift_family(const SolutionFamily& base, double shift_s, double shift_t);

}  // namespace crod

#endif
