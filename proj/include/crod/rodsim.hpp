#ifndef CROD_RODSIM_HPP
#define CROD_RODSIM_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "crod/linalg.hpp"
#include "crod/symmetry.hpp"

namespace crod {

// Method-of-lines simulator for the decoupled rod system in director
// components:
//   dt kappa = ds omega + omega x kappa
//   dt nu    = ds ups   + kappa x ups - omega x nu
//   rhoJ dt omega = ds m + kappa x m + nu x n - omega x (rhoJ omega)
//   rhoA dt ups   = ds n + kappa x n - omega x (rhoA ups) [+ f_ext]
// with the linear material laws, 2nd-order central differences in s, and
// classical RK4 in t.

struct MaterialParams {
    double rho = 1.0;  // per-length density coefficient (enters as rho*A, rho*J)
    double A = 1.0;    // cross-section area
    double E = 1.0;    // Young's modulus (extension)
    double Eb = 1.0;   // Young's modulus of bending
    double G = 1.0;    // shear modulus
    double I1 = 1.0, I2 = 1.0;  // area moments
    double I3 = 1.0;            // polar moment
    Vec3 J{1.0, 1.0, 1.0};      // rotational inertia per length, diagonal
    Vec3 kappa0{0.0, 0.0, 0.0};  // reference bending/torsion strains
    Vec3 nu0{0.0, 0.0, 1.0};     // reference linear strains

    double GA() const { return G * A; }
    double EA() const { return E * A; }
    double EbI1() const { return Eb * I1; }
    double EbI2() const { return Eb * I2; }
    double GI3() const { return G * I3; }
    double rhoA() const { return rho * A; }
    Vec3 rhoJ() const { return rho * J; }

    bool stiffnesses_positive() const {
        return GA() > 0 && EA() > 0 && EbI1() > 0 && EbI2() > 0 && GI3() > 0;
    }
};

enum class BoundaryMode { Periodic, ClampedFree };

struct RodState {
    double L = 1.0;
    int N = 0;
    double time = 0.0;
    std::vector<Vec3> kappa, nu, omega, ups;

    // node spacing: periodic grids cover [0, L) with N cells, clamped-free
    // grids cover [0, L] inclusive
    double ds(BoundaryMode bc) const;
    bool finite() const;
};

struct SimOptions {
    BoundaryMode bc = BoundaryMode::Periodic;
    double cfl = 0.5;
    bool cfl_hard = false;  // escalate CFL violations from warning to error
    bool gravity = false;
    Vec3 g{0.0, 0.0, -9.81};  // world-frame acceleration
};

struct SimDiag {
    long cfl_violations = 0;
};

struct CflError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Vec3 constitutive_n(Vec3 nu, const MaterialParams& mp);
Vec3 constitutive_m(Vec3 kappa, const MaterialParams& mp);

/// Constitutive Jacobian block matrix; diagonal for the linear laws:
/// diag(EbI1, EbI2, GI3, GA, GA, EA). Positive-definiteness decided by
/// leading principal minors.
struct MonotonicityReport {
    std::array<double, 36> matrix{};
    bool positive_definite = false;
};
MonotonicityReport monotonicity_check(const MaterialParams& mp);

struct RodDeriv {
    std::vector<Vec3> kappa, nu, omega, ups;
};

struct FrameField {
    std::vector<Mat3> R;  // director triads, columns (d1, d2, d3)
    std::vector<Vec3> r;  // centerline
    double orthonormality_defect() const;
};

/// Per-node time derivatives. `frame` is required when gravity is on (to
/// rotate the world-frame force into the local basis).
RodDeriv rhs_full(const RodState& state, const MaterialParams& mp, const SimOptions& opt,
                  const FrameField* frame = nullptr);

/// Max characteristic speed of the linearized system.
double max_wave_speed(const MaterialParams& mp);

/// Classical RK4 step. Checks dt <= cfl * ds / c_max; a violation either
/// throws (cfl_hard) or is counted in `diag` and warned once.
RodState step_rk4(const RodState& state, const MaterialParams& mp, const SimOptions& opt,
                  double dt, SimDiag* diag = nullptr);

/// Integrates the triad along s with exact rotation updates
/// R_{i+1} = R_i * exp(hat(ds * kappa_mid)) and the centerline by the
/// trapezoidal rule on sum_k nu_k d_k. Kirchhoff mode callers pin
/// nu = (0,0,1) in the state beforehand.
FrameField reconstruct_frame(const RodState& state, const Mat3& boundary_triad, Vec3 r0);

/// Ratio sqrt(EA / EbI1) * L, reported so the stiffness contrast driving
/// the explicit-step limit is visible.
double stiffness_ratio(const MaterialParams& mp, double L);

/// Manufactured-solution run for the kappa-subsystem alone: omega is
/// prescribed analytically from `fam`, kappa marches with RK4 from the exact
/// initial data, and the max-norm error against the analytic kappa at t_end
/// is returned. Spatial derivatives of omega use the same stencils as the
/// full solver (one-sided second order at the ends).
double manufactured_kappa_error(const SolutionFamily& fam, int N, double t_end, double dt);

}  // namespace crod

#endif
