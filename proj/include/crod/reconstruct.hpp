#ifndef CROD_RECONSTRUCT_HPP
#define CROD_RECONSTRUCT_HPP

#include <functional>
#include <vector>

#include "crod/expr.hpp"
#include "crod/linalg.hpp"
#include "crod/verify.hpp"

namespace crod {

// Inverse problem: recover the generating data (p, f) from target fields.
// The kappa-equation of the general solution is linear in ds p,
//   kappa = M(p) ds p,
// so p follows by integrating ds p = M(p)^{-1} kappa along s for each
// t-line, and f follows from omega at s = 0 by inverting the rotation
// exp(hat(p)), whose determinant is always 1.

/// Closed-form determinant 2(cos|p| - 1)/|p|^2 with Taylor branch
/// -1 + p^2/12 - p^4/360 below |p| = 1e-4. Zero exactly at |p| in 2*pi*Z+.
/// Note: det(jacobian_matrix(p)) carries the opposite (positive)
/// orientation sign; the two agree in magnitude.
double jacobian_det(Vec3 p);

/// The matrix M(p) with kappa = M(p) * ds p; depends on p only.
Mat3 jacobian_matrix(Vec3 p);

/// Reconstruction aborts a t-line when |det M| drops below this.
inline constexpr double kSingularDetThreshold = 1e-6;

struct ReconstructionResult {
    std::vector<double> s_grid, t_grid;
    std::vector<Vec3> p;        // row-major [j*ns + i]; NaN past a singular abort
    std::vector<Vec3> f;        // per t node (empty unless solve_f ran)
    double min_abs_det = 1e300;
    long ode_steps = 0;
    bool singular = false;
    double singular_s = 0.0, singular_t = 0.0, singular_det = 0.0;

    void write_p_csv(std::ostream& os) const;  // s, t, a, b, c
    void write_f_csv(std::ostream& os) const;  // t, f1, f2, f3
    std::string diagnostics_json() const;
};

using ScalarFieldFn = std::function<Vec3(double, double)>;
using LineFn = std::function<Vec3(double)>;

/// Integrates ds p = M(p)^{-1} kappa(s, t) with classical fixed-step RK4
/// along each t-line, starting from p(s_grid[0], t) = p0(t). A line is
/// aborted (and the result flagged singular) when |det M| falls below the
/// threshold; completed values up to that point are retained.
ReconstructionResult solve_p_from_kappa(const ScalarFieldFn& kappa, const LineFn& p0,
                                        const std::vector<double>& s_grid,
                                        const std::vector<double>& t_grid, double ode_step);

/// f(t) = exp(-hat(p)) * (omega(0,t) - G(p, dt p)) with
/// G = (I + c2 A + c3 A^2) dt p, all evaluated at s = 0.
std::vector<Vec3> solve_f_from_omega(const LineFn& omega0, const LineFn& p_at_0,
                                     const LineFn& dpt_at_0,
                                     const std::vector<double>& t_grid);

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = n < 2 ? a : a + (b - a) * i / (n - 1);
    return out;
}

}  // namespace crod

#endif
