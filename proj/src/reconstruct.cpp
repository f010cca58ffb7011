#include "crod/reconstruct.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace crod {

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

double jacobian_det(Vec3 p) {
    const double pn = norm(p);
    if (pn < 1e-4) {
        const double q = pn * pn;
        return -1.0 + q / 12.0 - q * q / 360.0;
    }
    // 2(cos p - 1)/p^2 computed as -2*mf2(p^2): cancellation-free near the
    // Taylor switch, identical beyond it.
    return -2.0 * mfun_value(2, pn * pn);
}

Mat3 jacobian_matrix(Vec3 p) {
    const double pn = norm(p);
    const RotCoeffs c = rot_coeffs(pn);
    const double q = pn * pn;
    Mat3 m = hat(p);
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc)
            out(r, cc) = (r == cc ? 1.0 - q * c.c3 : 0.0) + c.c3 * p[r] * p[cc] +
                         c.c2 * m(r, cc);
    return out;
}

void ReconstructionResult::write_p_csv(std::ostream& os) const {
    os << "s,t,a,b,c\n";
    const int ns = static_cast<int>(s_grid.size());
    for (size_t j = 0; j < t_grid.size(); ++j)
        for (int i = 0; i < ns; ++i) {
            const Vec3& v = p[j * ns + i];
            os << fmt(s_grid[i]) << ',' << fmt(t_grid[j]) << ',' << fmt(v.x) << ','
               << fmt(v.y) << ',' << fmt(v.z) << '\n';
        }
}

void ReconstructionResult::write_f_csv(std::ostream& os) const {
    os << "t,f1,f2,f3\n";
    for (size_t j = 0; j < f.size(); ++j)
        os << fmt(t_grid[j]) << ',' << fmt(f[j].x) << ',' << fmt(f[j].y) << ','
           << fmt(f[j].z) << '\n';
}

std::string ReconstructionResult::diagnostics_json() const {
    std::ostringstream os;
    os << "{\"min_abs_det\":" << fmt(min_abs_det) << ",\"ode_steps\":" << ode_steps
       << ",\"singular\":" << (singular ? "true" : "false");
    if (singular)
        os << ",\"singular_at\":{\"s\":" << fmt(singular_s) << ",\"t\":" << fmt(singular_t)
           << ",\"abs_det\":" << fmt(singular_det) << "}";
    os << '}';
    return os.str();
}

ReconstructionResult solve_p_from_kappa(const ScalarFieldFn& kappa, const LineFn& p0,
                                        const std::vector<double>& s_grid,
                                        const std::vector<double>& t_grid, double ode_step) {
    if (!(ode_step > 0.0))
        throw std::invalid_argument("solve_p_from_kappa: ode_step must be positive");

    const int ns = static_cast<int>(s_grid.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    ReconstructionResult res;
    res.s_grid = s_grid;
    res.t_grid = t_grid;
    res.p.assign(t_grid.size() * ns, Vec3{nan, nan, nan});

    for (size_t j = 0; j < t_grid.size(); ++j) {
        const double t = t_grid[j];
        Vec3 pcur = p0(t);
        bool line_ok = true;

        auto slope = [&](double s, Vec3 pv, Vec3& out) -> bool {
            const Mat3 m = jacobian_matrix(pv);
            const double ad = std::fabs(det(m));
            res.min_abs_det = std::min(res.min_abs_det, ad);
            if (ad < kSingularDetThreshold) {
                if (!res.singular) {
                    res.singular = true;
                    res.singular_s = s;
                    res.singular_t = t;
                    res.singular_det = ad;
                }
                return false;
            }
            const Vec3 k = kappa(s, t);
            if (!is_finite(k))
                throw std::domain_error("solve_p_from_kappa: non-finite kappa value");
            out = inverse(m) * k;
            return true;
        };

        res.p[j * ns + 0] = pcur;
        for (int i = 0; i + 1 < ns && line_ok; ++i) {
            const double span = s_grid[i + 1] - s_grid[i];
            const int nsub = std::max(1, static_cast<int>(std::ceil(span / ode_step - 1e-12)));
            const double h = span / nsub;
            double s = s_grid[i];
            for (int k = 0; k < nsub; ++k) {
                Vec3 k1, k2, k3, k4;
                if (!slope(s, pcur, k1) || !slope(s + h / 2, pcur + (h / 2) * k1, k2) ||
                    !slope(s + h / 2, pcur + (h / 2) * k2, k3) ||
                    !slope(s + h, pcur + h * k3, k4)) {
                    line_ok = false;
                    break;
                }
                pcur = pcur + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                s += h;
                ++res.ode_steps;
            }
            if (line_ok) res.p[j * ns + i + 1] = pcur;
        }
    }
    return res;
}

std::vector<Vec3> solve_f_from_omega(const LineFn& omega0, const LineFn& p_at_0,
                                     const LineFn& dpt_at_0,
                                     const std::vector<double>& t_grid) {
    std::vector<Vec3> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const Vec3 pv = p_at_0(t);
        const Vec3 d = dpt_at_0(t);
        const double pn = norm(pv);
        const RotCoeffs c = rot_coeffs(pn);
        const Vec3 g = d + c.c3 * (dot(pv, d) * pv - pn * pn * d) + c.c2 * cross(pv, d);
        out.push_back(rodrigues_exp(-pv) * (omega0(t) - g));
    }
    return out;
}

}  // namespace crod
