#include "crod/rodsim.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace crod {

namespace {

/// 2nd-order spatial derivative stencils.
std::vector<Vec3> deriv_s(const std::vector<Vec3>& w, double ds, BoundaryMode bc,
                          bool free_end_ghost_zero = false) {
    const int n = static_cast<int>(w.size());
    std::vector<Vec3> out(n);
    const double inv2 = 1.0 / (2.0 * ds);
    if (bc == BoundaryMode::Periodic) {
        for (int i = 0; i < n; ++i)
            out[i] = inv2 * (w[(i + 1) % n] - w[(i + n - 1) % n]);
        return out;
    }
    for (int i = 1; i + 1 < n; ++i) out[i] = inv2 * (w[i + 1] - w[i - 1]);
    out[0] = inv2 * (-3.0 * w[0] + 4.0 * w[1] - w[2]);
    if (free_end_ghost_zero)
        out[n - 1] = inv2 * (Vec3{} - w[n - 2]);  // stress-free ghost value
    else
        out[n - 1] = inv2 * (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]);
    return out;
}

RodState axpy(const RodState& s, double c, const RodDeriv& d) {
    RodState out = s;
    for (int i = 0; i < s.N; ++i) {
        out.kappa[i] += c * d.kappa[i];
        out.nu[i] += c * d.nu[i];
        out.omega[i] += c * d.omega[i];
        out.ups[i] += c * d.ups[i];
    }
    out.time = s.time + c;
    return out;
}

}  // namespace

double RodState::ds(BoundaryMode bc) const {
    return bc == BoundaryMode::Periodic ? L / N : L / (N - 1);
}

bool RodState::finite() const {
    for (int i = 0; i < N; ++i)
        if (!is_finite(kappa[i]) || !is_finite(nu[i]) || !is_finite(omega[i]) ||
            !is_finite(ups[i]))
            return false;
    return true;
}

Vec3 constitutive_n(Vec3 nu, const MaterialParams& mp) {
    return {mp.GA() * (nu.x - mp.nu0.x), mp.GA() * (nu.y - mp.nu0.y),
            mp.EA() * (nu.z - mp.nu0.z)};
}

Vec3 constitutive_m(Vec3 kappa, const MaterialParams& mp) {
    return {mp.EbI1() * (kappa.x - mp.kappa0.x), mp.EbI2() * (kappa.y - mp.kappa0.y),
            mp.GI3() * (kappa.z - mp.kappa0.z)};
}

MonotonicityReport monotonicity_check(const MaterialParams& mp) {
    MonotonicityReport rep;
    const double diag[6] = {mp.EbI1(), mp.EbI2(), mp.GI3(), mp.GA(), mp.GA(), mp.EA()};
    for (int i = 0; i < 6; ++i) rep.matrix[6 * i + i] = diag[i];
    // leading principal minors of a diagonal matrix: running products
    rep.positive_definite = true;
    double minor = 1.0;
    for (int i = 0; i < 6; ++i) {
        minor *= diag[i];
        if (!(minor > 0.0)) rep.positive_definite = false;
    }
    return rep;
}

RodDeriv rhs_full(const RodState& state, const MaterialParams& mp, const SimOptions& opt,
                  const FrameField* frame) {
    if (state.N < 5) throw std::invalid_argument("rhs_full: need at least 5 nodes");
    if (!state.finite()) throw std::domain_error("rhs_full: non-finite state");
    if (opt.gravity && !frame)
        throw std::logic_error("rhs_full: gravity needs a reconstructed frame");

    const int n = state.N;
    const double ds_ = (opt.bc == BoundaryMode::Periodic) ? state.L / n : state.L / (n - 1);
    const Vec3 rhoJ = mp.rhoJ();
    const double rhoA = mp.rhoA();

    std::vector<Vec3> nhat(n), mhat(n);
    for (int i = 0; i < n; ++i) {
        nhat[i] = constitutive_n(state.nu[i], mp);
        mhat[i] = constitutive_m(state.kappa[i], mp);
    }

    const bool cf = opt.bc == BoundaryMode::ClampedFree;
    const auto d_omega = deriv_s(state.omega, ds_, opt.bc);
    const auto d_ups = deriv_s(state.ups, ds_, opt.bc);
    const auto d_m = deriv_s(mhat, ds_, opt.bc, cf);
    const auto d_n = deriv_s(nhat, ds_, opt.bc, cf);

    RodDeriv out;
    out.kappa.resize(n);
    out.nu.resize(n);
    out.omega.resize(n);
    out.ups.resize(n);
    for (int i = 0; i < n; ++i) {
        out.kappa[i] = d_omega[i] + cross(state.omega[i], state.kappa[i]);
        out.nu[i] = d_ups[i] + cross(state.kappa[i], state.ups[i]) -
                    cross(state.omega[i], state.nu[i]);
        const Vec3 ang = d_m[i] + cross(state.kappa[i], mhat[i]) +
                         cross(state.nu[i], nhat[i]) -
                         cross(state.omega[i], cmul(rhoJ, state.omega[i]));
        out.omega[i] = cdiv(ang, rhoJ);
        Vec3 lin = d_n[i] + cross(state.kappa[i], nhat[i]) -
                   cross(state.omega[i], rhoA * state.ups[i]);
        if (opt.gravity) lin += rhoA * (transpose(frame->R[i]) * opt.g);
        out.ups[i] = lin / rhoA;
    }
    if (cf) {
        // clamped end: omega and ups held at their boundary values
        out.omega[0] = Vec3{};
        out.ups[0] = Vec3{};
    }
    return out;
}

double max_wave_speed(const MaterialParams& mp) {
    const Vec3 rhoJ = mp.rhoJ();
    return std::sqrt(std::max({mp.EA() / mp.rhoA(), mp.GA() / mp.rhoA(),
                               mp.EbI1() / rhoJ.x, mp.EbI2() / rhoJ.y,
                               mp.GI3() / rhoJ.z}));
}

double stiffness_ratio(const MaterialParams& mp, double L) {
    return std::sqrt(mp.EA() / mp.EbI1()) * L;
}

RodState step_rk4(const RodState& state, const MaterialParams& mp, const SimOptions& opt,
                  double dt, SimDiag* diag) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    const int n = state.N;
    const double ds_ = (opt.bc == BoundaryMode::Periodic) ? state.L / n : state.L / (n - 1);
    const double limit = opt.cfl * ds_ / max_wave_speed(mp);
    if (dt > limit * (1.0 + 1e-12)) {
        if (opt.cfl_hard)
            throw CflError("step_rk4: dt exceeds CFL limit " + std::to_string(limit));
        if (!diag || diag->cfl_violations == 0)
            std::fprintf(stderr, "warning: dt=%g exceeds CFL limit %g\n", dt, limit);
        if (diag) ++diag->cfl_violations;
    }

    const FrameField* fr = nullptr;
    FrameField frame;
    if (opt.gravity) {
        frame = reconstruct_frame(state, Mat3::identity(), Vec3{});
        fr = &frame;
    }

    const RodDeriv k1 = rhs_full(state, mp, opt, fr);
    const RodDeriv k2 = rhs_full(axpy(state, dt / 2, k1), mp, opt, fr);
    const RodDeriv k3 = rhs_full(axpy(state, dt / 2, k2), mp, opt, fr);
    const RodDeriv k4 = rhs_full(axpy(state, dt, k3), mp, opt, fr);

    RodState out = state;
    const double c = dt / 6.0;
    for (int i = 0; i < n; ++i) {
        out.kappa[i] += c * (k1.kappa[i] + 2.0 * k2.kappa[i] + 2.0 * k3.kappa[i] + k4.kappa[i]);
        out.nu[i] += c * (k1.nu[i] + 2.0 * k2.nu[i] + 2.0 * k3.nu[i] + k4.nu[i]);
        out.omega[i] += c * (k1.omega[i] + 2.0 * k2.omega[i] + 2.0 * k3.omega[i] + k4.omega[i]);
        out.ups[i] += c * (k1.ups[i] + 2.0 * k2.ups[i] + 2.0 * k3.ups[i] + k4.ups[i]);
    }
    out.time = state.time + dt;
    return out;
}

double FrameField::orthonormality_defect() const {
    double worst = 0.0;
    for (const Mat3& m : R) worst = std::max(worst, crod::orthonormality_defect(m));
    return worst;
}

FrameField reconstruct_frame(const RodState& state, const Mat3& boundary_triad, Vec3 r0) {
    if (crod::orthonormality_defect(boundary_triad) > 1e-10)
        throw std::invalid_argument("reconstruct_frame: boundary triad not orthonormal");
    const int n = state.N;
    const double ds_ = state.L / (n - 1);

    FrameField out;
    out.R.resize(n);
    out.r.resize(n);
    out.R[0] = boundary_triad;
    out.r[0] = r0;
    for (int i = 0; i + 1 < n; ++i) {
        const Vec3 kmid = 0.5 * (state.kappa[i] + state.kappa[i + 1]);
        out.R[i + 1] = out.R[i] * rodrigues_exp(ds_ * kmid);
        const Vec3 va = out.R[i] * state.nu[i];
        const Vec3 vb = out.R[i + 1] * state.nu[i + 1];
        out.r[i + 1] = out.r[i] + (ds_ / 2.0) * (va + vb);
    }
    return out;
}

double manufactured_kappa_error(const SolutionFamily& fam, int N, double t_end, double dt) {
    const double ds_ = 1.0 / (N - 1);
    std::vector<double> s(N);
    for (int i = 0; i < N; ++i) s[i] = i * ds_;

    std::vector<Vec3> kappa(N);
    for (int i = 0; i < N; ++i) kappa[i] = fam.eval_kappa(s[i], 0.0);

    auto omega_at = [&](double t) {
        std::vector<Vec3> w(N);
        EvalCache cache;
        for (int i = 0; i < N; ++i) {
            cache.reset(s[i], t);
            w[i] = fam.omega.eval(cache);
        }
        return w;
    };
    auto rhs = [&](const std::vector<Vec3>& k, const std::vector<Vec3>& w) {
        auto dw = deriv_s(w, ds_, BoundaryMode::ClampedFree);
        std::vector<Vec3> out(N);
        for (int i = 0; i < N; ++i) out[i] = dw[i] + cross(w[i], k[i]);
        return out;
    };

    double t = 0.0;
    std::vector<Vec3> w_lo = omega_at(0.0);
    while (t < t_end - 1e-12) {
        const double h = std::min(dt, t_end - t);
        const auto w_mid = omega_at(t + h / 2);
        const auto w_hi = omega_at(t + h);

        const auto k1 = rhs(kappa, w_lo);
        std::vector<Vec3> tmp(N);
        for (int i = 0; i < N; ++i) tmp[i] = kappa[i] + (h / 2) * k1[i];
        const auto k2 = rhs(tmp, w_mid);
        for (int i = 0; i < N; ++i) tmp[i] = kappa[i] + (h / 2) * k2[i];
        const auto k3 = rhs(tmp, w_mid);
        for (int i = 0; i < N; ++i) tmp[i] = kappa[i] + h * k3[i];
        const auto k4 = rhs(tmp, w_hi);
        for (int i = 0; i < N; ++i)
            kappa[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
        w_lo = w_hi;
    }

    double err = 0.0;
    for (int i = 0; i < N; ++i)
        err = std::max(err, max_abs(kappa[i] - fam.eval_kappa(s[i], t_end)));
    return err;
}

}  // namespace crod
