// Wilczek-Zee connection over the dark manifold and the resulting holonomy:
// analytic connection from the f-coefficients, finite-difference overlaps,
// time-ordered integration and the resonant closed form.
//
// Orientation: K_l[m][n] = -<D_{l-m,m}| d/dt |D_{l-n,n}>, the generator of
// dC/dt = K C for dark coefficients C. On three-photon resonance this gives
//   K_l(t) = -kappa_dot sin(theta) K0_l,     W_l = exp(-phi K0_l),
// with K0_l[m][m+1] = +sqrt((m+1)(l-m)). The primed frame D' = (iD+E)/sqrt2,
// E' = (-iD+E)/sqrt2 diagonalizes W_l to diag(e^{-i(l-2m) phi}).
#ifndef HOLOMEM_HOLONOMY_HPP
#define HOLOMEM_HOLONOMY_HPP

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "darkspace.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace holomem {

struct FCoefficients {
    Complex dd; ///< [D, dD^+/dt]
    Complex ed; ///< [E, dD^+/dt]
    Complex de; ///< [D, dE^+/dt] = -conj(ed)
    Complex ee; ///< [E, dE^+/dt]
};

inline FCoefficients f_coefficients(const SystemParams& p, const MixingAngles& m)
{
    const double st = std::sin(m.theta);
    const double ck = std::cos(m.kappa), sk = std::sin(m.kappa);
    FCoefficients f;
    f.dd = -kI * st * st * (p.delta_1 * ck * ck + p.delta_2 * sk * sk);
    f.ed = -m.kappa_dot * st + kI * (p.delta_2 - p.delta_1) * st * ck * sk;
    f.de = -std::conj(f.ed);
    f.ee = -kI * (p.delta_1 * sk * sk + p.delta_2 * ck * ck);
    return f;
}

inline FCoefficients f_coefficients(const SystemParams& p, const PulseSchedule& s, double t)
{
    return f_coefficients(p, mixing_angles(p, s, t));
}

struct ConnectionMatrix {
    int l = 0;
    CMatrix k;
    bool accuracy_warning = false; ///< finite-difference step above 1e-2 T
};

/// Tridiagonal connection of sector l assembled from the f-coefficients.
inline CMatrix connection_from_f(const FCoefficients& f, int l)
{
    CMatrix k = CMatrix::Zero(l + 1, l + 1);
    for (int m = 0; m <= l; ++m) {
        k(m, m) = -(static_cast<double>(l - m) * f.dd + static_cast<double>(m) * f.ee);
        if (m + 1 <= l)
            k(m, m + 1) = -std::sqrt(static_cast<double>((m + 1) * (l - m))) * f.de;
        if (m >= 1)
            k(m, m - 1) = -std::sqrt(static_cast<double>(m * (l - m + 1))) * f.ed;
    }
    return k;
}

inline ConnectionMatrix connection_analytic(const SystemParams& p, const PulseSchedule& s,
                                            double t, int l)
{
    fock::check_capacity(l, max_sector());
    return {l, connection_from_f(f_coefficients(p, s, t), l), false};
}

/// K[m][n] = -<D_m(t)| (D_n(t+dt) - D_n(t-dt)) / (2 dt)>, with frames built
/// independently at the three instants (no re-orthogonalization).
inline ConnectionMatrix connection_numeric(const SystemParams& p, const PulseSchedule& s,
                                           double t, int l, double dt)
{
    const double T = s.duration();
    if (!(dt > 0.0))
        throw ArgumentError("finite-difference step must be positive");
    if (t - dt < 0.0 || t + dt > T)
        throw ArgumentError("t +/- dt must lie inside [0, T]");
    const CMatrix f0 = dark_basis(p, s, t, l).frame;
    const CMatrix fp = dark_basis(p, s, t + dt, l).frame;
    const CMatrix fm = dark_basis(p, s, t - dt, l).frame;
    ConnectionMatrix out;
    out.l = l;
    out.k = -(f0.adjoint() * (fp - fm)) / (2.0 * dt);
    out.accuracy_warning = dt > 1e-2 * T;
    return out;
}

/// Constant resonant connection shape: entry (m, m+1) = sqrt((m+1)(l-m)),
/// entry (m, m-1) = -sqrt(m(l-m+1)).
inline Eigen::MatrixXd k0_matrix(int l)
{
    if (l < 0)
        throw ArgumentError("sector index must be non-negative");
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(l + 1, l + 1);
    for (int m = 0; m < l; ++m) {
        k(m, m + 1) = std::sqrt(static_cast<double>((m + 1) * (l - m)));
        k(m + 1, m) = -std::sqrt(static_cast<double>((m + 1) * (l - m)));
    }
    return k;
}

/// phi(t1) - phi(t0) = integral of kappa_dot sin(theta), adaptive
/// Gauss-Kronrod on every smooth piece of the schedule.
inline double phi_between(const SystemParams& p, const PulseSchedule& s, double t0, double t1)
{
    if (t1 < t0)
        return -phi_between(p, s, t1, t0);
    auto integrand = [&](double t) {
        const auto m = mixing_angles(p, s, t);
        return m.kappa_dot * std::sin(m.theta);
    };
    double total = 0.0;
    const auto bp = s.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = std::max(bp[i], t0);
        const double b = std::min(bp[i + 1], t1);
        if (b <= a)
            continue;
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 20,
                                                                              1e-14, &err);
    }
    return total;
}

inline double phi_of_t(const SystemParams& p, const PulseSchedule& s, double t)
{
    return phi_between(p, s, 0.0, t);
}

struct HolonomyMatrix {
    int l = 0;
    CMatrix w;
    linalg::PropagationStats stats{};
};

struct HolonomyOptions {
    double tolerance = 1e-13;  ///< local error per step
    double step_bound = 0.05;  ///< cap on ||K|| dt
};

/// Time-ordered exponential of the connection, W(t0) = 1.
inline HolonomyMatrix holonomy_integrate(const SystemParams& p, const PulseSchedule& s, int l,
                                         double t0, double t1, const HolonomyOptions& opt = {})
{
    fock::check_capacity(l, max_sector());
    const double T = s.duration();
    if (!(0.0 <= t0 && t0 <= t1 && t1 <= T))
        throw ArgumentError("holonomy interval must satisfy 0 <= t0 <= t1 <= T");
    HolonomyMatrix out;
    out.l = l;
    out.w = CMatrix::Identity(l + 1, l + 1);
    if (l == 0 || t1 == t0)
        return out;
    linalg::PropagationOptions po;
    po.tolerance = opt.tolerance;
    po.generator_bound = opt.step_bound;
    auto gen = [&](double t) { return connection_from_f(f_coefficients(p, s, t), l); };
    out.stats = linalg::propagate(gen, out.w, t0, t1, s.breakpoints(), {}, po,
                                  [](std::size_t, double, const CMatrix&) {});
    return out;
}

/// Resonant holonomy exp(-phi K0_l); orthogonal and real.
inline HolonomyMatrix holonomy_closed_form(int l, double phi)
{
    const CMatrix gen = (-phi * k0_matrix(l)).cast<Complex>();
    CMatrix w = linalg::expm_skew(gen);
    w = w.real().cast<Complex>();
    return {l, w, {}};
}

/// diag(e^{-i l phi}, e^{-i (l-2) phi}, ..., e^{i l phi}).
inline HolonomyMatrix primed_holonomy(int l, double phi)
{
    if (l < 0)
        throw ArgumentError("sector index must be non-negative");
    CMatrix w = CMatrix::Zero(l + 1, l + 1);
    for (int m = 0; m <= l; ++m)
        w(m, m) = std::exp(-kI * (static_cast<double>(l - 2 * m) * phi));
    return {l, w, {}};
}

/// Constant unitary V_l with primed frame = unprimed frame * V_l, from the
/// binomial expansion of (D'^+)^(l-m) (E'^+)^m with
/// D'^+ = (-i D^+ + E^+)/sqrt2 and E'^+ = (i D^+ + E^+)/sqrt2.
inline CMatrix basis_change_matrix(int l)
{
    if (l < 0)
        throw ArgumentError("sector index must be non-negative");
    auto factorial = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k)
            f *= k;
        return f;
    };
    const double r = 1.0 / std::sqrt(2.0);
    // poly[q] multiplies (D^+)^(deg - q) (E^+)^q.
    auto times = [](const std::vector<Complex>& poly, Complex cd, Complex ce) {
        std::vector<Complex> out(poly.size() + 1, Complex{});
        for (std::size_t q = 0; q < poly.size(); ++q) {
            out[q] += poly[q] * cd;
            out[q + 1] += poly[q] * ce;
        }
        return out;
    };
    CMatrix v(l + 1, l + 1);
    for (int m = 0; m <= l; ++m) {
        std::vector<Complex> poly{1.0};
        for (int k = 0; k < l - m; ++k)
            poly = times(poly, -kI * r, r);
        for (int k = 0; k < m; ++k)
            poly = times(poly, kI * r, r);
        for (int q = 0; q <= l; ++q)
            v(q, m) = poly[static_cast<std::size_t>(q)] *
                      std::sqrt(factorial(l - q) * factorial(q) / (factorial(l - m) * factorial(m)));
    }
    return v;
}

} // namespace holomem

#endif
