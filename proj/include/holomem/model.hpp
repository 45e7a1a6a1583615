// System parameters, mixing angles and the bosonized interaction Hamiltonian
//   H = Delta_p A^+A + g sqrt(N) A^+ a + Omega_1 e^{i phi_1} A^+ C_1
//       + Omega_2 e^{i phi_2} A^+ C_2 + h.c.   (h.c. on the couplings only)
#ifndef HOLOMEM_MODEL_HPP
#define HOLOMEM_MODEL_HPP

#include <cmath>
#include <string>

#include "core.hpp"
#include "fock.hpp"
#include "schedule.hpp"

namespace holomem {

/// Frequencies in units of g sqrt(N) by default.
struct SystemParams {
    double g_sqrt_n = 1.0;
    double delta_p = 0.0;
    double delta_1 = 0.0; ///< three-photon mismatch Delta_1 - Delta_p
    double delta_2 = 0.0; ///< three-photon mismatch Delta_2 - Delta_p

    void validate() const
    {
        if (!std::isfinite(g_sqrt_n) || !std::isfinite(delta_p) || !std::isfinite(delta_1) ||
            !std::isfinite(delta_2))
            throw ArgumentError("system parameters must be finite");
        if (!(g_sqrt_n > 0.0))
            throw ArgumentError("g_sqrt_n must be positive");
    }

    bool resonant() const { return delta_1 == 0.0 && delta_2 == 0.0; }
};

struct MixingAngles {
    double omega = 0.0;     ///< sqrt(Omega_1^2 + Omega_2^2)
    double theta = 0.0;     ///< atan(g sqrt(N) / Omega)
    double kappa = 0.0;     ///< atan(Omega_2 / Omega_1)
    double kappa_dot = 0.0;
    double phi_1 = 0.0;     ///< delta_1 t
    double phi_2 = 0.0;     ///< delta_2 t
};

/// Smallest Omega allowed anywhere on a schedule, relative to g sqrt(N).
inline constexpr double kOmegaFloor = 1e-6;

inline MixingAngles mixing_angles(const SystemParams& p, const PulseSchedule& s, double t)
{
    const auto pol = s.polar(t);
    if (!(pol.omega > 0.0))
        throw DegenerateScheduleError("Omega(t) = 0 at t = " + std::to_string(t) +
                                      "; kappa is undefined");
    MixingAngles m;
    m.omega = pol.omega;
    m.theta = std::atan2(p.g_sqrt_n, pol.omega);
    m.kappa = pol.kappa;
    m.kappa_dot = pol.d_kappa;
    m.phi_1 = p.delta_1 * t;
    m.phi_2 = p.delta_2 * t;
    return m;
}

/// Checks parameters and the Omega >= 1e-6 g sqrt(N) floor on a dense scan.
inline void validate_schedule(const SystemParams& p, const PulseSchedule& s)
{
    p.validate();
    const double floor = kOmegaFloor * p.g_sqrt_n;
    for (double t : s.scan_times(64)) {
        const double om = s.controls(t).omega();
        if (!(om >= floor))
            throw DegenerateScheduleError("Omega(t) = " + std::to_string(om) + " at t = " +
                                          std::to_string(t) + " is below the floor 1e-6 g sqrt(N)");
    }
}

/// 4x4 single-excitation matrix h with H = sum_ij h_ij a_i^+ a_j.
inline Eigen::Matrix4cd single_particle_h(const SystemParams& p, double omega_1, double omega_2, double t)
{
    constexpr int a = 0, A = 1, C1 = 2, C2 = 3;
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h(A, A) = p.delta_p;
    h(A, a) = p.g_sqrt_n;
    h(A, C1) = omega_1 * std::exp(kI * (p.delta_1 * t));
    h(A, C2) = omega_2 * std::exp(kI * (p.delta_2 * t));
    h(a, A) = std::conj(h(A, a));
    h(C1, A) = std::conj(h(A, C1));
    h(C2, A) = std::conj(h(A, C2));
    return h;
}

inline Eigen::Matrix4cd single_particle_h(const SystemParams& p, const PulseSchedule& s, double t)
{
    const auto c = s.controls(t);
    return single_particle_h(p, c.omega_1, c.omega_2, t);
}

/// Sum_ij h_ij bilinear(i, j) on a prepared sector.
inline CMatrix sector_h(const Eigen::Matrix4cd& h, const fock::Sector& sec)
{
    CMatrix out = CMatrix::Zero(sec.dim(), sec.dim());
    for (int i = 0; i < fock::kModeCount; ++i)
        for (int j = 0; j < fock::kModeCount; ++j)
            if (h(i, j) != Complex{})
                out.noalias() += h(i, j) * sec.op(i, j);
    return out;
}

inline CMatrix sector_h(const SystemParams& p, const PulseSchedule& s, double t, int l)
{
    return sector_h(single_particle_h(p, s, t), fock::sector(l));
}

} // namespace holomem

#endif
