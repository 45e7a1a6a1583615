// Exact Schrodinger evolution inside one excitation sector, adiabaticity
// margins and dark-manifold bookkeeping.
#ifndef HOLOMEM_DYNAMICS_HPP
#define HOLOMEM_DYNAMICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "darkspace.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace holomem {

/// g sqrt(N) x_k / (g^2 N + Omega^2)^(3/2) for x_k = |dOmega_k/dt| and
/// x_k = Omega |delta_k|.
struct AdiabaticMargins {
    std::array<double, 2> rate{};
    std::array<double, 2> detuning{};
    double max = 0.0;
};

inline AdiabaticMargins adiabatic_margins(const SystemParams& p, const PulseSchedule& s, double t)
{
    const auto c = s.controls(t);
    const double om = c.omega();
    const double g = p.g_sqrt_n;
    const double denom = std::pow(g * g + om * om, 1.5);
    AdiabaticMargins m;
    m.rate = {g * std::abs(c.d_omega_1) / denom, g * std::abs(c.d_omega_2) / denom};
    m.detuning = {g * om * std::abs(p.delta_1) / denom, g * om * std::abs(p.delta_2) / denom};
    m.max = std::max({m.rate[0], m.rate[1], m.detuning[0], m.detuning[1]});
    return m;
}

/// Largest margin over a dense scan of [t0, t1] (whole schedule by default).
inline double max_adiabatic_margin(const SystemParams& p, const PulseSchedule& s, double t0 = 0.0,
                                   double t1 = -1.0, int per_piece = 256)
{
    if (t1 < 0.0)
        t1 = s.duration();
    double best = std::max(adiabatic_margins(p, s, t0).max, adiabatic_margins(p, s, t1).max);
    for (double t : s.scan_times(per_piece))
        if (t >= t0 && t <= t1)
            best = std::max(best, adiabatic_margins(p, s, t).max);
    return best;
}

inline double fidelity(const fock::SectorVector& psi, const fock::SectorVector& chi)
{
    if (psi.l != chi.l || psi.amplitudes.size() != chi.amplitudes.size())
        throw ArgumentError("fidelity of states from different sectors (" + std::to_string(psi.l) +
                            " vs " + std::to_string(chi.l) + ")");
    return std::clamp(std::norm(psi.amplitudes.dot(chi.amplitudes)), 0.0, 1.0);
}

struct DarkProjection {
    CVector coefficients; ///< c_m = <D_{l-m,m}(t)|psi>
    double leakage = 0.0; ///< 1 - sum |c_m|^2
};

inline DarkProjection dark_projection(const DarkBasis& basis, const fock::SectorVector& psi)
{
    if (psi.l != basis.l)
        throw ArgumentError("state and dark basis belong to different sectors");
    DarkProjection out;
    out.coefficients = basis.frame.adjoint() * psi.amplitudes;
    out.leakage = psi.amplitudes.squaredNorm() - out.coefficients.squaredNorm();
    return out;
}

inline DarkProjection dark_leakage(const SystemParams& p, const PulseSchedule& s, double t, int l,
                                   const fock::SectorVector& psi)
{
    return dark_projection(dark_basis(p, s, t, l), psi);
}

struct EvolutionSample {
    double t = 0.0;
    CVector dark;               ///< dark coefficients at t
    double leakage = 0.0;
    double photon_number = 0.0; ///< <a^+ a>
    double excited_number = 0.0; ///< <A^+ A>
};

struct EvolutionReport {
    fock::SectorVector final_state;
    std::vector<EvolutionSample> samples;
    double max_margin = 0.0;
    double norm_drift = 0.0;
    linalg::PropagationStats stats{};
};

struct EvolutionOptions {
    double tolerance = 1e-9; ///< local error bound per step
    int samples = 201;       ///< uniform dark-projection samples, endpoints included
};

/// i d/dt psi = H_l(t) psi on [t0, t1] under the full sector Hamiltonian.
inline EvolutionReport evolve_sector(const SystemParams& p, const PulseSchedule& s, int l,
                                     const fock::SectorVector& psi0, double t0, double t1,
                                     const EvolutionOptions& opt = {})
{
    const auto& sec = fock::sector(l);
    if (psi0.l != l || psi0.amplitudes.size() != sec.dim())
        throw ArgumentError("initial state does not belong to sector " + std::to_string(l));
    if (std::abs(psi0.norm() - 1.0) > 1e-6)
        throw ArgumentError("initial state is not normalized (norm " + std::to_string(psi0.norm()) + ")");
    if (!(0.0 <= t0 && t0 <= t1 && t1 <= s.duration()))
        throw ArgumentError("evolution interval must satisfy 0 <= t0 <= t1 <= T");

    const int n = std::max(opt.samples, 2);
    std::vector<double> times(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        times[static_cast<std::size_t>(k)] = t0 + (t1 - t0) * k / (n - 1);
    times.back() = t1;

    EvolutionReport rep;
    rep.samples.resize(static_cast<std::size_t>(n));
    const int photon = fock::mode_index(fock::Mode::photon);
    const int excited = fock::mode_index(fock::Mode::excited);
    auto observe = [&](std::size_t k, double t, const CVector& y) {
        fock::SectorVector v{l, y};
        auto proj = dark_leakage(p, s, t, l, v);
        auto& smp = rep.samples[k];
        smp.t = t;
        smp.dark = proj.coefficients;
        smp.leakage = std::clamp(proj.leakage, 0.0, 1.0 + 1e-9);
        smp.photon_number = fock::mode_occupation(photon, v);
        smp.excited_number = fock::mode_occupation(excited, v);
    };

    CVector y = psi0.amplitudes;
    auto gen = [&](double t) -> CMatrix { return -kI * sector_h(single_particle_h(p, s, t), sec); };
    linalg::PropagationOptions po;
    po.tolerance = opt.tolerance;
    if (t1 > t0) {
        rep.stats = linalg::propagate(gen, y, t0, t1, s.breakpoints(), times, po, observe);
    } else {
        for (std::size_t k = 0; k < times.size(); ++k)
            observe(k, t0, y);
    }
    rep.final_state = {l, y};
    rep.norm_drift = std::abs(y.norm() - psi0.norm());
    rep.max_margin = max_adiabatic_margin(p, s, t0, t1);
    return rep;
}

} // namespace holomem

#endif
