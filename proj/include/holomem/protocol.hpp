// Storage / retrieval protocol for photonic states: encoding into the dark
// manifold, write, κ-strokes that accumulate the holonomy angle, read-out,
// and the one-exciton geometric phase gate.
#ifndef HOLOMEM_PROTOCOL_HPP
#define HOLOMEM_PROTOCOL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "darkspace.hpp"
#include "dynamics.hpp"
#include "holonomy.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace holomem {

/// Photon-number amplitudes c_0^(l), l = 0..l_max.
struct PhotonState {
    std::vector<Complex> coefficients;

    int l_max() const { return static_cast<int>(coefficients.size()) - 1; }

    void validate() const
    {
        if (coefficients.empty())
            throw ArgumentError("photon state needs at least one coefficient");
        double n = 0.0;
        for (const auto& c : coefficients) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw ArgumentError("photon state has a non-finite coefficient");
            n += std::norm(c);
        }
        if (std::abs(n - 1.0) > 1e-12)
            throw ArgumentError("photon state is not normalized (sum |c|^2 = " + std::to_string(n) + ")");
        fock::check_capacity(l_max(), max_sector());
    }

    /// Rescales arbitrary amplitudes to unit norm.
    static PhotonState normalized(std::vector<Complex> c)
    {
        double n = 0.0;
        for (const auto& x : c)
            n += std::norm(x);
        if (!(n > 0.0))
            throw ArgumentError("photon state amplitudes are all zero");
        for (auto& x : c)
            x /= std::sqrt(n);
        return {std::move(c)};
    }

    static PhotonState fock(int l)
    {
        std::vector<Complex> c(static_cast<std::size_t>(l + 1), Complex{});
        c.back() = 1.0;
        return {std::move(c)};
    }
};

enum class RunMode { adiabatic, exact };

inline const char* mode_name(RunMode m) { return m == RunMode::adiabatic ? "adiabatic" : "exact"; }

/// c'_m = (-1)^(l-m) sqrt(l!) c0 / ((i sqrt2)^l sqrt(m! (l-m)!)), the photon
/// Fock component |l> = |D_{l,0}> written in the primed dark basis.
inline CVector primed_coefficients(Complex c0, int l)
{
    if (l < 0)
        throw ArgumentError("sector index must be non-negative");
    auto lgf = [](int n) { return std::lgamma(static_cast<double>(n) + 1.0); };
    const Complex pref = c0 / std::pow(kI * std::sqrt(2.0), l);
    CVector out(l + 1);
    for (int m = 0; m <= l; ++m) {
        const double mag = std::exp(0.5 * (lgf(l) - lgf(m) - lgf(l - m)));
        out(m) = ((l - m) % 2 == 0 ? 1.0 : -1.0) * mag * pref;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Endpoint checks

struct ProtocolThresholds {
    double endpoint_ratio = 10.0; ///< Omega >= ratio g sqrt(N) "large", <= g sqrt(N)/ratio "small"
};

inline void check_large(const SystemParams& p, const PulseSchedule& s, double t, const char* which,
                        const ProtocolThresholds& th)
{
    const double om = s.controls(t).omega();
    if (!(om >= th.endpoint_ratio * p.g_sqrt_n)) {
        std::ostringstream msg;
        msg << which << " endpoint t = " << t << ": Omega = " << om << " < " << th.endpoint_ratio
            << " g sqrt(N) = " << th.endpoint_ratio * p.g_sqrt_n;
        throw ProtocolError(msg.str());
    }
}

inline void check_small(const SystemParams& p, const PulseSchedule& s, double t, const char* which,
                        const ProtocolThresholds& th)
{
    const double om = s.controls(t).omega();
    if (!(om <= p.g_sqrt_n / th.endpoint_ratio)) {
        std::ostringstream msg;
        msg << which << " endpoint t = " << t << ": Omega = " << om << " > g sqrt(N) / "
            << th.endpoint_ratio << " = " << p.g_sqrt_n / th.endpoint_ratio;
        throw ProtocolError(msg.str());
    }
}

/// Omega(0) and Omega(T) both large: the photon mode is the dark mode at
/// both ends, so stored light is emitted back at T.
inline void check_cyclic(const SystemParams& p, const PulseSchedule& s, const ProtocolThresholds& th = {})
{
    check_large(p, s, 0.0, "cycle start", th);
    check_large(p, s, s.duration(), "cycle end", th);
}

// ---------------------------------------------------------------------------
// Retrieval condition

struct RetrievalCondition {
    double phi = 0.0;
    long j = 0;
    double deviation = 0.0; ///< |phi - 2 j pi|
};

inline RetrievalCondition retrieval_condition_for(double phi)
{
    RetrievalCondition r;
    r.phi = phi;
    r.j = std::lround(phi / (2.0 * kPi));
    r.deviation = std::abs(phi - 2.0 * kPi * static_cast<double>(r.j));
    return r;
}

inline RetrievalCondition retrieval_condition(const SystemParams& p, const PulseSchedule& s)
{
    return retrieval_condition_for(phi_of_t(p, s, s.duration()));
}

// ---------------------------------------------------------------------------
// Pulse family and phase design

/// Cycle family: write (Omega_high -> Omega_low at kappa_start), then n
/// stroke pairs, each a kappa sweep by delta_kappa at Omega_low followed by
/// the return sweep at Omega_return, and finally read (-> Omega_high).
/// Every pair adds delta_kappa (sin theta_low - sin theta_return) to phi;
/// kappa and Omega end where they started.
struct CycleFamily {
    double omega_high = 100.0;
    double omega_low = 0.02;
    double omega_return = 10.0;
    std::optional<double> kappa_start; ///< default 0 for phi >= 0, pi/2 otherwise
    double hold_time = 0.0;            ///< optional pause at Omega_low after the write
    double ramp_scale = 1.0;
    double max_margin = 1e-3;          ///< adiabatic margin bound the segment durations honour
    double margin_fill = 0.95;         ///< fraction of the bound used by each segment
    int max_strokes = 64;
    bool check_detuning = true;        ///< refuse designs whose detuning margin exceeds max_margin

    void validate(const SystemParams& p) const
    {
        for (double v : {omega_high, omega_low, omega_return, ramp_scale, max_margin, margin_fill})
            if (!(v > 0.0) || !std::isfinite(v))
                throw ArgumentError("cycle family amplitudes, ramp scale and margins must be positive");
        if (!(omega_low < omega_return && omega_return <= omega_high))
            throw ArgumentError("cycle family needs omega_low < omega_return <= omega_high");
        if (margin_fill > 1.0)
            throw ArgumentError("margin_fill must not exceed 1");
        if (hold_time < 0.0 || !std::isfinite(hold_time))
            throw ArgumentError("hold_time must be non-negative");
        if (kappa_start && (*kappa_start < 0.0 || *kappa_start > kPi / 2))
            throw ArgumentError("kappa_start must lie in [0, pi/2]");
        if (max_strokes < 0)
            throw ArgumentError("max_strokes must be non-negative");
        p.validate();
    }

    /// Per-pair phi gain per unit kappa sweep.
    double gain(const SystemParams& p) const
    {
        return std::sin(std::atan2(p.g_sqrt_n, omega_low)) - std::sin(std::atan2(p.g_sqrt_n, omega_return));
    }
};

namespace detail {

/// Largest Omega-rate margin of one edge stretched over unit time.
inline double unit_rate_margin(const SystemParams& p, const Waypoint& a, const Waypoint& b, double ramp_scale)
{
    auto seg = PulseSchedule::from_waypoints({{0.0, a.omega, a.kappa}, {1.0, b.omega, b.kappa}}, ramp_scale);
    SystemParams q = p;
    q.delta_1 = q.delta_2 = 0.0;
    return max_adiabatic_margin(q, seg, 0.0, 1.0, 512);
}

/// Largest detuning margin Omega |delta_k| g / (g^2 + Omega^2)^(3/2) over
/// Omega in [lo, hi]; no choice of durations removes it.
inline double detuning_margin_bound(const SystemParams& p, double lo, double hi)
{
    const double g = p.g_sqrt_n;
    const double d = std::max(std::abs(p.delta_1), std::abs(p.delta_2));
    auto f = [&](double om) { return g * om * d / std::pow(g * g + om * om, 1.5); };
    const double peak = g / std::sqrt(2.0);
    return std::max({f(lo), f(hi), (peak > lo && peak < hi) ? f(peak) : 0.0});
}

} // namespace detail

/// Knots of the family with `strokes` pairs of signed sweep `delta_kappa`.
/// Durations follow the margin bound (0 = unit durations, used for phi only).
inline PulseSchedule build_cycle_schedule(const SystemParams& p, const CycleFamily& f, int strokes,
                                          double delta_kappa, double kappa_start, bool size_for_margin = true)
{
    f.validate(p);
    if (strokes < 0)
        throw ArgumentError("stroke count must be non-negative");
    const double k1 = kappa_start + delta_kappa;
    if (kappa_start < 0.0 || kappa_start > kPi / 2 || k1 < -1e-15 || k1 > kPi / 2 + 1e-15)
        throw ArgumentError("kappa sweep leaves [0, pi/2]");
    const double k_end = std::clamp(k1, 0.0, kPi / 2);

    std::vector<Waypoint> shape{{0.0, f.omega_high, kappa_start}, {0.0, f.omega_low, kappa_start}};
    std::vector<bool> is_hold{false, false};
    if (f.hold_time > 0.0) {
        shape.push_back({0.0, f.omega_low, kappa_start});
        is_hold.push_back(true);
    }
    for (int i = 0; i < strokes; ++i) {
        shape.push_back({0.0, f.omega_low, k_end});
        shape.push_back({0.0, f.omega_return, k_end});
        shape.push_back({0.0, f.omega_return, kappa_start});
        shape.push_back({0.0, i + 1 < strokes ? f.omega_low : f.omega_high, kappa_start});
        is_hold.insert(is_hold.end(), 4, false);
    }
    if (strokes == 0) {
        shape.push_back({0.0, f.omega_high, kappa_start});
        is_hold.push_back(false);
    }

    double t = 0.0;
    for (std::size_t i = 1; i < shape.size(); ++i) {
        double dur = 1.0;
        if (is_hold[i])
            dur = f.hold_time;
        else if (size_for_margin) {
            const double m = detail::unit_rate_margin(p, shape[i - 1], shape[i], f.ramp_scale);
            dur = std::max(1.0, m / (f.margin_fill * f.max_margin));
        }
        t += dur;
        shape[i].t = t;
    }
    return PulseSchedule::from_waypoints(std::move(shape), f.ramp_scale);
}

/// One full-amplitude stroke pair of the default family: phi = (pi/2) times
/// the per-pair gain, kappa and Omega cyclic.
inline PulseSchedule default_cycle_schedule(const SystemParams& p, const CycleFamily& f = {})
{
    return build_cycle_schedule(p, f, 1, kPi / 2, 0.0);
}

struct DesignResult {
    PulseSchedule schedule;
    int strokes = 0;
    double delta_kappa = 0.0;
    double kappa_start = 0.0;
    double phi = 0.0;
    double max_margin = 0.0;
};

/// Bisection on the stroke amplitude |delta_kappa| (phi is monotone in it)
/// using the fewest stroke pairs that can reach the target.
inline DesignResult design_phase_schedule(const SystemParams& p, double target_phi, const CycleFamily& f = {},
                                          double tolerance = 1e-10)
{
    f.validate(p);
    if (!std::isfinite(target_phi))
        throw ArgumentError("target phase must be finite");
    const double det = detail::detuning_margin_bound(p, f.omega_low, f.omega_high);
    if (f.check_detuning && det > f.max_margin) {
        std::ostringstream msg;
        msg << "detuning margin " << det << " exceeds the bound " << f.max_margin
            << " for every duration; reduce |delta_k| or relax max_margin";
        throw DesignError(msg.str());
    }
    const double k0 = f.kappa_start.value_or(target_phi >= 0.0 ? 0.0 : kPi / 2);
    const double sign = target_phi >= 0.0 ? 1.0 : -1.0;
    const double room = sign > 0 ? kPi / 2 - k0 : k0;

    auto phi_for = [&](int n, double amp) {
        const auto s = build_cycle_schedule(p, f, n, sign * amp, k0, false);
        return phi_of_t(p, s, s.duration());
    };

    int n = 0;
    double amp = 0.0;
    if (target_phi != 0.0) {
        if (!(room > 0.0) || !(f.gain(p) > 0.0))
            throw DesignError("family cannot accumulate phase: kappa_start leaves no sweep room in the target "
                              "direction or omega_return does not exceed omega_low");
        const double per_pair = phi_for(1, room);
        const double needed = std::ceil(std::abs(target_phi) / std::abs(per_pair) - 1e-12);
        if (needed > f.max_strokes) {
            std::ostringstream msg;
            msg << "target phi " << target_phi << " unreachable: " << f.max_strokes
                << " stroke pairs reach at most " << f.max_strokes * per_pair << " (bracket [0, "
                << f.max_strokes * per_pair << "])";
            throw DesignError(msg.str());
        }
        n = std::max(1, static_cast<int>(needed));
        double lo = 0.0, hi = room;
        double f_lo = -std::abs(target_phi), f_hi = std::abs(phi_for(n, hi)) - std::abs(target_phi);
        if (f_hi < 0.0) {
            std::ostringstream msg;
            msg << "target phi " << target_phi << " outside bracket [0, " << sign * (f_hi + std::abs(target_phi))
                << "] for " << n << " stroke pairs";
            throw DesignError(msg.str());
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = std::abs(phi_for(n, mid)) - std::abs(target_phi);
            if (std::abs(fm) <= 0.1 * tolerance) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (f_lo < 0.0)) {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
                f_hi = fm;
            }
        }
        amp = 0.5 * (lo + hi);
    }

    DesignResult out{build_cycle_schedule(p, f, n, sign * amp, k0, true), n, sign * amp, k0, 0.0, 0.0};
    out.phi = phi_of_t(p, out.schedule, out.schedule.duration());
    out.max_margin = max_adiabatic_margin(p, out.schedule);
    if (std::abs(out.phi - target_phi) > std::max(tolerance, 1e-6)) {
        std::ostringstream msg;
        msg << "bisection ended at phi = " << out.phi << " for target " << target_phi;
        throw DesignError(msg.str());
    }
    if (f.check_detuning && out.max_margin > f.max_margin * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "designed schedule has margin " << out.max_margin << " above the bound " << f.max_margin;
        throw DesignError(msg.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adiabatic transport with sampling

struct TransportSample {
    double t = 0.0;
    CMatrix w; ///< W_l(0 -> t)
};

/// W_l(t0 -> t) at the requested sample times.
inline std::vector<TransportSample> holonomy_samples(const SystemParams& p, const PulseSchedule& s, int l,
                                                     double t0, const std::vector<double>& times,
                                                     const HolonomyOptions& opt = {})
{
    std::vector<TransportSample> out(times.size());
    CMatrix w = CMatrix::Identity(l + 1, l + 1);
    if (times.empty())
        return out;
    linalg::PropagationOptions po;
    po.tolerance = opt.tolerance;
    po.generator_bound = opt.step_bound;
    auto gen = [&](double t) { return connection_from_f(f_coefficients(p, s, t), l); };
    linalg::propagate(gen, w, t0, times.back(), s.breakpoints(), times, po,
                      [&](std::size_t k, double t, const CMatrix& y) { out[k] = {t, y}; });
    return out;
}

/// Photon-number and atomic occupation of a sector state.
struct Occupancy {
    double photon = 0.0;
    double excited = 0.0;
    double metastable = 0.0; ///< C1 + C2
    double atomic() const { return excited + metastable; }
};

inline Occupancy occupancy(const fock::SectorVector& v)
{
    Occupancy o;
    o.photon = fock::mode_occupation(0, v);
    o.excited = fock::mode_occupation(1, v);
    o.metastable = fock::mode_occupation(2, v) + fock::mode_occupation(3, v);
    return o;
}

struct SectorTrace {
    double t = 0.0;
    CVector dark;
    double leakage = 0.0;
    double photon = 0.0;
};

// ---------------------------------------------------------------------------
// Storage

struct StoredSector {
    int l = 0;
    double weight = 0.0;       ///< |c_0^(l)|^2
    CVector dark;              ///< dark coefficients at tau, per unit input amplitude
    double leakage = 0.0;
    Occupancy occupancy;       ///< per unit weight
    Complex overlap_adiabatic; ///< <adiabatic prediction | state> at tau
};

struct StorageReport {
    RunMode mode = RunMode::adiabatic;
    double tau = 0.0;
    std::vector<StoredSector> sectors;
    double photon_occupancy = 0.0; ///< weighted over sectors
    double atomic_occupancy = 0.0;
    double fidelity_to_adiabatic = 1.0;
    double max_margin = 0.0;
};

struct RunOptions {
    ProtocolThresholds thresholds{};
    EvolutionOptions evolution{};
    HolonomyOptions holonomy{};
};

inline StorageReport run_storage(const SystemParams& p, const PulseSchedule& s, const PhotonState& input,
                                 RunMode mode, const RunOptions& opt = {})
{
    input.validate();
    validate_schedule(p, s);
    const double tau = s.storage_time();
    check_large(p, s, 0.0, "write start", opt.thresholds);
    check_small(p, s, tau, "storage", opt.thresholds);

    StorageReport rep;
    rep.mode = mode;
    rep.tau = tau;
    rep.max_margin = max_adiabatic_margin(p, s, 0.0, tau);
    Complex total_overlap{};
    for (int l = 0; l <= input.l_max(); ++l) {
        const Complex c0 = input.coefficients[static_cast<std::size_t>(l)];
        StoredSector sec;
        sec.l = l;
        sec.weight = std::norm(c0);
        const auto frame_tau = dark_basis(p, s, tau, l).frame;
        const CMatrix w = holonomy_integrate(p, s, l, 0.0, tau, opt.holonomy).w;
        const CVector predicted = frame_tau * w.col(0);
        fock::SectorVector state{l, predicted};
        if (mode == RunMode::exact && l > 0) {
            const auto ev = evolve_sector(p, s, l, fock::fock_state({{l, 0, 0, 0}}), 0.0, tau, opt.evolution);
            state = ev.final_state;
        }
        const auto proj = dark_projection(dark_basis(p, s, tau, l), state);
        sec.dark = proj.coefficients;
        sec.leakage = std::max(0.0, proj.leakage);
        sec.occupancy = occupancy(state);
        sec.overlap_adiabatic = predicted.dot(state.amplitudes);
        rep.photon_occupancy += sec.weight * sec.occupancy.photon;
        rep.atomic_occupancy += sec.weight * sec.occupancy.atomic();
        total_overlap += sec.weight * sec.overlap_adiabatic;
        rep.sectors.push_back(std::move(sec));
    }
    rep.fidelity_to_adiabatic = std::clamp(std::norm(total_overlap), 0.0, 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Full cycle

struct CycleSector {
    int l = 0;
    double weight = 0.0;
    CMatrix holonomy;             ///< integrated W_l(0 -> T)
    fock::SectorVector final_state; ///< per unit input amplitude
    Complex overlap;              ///< <initial | final> per unit weight
    double leakage = 0.0;         ///< at T
    std::vector<SectorTrace> trace;
};

struct CycleReport {
    RunMode mode = RunMode::adiabatic;
    RetrievalCondition retrieval;
    std::vector<CycleSector> sectors;
    double fidelity = 0.0;
    double max_margin = 0.0;
    linalg::PropagationStats stats{};
};

/// Photon component |l> enters as |D_{l,0}(0)> in adiabatic mode (ideal
/// encoding) and as the bare Fock state |l, 0, 0, 0> in exact mode.
inline CycleReport run_cycle(const SystemParams& p, const PulseSchedule& s, const PhotonState& input, RunMode mode,
                             const RunOptions& opt = {})
{
    input.validate();
    validate_schedule(p, s);
    check_cyclic(p, s, opt.thresholds);
    const double T = s.duration();

    const int n = std::max(opt.evolution.samples, 2);
    std::vector<double> times(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        times[static_cast<std::size_t>(k)] = T * k / (n - 1);
    times.back() = T;

    CycleReport rep;
    rep.mode = mode;
    rep.retrieval = retrieval_condition(p, s);
    rep.max_margin = max_adiabatic_margin(p, s);
    Complex total{};
    for (int l = 0; l <= input.l_max(); ++l) {
        CycleSector sec;
        sec.l = l;
        sec.weight = std::norm(input.coefficients[static_cast<std::size_t>(l)]);
        const auto hs = holonomy_samples(p, s, l, 0.0, times, opt.holonomy);
        sec.holonomy = hs.back().w;

        const CMatrix frame0 = dark_basis(p, s, 0.0, l).frame;
        fock::SectorVector initial{l, frame0.col(0)};
        if (mode == RunMode::adiabatic || l == 0) {
            for (const auto& h : hs) {
                const CMatrix frame = dark_basis(p, s, h.t, l).frame;
                fock::SectorVector v{l, frame * h.w.col(0)};
                sec.trace.push_back({h.t, h.w.col(0), 0.0, fock::mode_occupation(0, v)});
            }
            sec.final_state = {l, dark_basis(p, s, T, l).frame * sec.holonomy.col(0)};
        } else {
            initial = fock::fock_state({{l, 0, 0, 0}});
            EvolutionOptions eo = opt.evolution;
            const auto ev = evolve_sector(p, s, l, initial, 0.0, T, eo);
            for (const auto& smp : ev.samples)
                sec.trace.push_back({smp.t, smp.dark, smp.leakage, smp.photon_number});
            sec.final_state = ev.final_state;
            rep.stats.accepted += ev.stats.accepted;
            rep.stats.rejected += ev.stats.rejected;
        }
        sec.overlap = initial.amplitudes.dot(sec.final_state.amplitudes);
        sec.leakage = std::max(0.0, dark_leakage(p, s, T, l, sec.final_state).leakage);
        total += sec.weight * sec.overlap;
        rep.sectors.push_back(std::move(sec));
    }
    rep.fidelity = std::clamp(std::norm(total), 0.0, 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// One-exciton qubit: |0> = E'^+|0>, |1> = D'^+|0>

/// diag(e^{i phi(T)}, e^{-i phi(T)}) on (|0>, |1>).
inline Eigen::Matrix2cd qubit_gate(const SystemParams& p, const PulseSchedule& s,
                                   const ProtocolThresholds& th = {})
{
    check_cyclic(p, s, th);
    const double phi = phi_of_t(p, s, s.duration());
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    u(0, 0) = std::exp(kI * phi);
    u(1, 1) = std::exp(-kI * phi);
    return u;
}

/// Integrated l = 1 holonomy expressed on (|0>, |1>); valid off resonance.
inline Eigen::Matrix2cd qubit_gate_integrated(const SystemParams& p, const PulseSchedule& s,
                                              const RunOptions& opt = {})
{
    check_cyclic(p, s, opt.thresholds);
    const CMatrix v = basis_change_matrix(1);
    const CMatrix w = holonomy_integrate(p, s, 1, 0.0, s.duration(), opt.holonomy).w;
    const CMatrix wp = v.adjoint() * w * v; // primed order (D', E')
    Eigen::Matrix2cd u;
    u << wp(1, 1), wp(1, 0), wp(0, 1), wp(0, 0);
    return u;
}

struct ExactGate {
    Eigen::Matrix2cd gate;        ///< <q_i(T)| psi_j(T)> on the primed frame at T
    double gate_fidelity = 0.0;   ///< |Tr(U^+ V)|^2 / 4 against qubit_gate
    double leakage = 0.0;         ///< worst column
    double max_margin = 0.0;
};

/// Evolves E'^+|0> and D'^+|0> under the full sector Hamiltonian.
inline ExactGate qubit_gate_exact(const SystemParams& p, const PulseSchedule& s, const RunOptions& opt = {})
{
    check_cyclic(p, s, opt.thresholds);
    validate_schedule(p, s);
    const double T = s.duration();
    const CMatrix f0 = dark_basis(p, s, 0.0, 1, true).frame;
    const CMatrix fT = dark_basis(p, s, T, 1, true).frame;
    ExactGate out;
    const int order[2] = {1, 0}; // qubit |0> is the E' column, |1> the D' column
    for (int j = 0; j < 2; ++j) {
        EvolutionOptions eo = opt.evolution;
        eo.samples = 2;
        const auto ev = evolve_sector(p, s, 1, {1, f0.col(order[j])}, 0.0, T, eo);
        const CVector proj = fT.adjoint() * ev.final_state.amplitudes;
        for (int i = 0; i < 2; ++i)
            out.gate(i, j) = proj(order[i]);
        out.leakage = std::max(out.leakage, std::max(0.0, 1.0 - proj.squaredNorm()));
    }
    const Eigen::Matrix2cd ideal = qubit_gate(p, s, opt.thresholds);
    out.gate_fidelity = std::clamp(std::norm((ideal.adjoint() * out.gate).trace()) / 4.0, 0.0, 1.0);
    out.max_margin = max_adiabatic_margin(p, s);
    return out;
}

} // namespace holomem

#endif
