// Polariton mode vectors and the instantaneous dark-state frames
//   |D_{p,q}(t)> = D^+^p E^+^q |0> / sqrt(p! q!)
// of every excitation sector.
#ifndef HOLOMEM_DARKSPACE_HPP
#define HOLOMEM_DARKSPACE_HPP

#include <cmath>
#include <utility>

#include "fock.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace holomem {

enum class Polariton { D, E, D_primed, E_primed, B };

/// One polariton mode. `amplitudes` are the coefficients multiplying the
/// annihilation operators (a, A, C1, C2) exactly as the operator is written;
/// the matching creation operator carries the complex conjugates.
struct ModeVector {
    fock::ModeAmplitudes amplitudes = fock::ModeAmplitudes::Zero();
    Polariton label = Polariton::D;

    /// Coefficients of the creation operator, i.e. the one-excitation state.
    fock::ModeAmplitudes creation() const { return amplitudes.conjugate(); }
};

struct DarkModes {
    ModeVector d;
    ModeVector e;
};

inline DarkModes dark_mode_vectors(const MixingAngles& m)
{
    const double ct = std::cos(m.theta), st = std::sin(m.theta);
    const double ck = std::cos(m.kappa), sk = std::sin(m.kappa);
    const Complex p1 = std::exp(kI * m.phi_1), p2 = std::exp(kI * m.phi_2);
    DarkModes out;
    out.d.label = Polariton::D;
    out.d.amplitudes << ct, 0.0, -st * p1 * ck, -st * p2 * sk;
    out.e.label = Polariton::E;
    out.e.amplitudes << 0.0, 0.0, -p1 * sk, p2 * ck;
    return out;
}

inline DarkModes dark_mode_vectors(const SystemParams& p, const PulseSchedule& s, double t)
{
    return dark_mode_vectors(mixing_angles(p, s, t));
}

/// D' = (iD + E)/sqrt(2), E' = (-iD + E)/sqrt(2).
inline DarkModes primed_mode_vectors(const DarkModes& u)
{
    const double r = 1.0 / std::sqrt(2.0);
    DarkModes out;
    out.d.label = Polariton::D_primed;
    out.d.amplitudes = r * (kI * u.d.amplitudes + u.e.amplitudes);
    out.e.label = Polariton::E_primed;
    out.e.amplitudes = r * (-kI * u.d.amplitudes + u.e.amplitudes);
    return out;
}

inline DarkModes primed_mode_vectors(const SystemParams& p, const PulseSchedule& s, double t)
{
    return primed_mode_vectors(dark_mode_vectors(p, s, t));
}

inline ModeVector bright_mode_vector(const MixingAngles& m)
{
    const double ct = std::cos(m.theta), st = std::sin(m.theta);
    const double ck = std::cos(m.kappa), sk = std::sin(m.kappa);
    ModeVector b;
    b.label = Polariton::B;
    b.amplitudes << st, 0.0, ct * std::exp(kI * m.phi_1) * ck, ct * std::exp(kI * m.phi_2) * sk;
    return b;
}

inline ModeVector bright_mode_vector(const SystemParams& p, const PulseSchedule& s, double t)
{
    return bright_mode_vector(mixing_angles(p, s, t));
}

/// Orthonormal frame of the l-excitation dark subspace; column m holds
/// |D_{l-m,m}> (or its primed analogue).
struct DarkBasis {
    int l = 0;
    CMatrix frame;
    bool primed = false;
    double t = 0.0;

    int size() const { return l + 1; }
    fock::SectorVector column(int m) const { return {l, frame.col(m)}; }
};

/// D^+^(l-m) E^+^m |0> / sqrt((l-m)! m!) for m = 0..l.
inline CMatrix dark_frame(const DarkModes& modes, int l)
{
    const auto& sec = fock::sector(l);
    const auto d_dag = modes.d.creation();
    const auto e_dag = modes.e.creation();
    CMatrix frame(sec.dim(), l + 1);
    fock::SectorVector e_power = fock::vacuum();
    double e_fact = 1.0;
    for (int m = 0; m <= l; ++m) {
        if (m > 0) {
            e_power = fock::apply_creation(e_dag, e_power);
            e_fact *= m;
        }
        fock::SectorVector v = e_power;
        double d_fact = 1.0;
        for (int k = 1; k <= l - m; ++k) {
            v = fock::apply_creation(d_dag, v);
            d_fact *= k;
        }
        frame.col(m) = v.amplitudes / std::sqrt(d_fact * e_fact);
    }
    return frame;
}

inline DarkBasis dark_basis(const SystemParams& p, const PulseSchedule& s, double t, int l,
                            bool primed = false)
{
    fock::check_capacity(l, max_sector());
    auto modes = dark_mode_vectors(p, s, t);
    if (primed)
        modes = primed_mode_vectors(modes);
    return {l, dark_frame(modes, l), primed, t};
}

/// max_m || H_l(t) |D_{l-m,m}(t)> ||
inline double darkness_residual(const SystemParams& p, const PulseSchedule& s, double t, int l)
{
    const CMatrix h = sector_h(p, s, t, l);
    const auto basis = dark_basis(p, s, t, l);
    return (h * basis.frame).colwise().norm().maxCoeff();
}

/// Orthonormality defect ||F^dagger F - 1|| of a frame.
inline double frame_defect(const CMatrix& frame)
{
    return linalg::operator_norm(frame.adjoint() * frame -
                                 CMatrix::Identity(frame.cols(), frame.cols()));
}

} // namespace holomem

#endif
