// Brute-force N-atom oracle: collective operators built from single-atom
// flips on the full tensor space (4 levels per atom, truncated photon mode),
// with no bosonization.
#ifndef HOLOMEM_FINITE_N_HPP
#define HOLOMEM_FINITE_N_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "linalg.hpp"
#include "model.hpp"

namespace holomem::finite_n {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Atomic levels; the index is the base-4 digit of an atom in a basis label.
enum Level : int { b = 0, a = 1, c1 = 2, c2 = 3 };

inline constexpr int kMaxAtoms = 6;
inline constexpr int kMaxPhotons = 3;

/// Basis |n_photon> (x) |s_1 ... s_N>, index n_photon 4^N + sum_j s_j 4^(j-1).
class FiniteSystem {
public:
    FiniteSystem(int atoms, int n_max) : atoms_(atoms), n_max_(n_max)
    {
        if (atoms < 1 || atoms > kMaxAtoms)
            throw CapacityError("atom count " + std::to_string(atoms) + " outside [1, " +
                                std::to_string(kMaxAtoms) + "]");
        if (n_max < 0 || n_max > kMaxPhotons)
            throw CapacityError("photon truncation " + std::to_string(n_max) + " outside [0, " +
                                std::to_string(kMaxPhotons) + "]");
        atom_dim_ = 1;
        for (int j = 0; j < atoms; ++j)
            atom_dim_ *= 4;
        dim_ = atom_dim_ * (n_max + 1);

        const double r = 1.0 / std::sqrt(static_cast<double>(atoms));
        s_ = collective(a, a, 1.0);
        a_ = collective(b, a, r);
        c_[0] = collective(b, c1, r);
        c_[1] = collective(b, c2, r);
        tm_[0] = collective(c1, a, 1.0);
        tm_[1] = collective(c2, a, 1.0);
        tp_[0] = tm_[0].adjoint();
        tp_[1] = tm_[1].adjoint();

        std::vector<Eigen::Triplet<Complex>> trip;
        for (long q = atom_dim_; q < dim_; ++q) {
            const long n = q / atom_dim_;
            trip.emplace_back(q - atom_dim_, q, std::sqrt(static_cast<double>(n)));
        }
        photon_.resize(dim_, dim_);
        photon_.setFromTriplets(trip.begin(), trip.end());
    }

    int atoms() const { return atoms_; }
    int n_max() const { return n_max_; }
    long dim() const { return dim_; }

    const SparseMatrix& S() const { return s_; }                  ///< sum sigma_aa
    const SparseMatrix& A() const { return a_; }                  ///< N^-1/2 sum sigma_ba
    const SparseMatrix& C(int k) const { return c_.at(idx(k)); }  ///< N^-1/2 sum sigma_bk
    const SparseMatrix& T_minus(int k) const { return tm_.at(idx(k)); } ///< sum sigma_ka
    const SparseMatrix& T_plus(int k) const { return tp_.at(idx(k)); }
    const SparseMatrix& photon() const { return photon_; }        ///< truncated a

    /// sigma_{mu nu} on one atom (0-based).
    SparseMatrix flip(int atom, Level mu, Level nu) const
    {
        if (atom < 0 || atom >= atoms_)
            throw ArgumentError("atom index out of range");
        std::vector<Eigen::Triplet<Complex>> trip;
        add_flip(trip, atom, mu, nu, 1.0);
        SparseMatrix m(dim_, dim_);
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }

    long index(int n_photon, const std::vector<int>& levels) const
    {
        if (static_cast<int>(levels.size()) != atoms_ || n_photon < 0 || n_photon > n_max_)
            throw ArgumentError("basis label does not match the system");
        long q = 0, w = 1;
        for (int s : levels) {
            if (s < 0 || s > 3)
                throw ArgumentError("atomic level must be in 0..3");
            q += s * w;
            w *= 4;
        }
        return n_photon * atom_dim_ + q;
    }

    /// Photon number plus number of atoms out of |b>.
    int excitation(long q) const
    {
        int e = static_cast<int>(q / atom_dim_);
        for (long r = q % atom_dim_; r > 0; r /= 4)
            e += (r % 4) != 0;
        return e;
    }

    /// |b...b> (x) |0>
    CVector ground() const
    {
        CVector v = CVector::Zero(dim_);
        v(0) = 1.0;
        return v;
    }

private:
    static std::size_t idx(int k)
    {
        if (k != 1 && k != 2)
            throw ArgumentError("metastable index must be 1 or 2");
        return static_cast<std::size_t>(k - 1);
    }

    void add_flip(std::vector<Eigen::Triplet<Complex>>& trip, int atom, int mu, int nu, double scale) const
    {
        long w = 1;
        for (int j = 0; j < atom; ++j)
            w *= 4;
        for (long q = 0; q < dim_; ++q)
            if ((q / w) % 4 == nu)
                trip.emplace_back(q + (mu - nu) * w, q, scale);
    }

    SparseMatrix collective(Level mu, Level nu, double scale) const
    {
        std::vector<Eigen::Triplet<Complex>> trip;
        for (int j = 0; j < atoms_; ++j)
            add_flip(trip, j, mu, nu, scale);
        SparseMatrix m(dim_, dim_);
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }

    int atoms_;
    int n_max_;
    long atom_dim_ = 1;
    long dim_ = 1;
    SparseMatrix s_, a_, photon_;
    std::array<SparseMatrix, 2> c_, tm_, tp_;
};

inline FiniteSystem build_finite_system(int atoms, int n_max) { return FiniteSystem(atoms, n_max); }

/// Delta_p S + (g sqrt(N) a A^+ + Omega_1 e^{i phi_1} T+^(1) + Omega_2 e^{i phi_2} T+^(2) + h.c.)
inline SparseMatrix finite_hamiltonian(const FiniteSystem& fs, const SystemParams& p, double omega_1,
                                       double omega_2, double t)
{
    const SparseMatrix a_dag_atoms = fs.A().adjoint();
    SparseMatrix coupling = Complex(p.g_sqrt_n) * (fs.photon() * a_dag_atoms);
    coupling += (omega_1 * std::exp(kI * (p.delta_1 * t))) * fs.T_plus(1);
    coupling += (omega_2 * std::exp(kI * (p.delta_2 * t))) * fs.T_plus(2);
    SparseMatrix h = Complex(p.delta_p) * fs.S();
    h += coupling;
    h += SparseMatrix(coupling.adjoint());
    h.prune(Complex{});
    return h;
}

inline SparseMatrix finite_hamiltonian(const FiniteSystem& fs, const SystemParams& p, const PulseSchedule& s,
                                       double t)
{
    const auto c = s.controls(t);
    return finite_hamiltonian(fs, p, c.omega_1, c.omega_2, t);
}

/// Frobenius norm, an upper bound on the operator norm.
inline double frobenius(const SparseMatrix& m) { return m.norm(); }

inline SparseMatrix commutator(const SparseMatrix& x, const SparseMatrix& y)
{
    SparseMatrix out = x * y;
    out -= y * x;
    return out;
}

enum class StateSpec { ground, one_excitation };

/// <psi| [C_k, C_k^+] - 1 |psi> in the ground state or in the normalized
/// symmetric one-excitation state C_k^+ |G>.
inline double commutator_defect(const FiniteSystem& fs, StateSpec spec, int k = 1)
{
    const SparseMatrix ck = fs.C(k);
    const SparseMatrix ckd = ck.adjoint();
    CVector psi = fs.ground();
    if (spec == StateSpec::one_excitation) {
        psi = ckd * psi;
        psi.normalize();
    }
    const CVector x = ck * (ckd * psi) - ckd * (ck * psi);
    return (psi.dot(x)).real() - psi.squaredNorm();
}

/// Orthonormal basis of the permutation-symmetric l-excitation subspace,
/// spanned by X^+ Y^+ ... |G> for X, Y in {a, A, C1, C2}.
inline CMatrix symmetric_block_basis(const FiniteSystem& fs, int l)
{
    if (l < 0 || l > 2)
        throw ArgumentError("symmetric blocks are available for l <= 2");
    if (l > fs.n_max())
        throw ArgumentError("photon truncation below the requested excitation number");
    const std::array<SparseMatrix, 4> raise{SparseMatrix(fs.photon().adjoint()), SparseMatrix(fs.A().adjoint()),
                                            SparseMatrix(fs.C(1).adjoint()), SparseMatrix(fs.C(2).adjoint())};
    std::vector<CVector> gen;
    if (l == 0)
        gen.push_back(fs.ground());
    else if (l == 1)
        for (const auto& x : raise)
            gen.push_back(x * fs.ground());
    else
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                gen.push_back(raise[static_cast<std::size_t>(i)] * (raise[static_cast<std::size_t>(j)] * fs.ground()));
    // Gram-Schmidt, twice for stability; vanishing vectors (too few atoms) drop out.
    std::vector<CVector> basis;
    for (auto v : gen) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis)
                v -= u * u.dot(v);
        const double n = v.norm();
        if (n > 1e-10)
            basis.push_back(v / n);
    }
    CMatrix q(fs.dim(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c)
        q.col(static_cast<Eigen::Index>(c)) = basis[c];
    return q;
}

/// Indices of basis states with the given excitation number.
inline std::vector<long> excitation_indices(const FiniteSystem& fs, int l)
{
    std::vector<long> out;
    for (long q = 0; q < fs.dim(); ++q)
        if (fs.excitation(q) == l)
            out.push_back(q);
    return out;
}

struct BlockSpectrum {
    RVector eigenvalues;         ///< ascending
    double invariance_residual;  ///< ||H Q - Q (Q^+ H Q)||_F
    double norm;                 ///< largest |eigenvalue|
};

/// Spectrum of H restricted to the symmetric l-excitation block.
inline BlockSpectrum symmetric_block_spectrum(const FiniteSystem& fs, const SparseMatrix& h, int l)
{
    const CMatrix q = symmetric_block_basis(fs, l);
    const CMatrix hq = h * q;
    const CMatrix hb = q.adjoint() * hq;
    BlockSpectrum out;
    out.invariance_residual = (hq - q * hb).norm();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (hb + hb.adjoint()), Eigen::EigenvaluesOnly);
    out.eigenvalues = es.eigenvalues();
    out.norm = out.eigenvalues.size() ? out.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    return out;
}

/// Spectrum of H on the full l-excitation eigenspace of the conserved
/// excitation number (dense; intended for small systems).
inline RVector excitation_block_spectrum(const FiniteSystem& fs, const SparseMatrix& h, int l)
{
    const auto idx = excitation_indices(fs, l);
    const auto n = static_cast<Eigen::Index>(idx.size());
    CMatrix block = CMatrix::Zero(n, n);
    std::vector<long> pos(static_cast<std::size_t>(fs.dim()), -1);
    for (Eigen::Index i = 0; i < n; ++i)
        pos[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = i;
    for (int c = 0; c < h.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(h, c); it; ++it) {
            const long r = pos[static_cast<std::size_t>(it.row())];
            const long k = pos[static_cast<std::size_t>(it.col())];
            if ((r < 0) != (k < 0))
                throw Error("Hamiltonian mixes excitation numbers");
            if (r >= 0)
                block(r, k) = it.value();
        }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(block, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

struct DegeneracyCheck {
    int l = 0;
    int zero_modes = 0;
    int predicted = 0;          ///< l + 1
    double max_delta = 0.0;     ///< max |sorted finite eigenvalue - sorted boson eigenvalue|
    double threshold = 0.0;     ///< 1e-8 ||H_block||
    double invariance_residual = 0.0;
    RVector finite_spectrum;
    RVector boson_spectrum;
};

/// Zero modes of the symmetric l-excitation block against the boson sector.
inline DegeneracyCheck dark_degeneracy_check(const FiniteSystem& fs, const SystemParams& p, double omega_1,
                                             double omega_2, double t, int l)
{
    if (l < 0 || l > 2)
        throw ArgumentError("dark degeneracy check supports excitation 0, 1 or 2");
    const auto h = finite_hamiltonian(fs, p, omega_1, omega_2, t);
    const auto blk = symmetric_block_spectrum(fs, h, l);
    DegeneracyCheck out;
    out.l = l;
    out.predicted = l + 1;
    out.finite_spectrum = blk.eigenvalues;
    out.invariance_residual = blk.invariance_residual;
    out.threshold = 1e-8 * std::max(blk.norm, 1e-300);
    for (Eigen::Index i = 0; i < blk.eigenvalues.size(); ++i)
        out.zero_modes += std::abs(blk.eigenvalues(i)) < out.threshold;

    const auto h1 = single_particle_h(p, omega_1, omega_2, t);
    const CMatrix hb = sector_h(h1, fock::sector(l));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hb, Eigen::EigenvaluesOnly);
    out.boson_spectrum = es.eigenvalues();
    if (out.boson_spectrum.size() == out.finite_spectrum.size())
        out.max_delta = (out.boson_spectrum - out.finite_spectrum).cwiseAbs().maxCoeff();
    else
        out.max_delta = std::numeric_limits<double>::infinity();
    return out;
}

inline DegeneracyCheck dark_degeneracy_check(const FiniteSystem& fs, const SystemParams& p, const PulseSchedule& s,
                                             double t, int l)
{
    const auto c = s.controls(t);
    return dark_degeneracy_check(fs, p, c.omega_1, c.omega_2, t, l);
}

} // namespace holomem::finite_n

#endif
