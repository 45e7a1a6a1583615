// Fixed-excitation sectors of four bosonic modes (probe photon a, excited
// collective mode A, meta-stable collective modes C1 and C2).
#ifndef HOLOMEM_FOCK_HPP
#define HOLOMEM_FOCK_HPP

#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "core.hpp"

namespace holomem::fock {

enum class Mode : int { photon = 0, excited = 1, meta1 = 2, meta2 = 3 };

inline constexpr int kModeCount = 4;
inline constexpr std::array<const char*, kModeCount> kModeNames{"a", "A", "C1", "C2"};

inline int mode_index(Mode m) { return static_cast<int>(m); }

inline void check_mode_index(int i)
{
    if (i < 0 || i >= kModeCount)
        throw ArgumentError("mode index " + std::to_string(i) + " outside {a, A, C1, C2}");
}

/// Amplitudes over (a, A, C1, C2).
using ModeAmplitudes = Eigen::Vector4cd;

struct OccupationState {
    std::array<int, kModeCount> n{};

    int total() const { return n[0] + n[1] + n[2] + n[3]; }
    int operator[](int i) const { return n[i]; }
    auto operator<=>(const OccupationState&) const = default;
};

/// Ordered occupation basis of the l-excitation sector. States are sorted
/// lexicographically descending on (n_a, n_A, n_C1, n_C2).
class SectorBasis {
public:
    SectorBasis() = default;
    SectorBasis(int l, std::vector<OccupationState> states)
        : l_(l), states_(std::move(states))
    {
        for (std::size_t i = 0; i < states_.size(); ++i)
            index_.emplace(states_[i], static_cast<int>(i));
    }

    int sector() const { return l_; }
    int size() const { return static_cast<int>(states_.size()); }
    const OccupationState& operator[](int i) const { return states_[static_cast<std::size_t>(i)]; }
    const std::vector<OccupationState>& states() const { return states_; }

    /// Position of `s` in the basis, or -1 when `s` is not in this sector.
    int index_of(const OccupationState& s) const
    {
        auto it = index_.find(s);
        return it == index_.end() ? -1 : it->second;
    }

private:
    int l_ = 0;
    std::vector<OccupationState> states_;
    std::map<OccupationState, int> index_;
};

/// State amplitudes over the basis of sector l.
struct SectorVector {
    int l = 0;
    CVector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

inline long binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline void check_capacity(int l, int limit)
{
    if (l < 0)
        throw ArgumentError("sector index must be non-negative, got " + std::to_string(l));
    if (l > limit)
        throw CapacityError("sector " + std::to_string(l) + " exceeds the maximum sector " +
                            std::to_string(limit) + " (set HOLOMEM_MAX_SECTOR to raise it)");
}

inline SectorBasis sector_basis(int l, int limit)
{
    check_capacity(l, limit);
    std::vector<OccupationState> states;
    states.reserve(static_cast<std::size_t>(binomial(l + 3, 3)));
    for (int na = l; na >= 0; --na)
        for (int nA = l - na; nA >= 0; --nA)
            for (int n1 = l - na - nA; n1 >= 0; --n1)
                states.push_back({{na, nA, n1, l - na - nA - n1}});
    return SectorBasis(l, std::move(states));
}

inline SectorBasis sector_basis(int l) { return sector_basis(l, max_sector()); }

/// Matrix of a_i^dagger a_j on sector l (number conserving, square).
inline CMatrix bilinear(int i, int j, const SectorBasis& basis)
{
    check_mode_index(i);
    check_mode_index(j);
    const int d = basis.size();
    CMatrix m = CMatrix::Zero(d, d);
    for (int q = 0; q < d; ++q) {
        OccupationState s = basis[q];
        if (s.n[j] == 0)
            continue;
        double amp = std::sqrt(static_cast<double>(s.n[j]));
        s.n[j] -= 1;
        amp *= std::sqrt(static_cast<double>(s.n[i] + 1));
        s.n[i] += 1;
        m(basis.index_of(s), q) += amp;
    }
    return m;
}

inline CMatrix bilinear(int i, int j, int l) { return bilinear(i, j, sector_basis(l)); }

inline CMatrix bilinear(Mode i, Mode j, int l) { return bilinear(mode_index(i), mode_index(j), l); }

/// Basis plus all sixteen bilinears of one sector, built once and shared.
struct Sector {
    SectorBasis basis;
    std::array<CMatrix, kModeCount * kModeCount> bilinears;

    explicit Sector(int l) : basis(sector_basis(l))
    {
        for (int i = 0; i < kModeCount; ++i)
            for (int j = 0; j < kModeCount; ++j)
                bilinears[static_cast<std::size_t>(i * kModeCount + j)] = bilinear(i, j, basis);
    }

    int l() const { return basis.sector(); }
    int dim() const { return basis.size(); }
    const CMatrix& op(int i, int j) const { return bilinears[static_cast<std::size_t>(i * kModeCount + j)]; }
};

/// Shared immutable sector data; thread-safe memoization.
inline const Sector& sector(int l)
{
    check_capacity(l, max_sector());
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const Sector>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[l];
    if (!slot)
        slot = std::make_unique<const Sector>(l);
    return *slot;
}

inline SectorVector vacuum()
{
    return {0, CVector::Ones(1)};
}

/// Basis vector |n_a, n_A, n_C1, n_C2>.
inline SectorVector fock_state(const OccupationState& s)
{
    const auto& sec = sector(s.total());
    SectorVector v{s.total(), CVector::Zero(sec.dim())};
    v.amplitudes(sec.basis.index_of(s)) = 1.0;
    return v;
}

/// (sum_i u_i a_i^dagger) v, mapping sector l to l+1.
inline SectorVector apply_creation(const ModeAmplitudes& u, const SectorVector& v)
{
    const auto& from = sector(v.l);
    if (v.amplitudes.size() != from.dim())
        throw ArgumentError("sector vector length does not match sector " + std::to_string(v.l));
    const auto& to = sector(v.l + 1);
    SectorVector out{v.l + 1, CVector::Zero(to.dim())};
    for (int q = 0; q < from.dim(); ++q) {
        const Complex vq = v.amplitudes(q);
        if (vq == Complex{})
            continue;
        for (int i = 0; i < kModeCount; ++i) {
            if (u(i) == Complex{})
                continue;
            OccupationState s = from.basis[q];
            const double amp = std::sqrt(static_cast<double>(s.n[i] + 1));
            s.n[i] += 1;
            out.amplitudes(to.basis.index_of(s)) += u(i) * amp * vq;
        }
    }
    return out;
}

/// Adjoint of apply_creation: (sum_i conj(u_i) a_i) v, mapping sector l to l-1.
inline SectorVector apply_annihilation(const ModeAmplitudes& u, const SectorVector& v)
{
    if (v.l == 0)
        throw ArgumentError("cannot annihilate an excitation in the vacuum sector");
    const auto& from = sector(v.l);
    if (v.amplitudes.size() != from.dim())
        throw ArgumentError("sector vector length does not match sector " + std::to_string(v.l));
    const auto& to = sector(v.l - 1);
    SectorVector out{v.l - 1, CVector::Zero(to.dim())};
    for (int q = 0; q < from.dim(); ++q) {
        const Complex vq = v.amplitudes(q);
        if (vq == Complex{})
            continue;
        for (int i = 0; i < kModeCount; ++i) {
            OccupationState s = from.basis[q];
            if (s.n[i] == 0 || u(i) == Complex{})
                continue;
            const double amp = std::sqrt(static_cast<double>(s.n[i]));
            s.n[i] -= 1;
            out.amplitudes(to.basis.index_of(s)) += std::conj(u(i)) * amp * vq;
        }
    }
    return out;
}

/// <v| a_i^dagger a_i |v>
inline double mode_occupation(int i, const SectorVector& v)
{
    check_mode_index(i);
    const auto& sec = sector(v.l);
    double n = 0.0;
    for (int q = 0; q < sec.dim(); ++q)
        n += sec.basis[q].n[i] * std::norm(v.amplitudes(q));
    return n;
}

} // namespace holomem::fock

#endif
