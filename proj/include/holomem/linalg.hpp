// Small dense helpers: exponentials of anti-Hermitian generators, norms and
// an adaptive fourth-order Magnus propagator for dY/dt = A(t) Y.
#ifndef HOLOMEM_LINALG_HPP
#define HOLOMEM_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "core.hpp"

namespace holomem::linalg {

/// exp(X) for anti-Hermitian X, computed through the Hermitian eigenproblem of
/// iX so the result is unitary to rounding.
inline CMatrix expm_skew(const CMatrix& x)
{
    const CMatrix herm = kI * x;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (herm + herm.adjoint()));
    const auto& vals = es.eigenvalues();
    CVector phases(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k)
        phases(k) = std::exp(-kI * vals(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(X) y for anti-Hermitian X and a state vector y: scaled Taylor series
/// summed to rounding, so the action is unitary to working precision.
inline CVector expm_skew_apply(const CMatrix& x, const CVector& y)
{
    const double nx = x.cwiseAbs().rowwise().sum().maxCoeff();
    const int chunks = std::max(1, static_cast<int>(std::ceil(nx / 0.5)));
    const CMatrix xs = x / static_cast<double>(chunks);
    CVector out = y;
    const double floor = 1e-18 * std::max(1.0, y.norm());
    for (int c = 0; c < chunks; ++c) {
        CVector term = out;
        CVector sum = out;
        for (int k = 1; k < 40; ++k) {
            term = (xs * term) / static_cast<double>(k);
            sum += term;
            if (term.norm() <= floor)
                break;
        }
        out = std::move(sum);
    }
    return out;
}

/// Largest singular value.
inline double operator_norm(const CMatrix& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

/// Largest |eigenvalue| of a Hermitian matrix.
inline double hermitian_norm(const CMatrix& h)
{
    if (h.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// ||U^dagger U - 1||, operator norm.
inline double unitarity_defect(const CMatrix& u)
{
    return operator_norm(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

struct PropagationOptions {
    double tolerance = 1e-9;                                         ///< local error per step
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;                                       ///< 0 picks a default
    double generator_bound = std::numeric_limits<double>::infinity(); ///< cap on ||A|| h
    std::size_t max_steps = 100'000'000;
};

struct PropagationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

inline constexpr double kGaussOffset = 0.28867513459481287; // sqrt(3) / 6

template <class Generator>
CMatrix magnus4(Generator& gen, double t, double h)
{
    const CMatrix a1 = gen(t + (0.5 - kGaussOffset) * h);
    const CMatrix a2 = gen(t + (0.5 + kGaussOffset) * h);
    CMatrix omega = 0.5 * h * (a1 + a2);
    const CMatrix comm = a2.lazyProduct(a1) - a1.lazyProduct(a2);
    omega.noalias() += (std::sqrt(3.0) / 12.0) * h * h * comm;
    return omega;
}

template <class State>
State apply_exp(const CMatrix& omega, const State& y)
{
    if constexpr (State::ColsAtCompileTime == 1)
        return expm_skew_apply(omega, y);
    else
        return expm_skew(omega) * y;
}

inline std::vector<double> merge_stops(double t0, double t1, const std::vector<double>& breaks,
                                       const std::vector<double>& samples)
{
    std::vector<double> stops;
    for (double b : breaks)
        if (b > t0 && b < t1)
            stops.push_back(b);
    for (double s : samples)
        if (s > t0 && s < t1)
            stops.push_back(s);
    stops.push_back(t1);
    std::sort(stops.begin(), stops.end());
    const double eps = 1e-13 * std::max(1.0, std::abs(t1));
    std::vector<double> out;
    for (double s : stops)
        if (out.empty() ? s > t0 + eps : s > out.back() + eps)
            out.push_back(s);
    if (out.empty() || out.back() != t1) {
        if (!out.empty() && t1 - out.back() <= eps)
            out.back() = t1;
        else
            out.push_back(t1);
    }
    return out;
}

} // namespace detail

/// Integrates dY/dt = A(t) Y from t0 to t1 with A anti-Hermitian, so every
/// step multiplies by a unitary exp(Omega) where Omega is the fourth-order
/// Magnus generator built from two Gauss-Legendre nodes. Step size follows
/// step doubling. The integrator lands exactly on every breakpoint and sample
/// time; `observe(k, t, y)` fires on sample k (samples must be sorted, and
/// a sample at t0 is reported before stepping).
template <class Generator, class State, class Observer>
PropagationStats propagate(Generator&& gen, State& y, double t0, double t1,
                           const std::vector<double>& breaks, const std::vector<double>& samples,
                           const PropagationOptions& opt, Observer&& observe)
{
    PropagationStats stats;
    std::size_t next_sample = 0;
    auto report = [&](double t) {
        const double eps = 1e-13 * std::max(1.0, std::abs(t1));
        while (next_sample < samples.size() && samples[next_sample] <= t + eps) {
            if (samples[next_sample] >= t - eps)
                observe(next_sample, t, y);
            ++next_sample;
        }
    };
    report(t0);
    if (t1 <= t0)
        return stats;

    const auto stops = detail::merge_stops(t0, t1, breaks, samples);
    double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(opt.max_step, 1e-2 * (t1 - t0));
    double t = t0;
    for (double stop : stops) {
        while (t < stop) {
            double step = std::min(h, opt.max_step);
            bool to_stop = false;
            if (stop - t <= step * (1.0 + 1e-12)) {
                step = stop - t;
                to_stop = true;
            }
            if (std::isfinite(opt.generator_bound)) {
                const double gn = gen(t + 0.5 * step).norm();
                if (gn * step > opt.generator_bound) {
                    step = opt.generator_bound / gn;
                    to_stop = false;
                }
            }
            const CMatrix full = detail::magnus4(gen, t, step);
            const CMatrix half1 = detail::magnus4(gen, t, 0.5 * step);
            const CMatrix half2 = detail::magnus4(gen, t + 0.5 * step, 0.5 * step);
            State coarse = detail::apply_exp(full, y);
            State fine = detail::apply_exp(half2, detail::apply_exp(half1, y));
            const double err = (coarse - fine).norm();
            const double grow = err > 0.0 ? 0.9 * std::pow(opt.tolerance / err, 0.2) : 4.0;
            if (err <= opt.tolerance || step <= 1e-14 * std::max(1.0, std::abs(t1))) {
                y = std::move(fine);
                t = to_stop ? stop : t + step;
                if (++stats.accepted > opt.max_steps)
                    throw Error("propagation exceeded " + std::to_string(opt.max_steps) + " steps");
                const double next = step * std::clamp(grow, 0.2, 4.0);
                if (!to_stop)
                    h = next;
                else if (grow < 1.0)
                    h = std::min(h, next);
            } else {
                ++stats.rejected;
                h = step * std::clamp(grow, 0.1, 0.9);
            }
        }
        t = stop;
        report(t);
    }
    return stats;
}

} // namespace holomem::linalg

#endif
