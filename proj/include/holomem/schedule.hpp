// Control-pulse schedules Omega_1(t), Omega_2(t) on [0, T].
#ifndef HOLOMEM_SCHEDULE_HPP
#define HOLOMEM_SCHEDULE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <math.h> // pchip calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>

#include "core.hpp"

namespace holomem {

/// Control amplitudes and their time derivatives at one instant.
struct ControlSample {
    double omega_1 = 0.0;
    double omega_2 = 0.0;
    double d_omega_1 = 0.0;
    double d_omega_2 = 0.0;

    double omega() const { return std::hypot(omega_1, omega_2); }
};

/// A knot of the parametric family: total amplitude Omega and mixing angle
/// kappa (Omega_1 = Omega cos kappa, Omega_2 = Omega sin kappa).
struct Waypoint {
    double t = 0.0;
    double omega = 0.0;
    double kappa = 0.0;
};

/// Piecewise schedule. The parametric form joins waypoints with
/// cosine-smoothed edges: kappa and the ramp angle atan(ramp_scale / Omega)
/// move along (1 - cos(pi tau)) / 2 between knots, so both are C^1 with zero
/// slope at every knot. The sampled form interpolates Omega_1 and Omega_2
/// with monotone piecewise-cubic Hermite interpolants.
class PulseSchedule {
public:
    static PulseSchedule from_waypoints(std::vector<Waypoint> points, double ramp_scale = 1.0)
    {
        if (points.size() < 2)
            throw ArgumentError("a waypoint schedule needs at least two waypoints");
        if (!(ramp_scale > 0.0) || !std::isfinite(ramp_scale))
            throw ArgumentError("ramp_scale must be positive and finite");
        if (points.front().t != 0.0)
            throw ArgumentError("the first waypoint must sit at t = 0");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            if (!std::isfinite(p.t) || !std::isfinite(p.omega) || !std::isfinite(p.kappa))
                throw ArgumentError("waypoint " + std::to_string(i) + " has a non-finite field");
            if (!(p.omega > 0.0))
                throw ArgumentError("waypoint " + std::to_string(i) + " has omega <= 0");
            if (p.kappa < 0.0 || p.kappa > kPi / 2)
                throw ArgumentError("waypoint " + std::to_string(i) + " has kappa outside [0, pi/2]");
            if (i > 0 && !(p.t > points[i - 1].t))
                throw ArgumentError("waypoint times must be strictly increasing (index " +
                                    std::to_string(i) + ")");
        }
        PulseSchedule s;
        s.points_ = std::move(points);
        s.ramp_scale_ = ramp_scale;
        return s;
    }

    static PulseSchedule from_samples(std::vector<double> times, std::vector<double> omega_1,
                                      std::vector<double> omega_2)
    {
        if (times.size() < 4)
            throw ArgumentError("a sampled schedule needs at least four samples");
        if (omega_1.size() != times.size() || omega_2.size() != times.size())
            throw ArgumentError("sampled schedule arrays must have equal length");
        if (times.front() != 0.0)
            throw ArgumentError("the first sample must sit at t = 0");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(times[i]) || !std::isfinite(omega_1[i]) || !std::isfinite(omega_2[i]))
                throw ArgumentError("sample " + std::to_string(i) + " has a non-finite field");
            if (omega_1[i] < 0.0 || omega_2[i] < 0.0)
                throw ArgumentError("sample " + std::to_string(i) + " has a negative amplitude");
            if (omega_1[i] == 0.0 && omega_2[i] == 0.0)
                throw ArgumentError("sample " + std::to_string(i) + " has Omega = 0");
            if (i > 0 && !(times[i] > times[i - 1]))
                throw ArgumentError("sample times must be strictly increasing (index " +
                                    std::to_string(i) + ")");
        }
        PulseSchedule s;
        s.times_ = times;
        s.samples_1_ = omega_1;
        s.samples_2_ = omega_2;
        s.interp_1_.emplace(std::move(std::vector<double>(times)), std::move(omega_1));
        s.interp_2_.emplace(std::move(times), std::move(omega_2));
        return s;
    }

    /// Constant controls held for `duration`.
    static PulseSchedule constant(double omega, double kappa, double duration)
    {
        return from_waypoints({{0.0, omega, kappa}, {duration, omega, kappa}});
    }

    bool is_sampled() const { return interp_1_.has_value(); }
    double duration() const { return is_sampled() ? times_.back() : points_.back().t; }
    double ramp_scale() const { return ramp_scale_; }
    const std::vector<Waypoint>& waypoints() const { return points_; }
    const std::vector<double>& sample_times() const { return times_; }
    const std::vector<double>& samples_1() const { return samples_1_; }
    const std::vector<double>& samples_2() const { return samples_2_; }

    /// Knot times, including 0 and T. Every schedule is smooth between them.
    std::vector<double> breakpoints() const
    {
        if (is_sampled())
            return times_;
        std::vector<double> out;
        out.reserve(points_.size());
        for (const auto& p : points_)
            out.push_back(p.t);
        return out;
    }

    ControlSample controls(double t) const
    {
        t = clamp_time(t);
        if (is_sampled())
            return {(*interp_1_)(t), (*interp_2_)(t), interp_1_->prime(t), interp_2_->prime(t)};
        const auto pol = polar_waypoint(t);
        const double c = std::cos(pol.kappa);
        const double s = std::sin(pol.kappa);
        return {pol.omega * c, pol.omega * s, pol.d_omega * c - pol.omega * s * pol.d_kappa,
                pol.d_omega * s + pol.omega * c * pol.d_kappa};
    }

    /// Omega, dOmega/dt, kappa, dkappa/dt at t.
    struct Polar {
        double omega = 0.0;
        double d_omega = 0.0;
        double kappa = 0.0;
        double d_kappa = 0.0;
    };

    Polar polar(double t) const
    {
        t = clamp_time(t);
        if (!is_sampled())
            return polar_waypoint(t);
        const auto c = controls(t);
        const double om = c.omega();
        if (om == 0.0)
            throw DegenerateScheduleError("Omega(t) = 0 at t = " + std::to_string(t) +
                                          "; kappa is undefined");
        return {om, (c.omega_1 * c.d_omega_1 + c.omega_2 * c.d_omega_2) / om,
                std::atan2(c.omega_2, c.omega_1),
                (c.omega_1 * c.d_omega_2 - c.omega_2 * c.d_omega_1) / (om * om)};
    }

    /// First knot where the total amplitude is smallest: the storage instant.
    double storage_time() const
    {
        if (is_sampled()) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < times_.size(); ++i)
                if (std::hypot(samples_1_[i], samples_2_[i]) < std::hypot(samples_1_[best], samples_2_[best]))
                    best = i;
            return times_[best];
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (points_[i].omega < points_[best].omega)
                best = i;
        return points_[best].t;
    }

    /// Same control path traversed `factor` times slower.
    PulseSchedule time_scaled(double factor) const
    {
        if (!(factor > 0.0) || !std::isfinite(factor))
            throw ArgumentError("time scale factor must be positive and finite");
        if (is_sampled()) {
            std::vector<double> t = times_;
            for (auto& x : t)
                x *= factor;
            return from_samples(std::move(t), samples_1_, samples_2_);
        }
        auto pts = points_;
        for (auto& p : pts)
            p.t *= factor;
        return from_waypoints(std::move(pts), ramp_scale_);
    }

    /// Times spread over every smooth piece, `per_piece` intervals each.
    std::vector<double> scan_times(int per_piece = 256) const
    {
        const auto bp = breakpoints();
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            for (int k = 0; k < per_piece; ++k)
                out.push_back(bp[i] + (bp[i + 1] - bp[i]) * k / per_piece);
        out.push_back(bp.back());
        return out;
    }

private:
    double clamp_time(double t) const
    {
        const double T = duration();
        const double slack = 1e-12 * std::max(1.0, T);
        if (!(t >= -slack && t <= T + slack))
            throw ArgumentError("time " + std::to_string(t) + " outside schedule domain [0, " +
                                std::to_string(T) + "]");
        return std::clamp(t, 0.0, T);
    }

    Polar polar_waypoint(double t) const
    {
        auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double x, const Waypoint& p) { return x < p.t; });
        std::size_t i = static_cast<std::size_t>(std::distance(points_.begin(), it));
        i = std::clamp<std::size_t>(i, 1, points_.size() - 1) - 1;
        const auto& p0 = points_[i];
        const auto& p1 = points_[i + 1];
        const double span = p1.t - p0.t;
        const double tau = (t - p0.t) / span;
        const double s = 0.5 * (1.0 - std::cos(kPi * tau));
        const double ds = 0.5 * kPi * std::sin(kPi * tau) / span;

        const double a0 = std::atan2(ramp_scale_, p0.omega);
        const double a1 = std::atan2(ramp_scale_, p1.omega);
        const double ang = a0 + (a1 - a0) * s;
        const double d_ang = (a1 - a0) * ds;
        const double sin_ang = std::sin(ang);
        Polar out;
        out.omega = ramp_scale_ * std::cos(ang) / sin_ang;
        out.d_omega = -ramp_scale_ * d_ang / (sin_ang * sin_ang);
        out.kappa = p0.kappa + (p1.kappa - p0.kappa) * s;
        out.d_kappa = (p1.kappa - p0.kappa) * ds;
        return out;
    }

    std::vector<Waypoint> points_;
    double ramp_scale_ = 1.0;
    std::vector<double> times_;
    std::vector<double> samples_1_;
    std::vector<double> samples_2_;
    std::optional<boost::math::interpolators::pchip<std::vector<double>>> interp_1_;
    std::optional<boost::math::interpolators::pchip<std::vector<double>>> interp_2_;
};

} // namespace holomem

#endif
