// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <holomem/finite_n.hpp>
#include <holomem/holomem.hpp>

using namespace holomem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct Sample {
    SystemParams p;
    PulseSchedule s;
    double t;
};

Sample random_sample(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Three-photon resonance regime: |delta_k| <= 0.05 g sqrt(N).
    SystemParams p;
    p.g_sqrt_n = 0.5 + 1.5 * u(rng);
    p.delta_p = -1.0 + 2.0 * u(rng);
    p.delta_1 = 0.05 * p.g_sqrt_n * (2.0 * u(rng) - 1.0);
    p.delta_2 = 0.05 * p.g_sqrt_n * (2.0 * u(rng) - 1.0);
    std::vector<Waypoint> pts;
    double t = 0.0;
    const int knots = 3 + static_cast<int>(3 * u(rng));
    for (int k = 0; k < knots; ++k) {
        pts.push_back({t, 0.05 + 5.0 * u(rng), kPi / 2 * u(rng)});
        t += 5.0 + 50.0 * u(rng);
    }
    auto s = PulseSchedule::from_waypoints(std::move(pts), 0.2 + 2.0 * u(rng));
    const double T = s.duration();
    return {p, s, T * (0.05 + 0.9 * u(rng))};
}

/// Tridiagonal generator built from its definition, independent of the library.
Eigen::MatrixXd k0_oracle(int l)
{
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(l + 1, l + 1);
    for (int m = 0; m < l; ++m) {
        const double v = std::sqrt((m + 1.0) * (l - m));
        k(m, m + 1) = v;
        k(m + 1, m) = -v;
    }
    return k;
}

/// exp(x) by scaling and squaring a truncated Taylor series.
Eigen::MatrixXd expm_oracle(const Eigen::MatrixXd& x)
{
    int sq = 0;
    double n = x.cwiseAbs().rowwise().sum().maxCoeff();
    while (n > 0.05) {
        n /= 2;
        ++sq;
    }
    const Eigen::MatrixXd y = x / std::pow(2.0, sq);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(x.rows(), x.cols()), sum = term;
    for (int k = 1; k < 25; ++k) {
        term = term * y / k;
        sum += term;
    }
    for (int i = 0; i < sq; ++i)
        sum = sum * sum;
    return sum;
}

/// |<dark(T)|psi(T)> - W_l e_0| for the exact evolution of the first dark column.
double holonomy_deviation(const SystemParams& p, const PulseSchedule& s, int l)
{
    const double T = s.duration();
    EvolutionOptions eo;
    eo.tolerance = 1e-11;
    eo.samples = 2;
    const auto ev = evolve_sector(p, s, l, dark_basis(p, s, 0.0, l).column(0), 0.0, T, eo);
    const CVector pred = holonomy_integrate(p, s, l, 0.0, T).w.col(0);
    return (ev.samples.back().dark - pred).norm();
}

Outcome darkness()
{
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto r = random_sample(rng);
        for (int l = 0; l <= 3; ++l) {
            const double h = linalg::hermitian_norm(sector_h(r.p, r.s, r.t, l));
            worst = std::max(worst, darkness_residual(r.p, r.s, r.t, l) / h);
        }
    }
    return {worst < 1e-10, fmt("max residual/||H_l|| = %.3g (bound 1e-10)", worst)};
}

Outcome connection()
{
    std::mt19937_64 rng(202);
    double worst = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
    int detuned = 0;
    for (int i = 0; i < 50; ++i) {
        const auto r = random_sample(rng);
        detuned += r.p.delta_1 != 0.0 && r.p.delta_2 != 0.0 && r.p.delta_1 != r.p.delta_2;
        const double T = r.s.duration();
        for (int l = 1; l <= 3; ++l) {
            const CMatrix ka = connection_analytic(r.p, r.s, r.t, l).k;
            auto err = [&](double dt) {
                return (ka - connection_numeric(r.p, r.s, r.t, l, dt).k).cwiseAbs().maxCoeff();
            };
            const double e1 = err(1e-4 * T), e2 = err(5e-5 * T);
            worst = std::max(worst, e1);
            // Order estimate only where truncation error dominates rounding.
            if (e1 > 1e-10) {
                ratio_lo = std::min(ratio_lo, e1 / e2);
                ratio_hi = std::max(ratio_hi, e1 / e2);
            }
        }
    }
    const bool ok = worst < 1e-6 && ratio_lo > 3.5 && ratio_hi < 4.5 && detuned == 50;
    return {ok, fmt("max entry error %.3g at dt = 1e-4 T; halving ratio in [%.3f, %.3f]", worst, ratio_lo,
                    ratio_hi)};
}

Outcome closed_form()
{
    SystemParams p;
    const auto s = default_cycle_schedule(p);
    const double T = s.duration();
    const double phi = phi_of_t(p, s, T);
    double worst = 0.0;
    for (int l = 0; l <= 4; ++l) {
        const CMatrix w = holonomy_integrate(p, s, l, 0.0, T).w;
        worst = std::max(worst, linalg::operator_norm(w - expm_oracle(-phi * k0_oracle(l)).cast<Complex>()));
    }
    return {worst < 1e-8, fmt("phi = %.6f, max ||W_int - exp(-phi K0)|| = %.3g (bound 1e-8)", phi, worst)};
}

Outcome diagonalization()
{
    double worst = 0.0;
    for (int l = 0; l <= 4; ++l) {
        const CMatrix v = basis_change_matrix(l);
        for (double phi : {0.3, 1.0, kPi})
            worst = std::max(worst, linalg::operator_norm(v * primed_holonomy(l, phi).w * v.adjoint() -
                                                          holonomy_closed_form(l, phi).w));
    }
    return {worst < 1e-10, fmt("max ||V W' V^+ - W|| = %.3g (bound 1e-10)", worst)};
}

Outcome retrieval()
{
    SystemParams p;
    const auto d = design_phase_schedule(p, 2 * kPi);
    std::mt19937_64 rng(303);
    std::normal_distribution<double> n01;
    std::vector<Complex> c(3);
    for (auto& x : c)
        x = {n01(rng), n01(rng)};
    const auto input = PhotonState::normalized(c);
    RunOptions opt;
    opt.evolution.samples = 2;
    opt.evolution.tolerance = 1e-10;
    const auto ad = run_cycle(p, d.schedule, input, RunMode::adiabatic, opt);
    const auto ex = run_cycle(p, d.schedule, input, RunMode::exact, opt);
    const bool ok = std::abs(ad.fidelity - 1.0) < 1e-9 && ex.fidelity >= 0.999 && ex.max_margin <= 1e-3;
    return {ok, fmt("adiabatic 1 - F = %.3g, exact F = %.6f at max margin %.3g", 1.0 - ad.fidelity, ex.fidelity,
                    ex.max_margin)};
}

Outcome ladder()
{
    SystemParams p;
    bool ok = true;
    std::string detail;
    for (int l = 1; l <= 2; ++l) {
        std::vector<double> dev, margin;
        for (double m : {3e-2, 1e-2, 3e-3}) {
            CycleFamily f;
            f.max_margin = m;
            const auto s = default_cycle_schedule(p, f);
            margin.push_back(max_adiabatic_margin(p, s));
            dev.push_back(holonomy_deviation(p, s, l));
        }
        for (std::size_t i = 1; i < dev.size(); ++i)
            ok = ok && dev[i] * 2.0 <= dev[i - 1];
        detail += fmt("l=%g: ", l) + fmt("%.3g, %.3g, %.3g", dev[0], dev[1], dev[2]) +
                  fmt(" at margins %.2g, %.2g, %.2g; ", margin[0], margin[1], margin[2]);
    }
    return {ok, detail};
}

Outcome path_dependence()
{
    auto pair_difference = [](double delta) {
        SystemParams p{1.0, 0.0, 0.2 * delta, -0.2 * delta};
        CycleFamily a, b;
        a.max_margin = b.max_margin = 1.0;
        a.check_detuning = b.check_detuning = false;
        a.omega_low = 0.02;
        b.omega_low = 0.3;
        const auto sa = design_phase_schedule(p, 1.0, a).schedule;
        const auto sb = design_phase_schedule(p, 1.0, b).schedule;
        const double gap = std::abs(phi_of_t(p, sa, sa.duration()) - phi_of_t(p, sb, sb.duration()));
        const auto wa = holonomy_integrate(p, sa, 1, 0.0, sa.duration()).w;
        const auto wb = holonomy_integrate(p, sb, 1, 0.0, sb.duration()).w;
        return std::pair{linalg::operator_norm(wa - wb), gap};
    };
    const auto [on, gap_on] = pair_difference(1.0);
    const auto [off, gap_off] = pair_difference(0.0);
    const bool ok = on > 1e-3 && off < 1e-7 && gap_on < 1e-9 && gap_off < 1e-9;
    return {ok, fmt("||W_a - W_b|| = %.3g at delta = +-0.2 g sqrt(N), %.3g at delta = 0 (phi gap %.1g)", on, off,
                    std::max(gap_on, gap_off))};
}

Outcome finite_n_oracle()
{
    SystemParams p{1.0, 0.3, 0.02, -0.04};
    double mismatch = 0.0, defect = 0.0, contained = 0.0;
    bool zero_modes = true;
    for (int n = 2; n <= finite_n::kMaxAtoms; ++n) {
        const finite_n::FiniteSystem fs(n, 1);
        const auto chk = finite_n::dark_degeneracy_check(fs, p, 0.7, 1.3, 0.5, 1);
        mismatch = std::max(mismatch, chk.max_delta);
        zero_modes = zero_modes && chk.zero_modes == 2;
        const RVector full =
            finite_n::excitation_block_spectrum(fs, finite_n::finite_hamiltonian(fs, p, 0.7, 1.3, 0.5), 1);
        for (Eigen::Index i = 0; i < chk.boson_spectrum.size(); ++i)
            contained = std::max(contained, (full.array() - chk.boson_spectrum(i)).abs().minCoeff());
        defect = std::max(defect, std::abs(finite_n::commutator_defect(fs, finite_n::StateSpec::one_excitation) +
                                           2.0 / n));
    }
    const bool ok = mismatch < 1e-10 && contained < 1e-10 && defect < 1e-10 && zero_modes;
    return {ok, fmt("spectrum mismatch %.3g, full-block containment %.3g, |defect + 2/N| %.3g", mismatch, contained,
                    defect)};
}

Outcome qubit()
{
    SystemParams p;
    const auto d = design_phase_schedule(p, kPi / 2);
    Eigen::Matrix2cd target = Eigen::Matrix2cd::Zero();
    target(0, 0) = std::exp(kI * kPi / 2.0);
    target(1, 1) = std::exp(-kI * kPi / 2.0);
    const double ideal = (qubit_gate(p, d.schedule) - target).cwiseAbs().maxCoeff();
    const double integ = (qubit_gate_integrated(p, d.schedule) - target).cwiseAbs().maxCoeff();
    RunOptions opt;
    opt.evolution.tolerance = 1e-10;
    const auto ex = qubit_gate_exact(p, d.schedule, opt);
    const bool ok = ideal < 1e-6 && integ < 1e-6 && ex.gate_fidelity >= 0.999;
    return {ok, fmt("gate error %.3g (integrated %.3g), exact gate fidelity %.6f", ideal, integ, ex.gate_fidelity)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"darkness", darkness},
        {"connection equivalence", connection},
        {"closed-form holonomy", closed_form},
        {"diagonalization", diagonalization},
        {"retrieval", retrieval},
        {"adiabatic ladder", ladder},
        {"non-abelian path dependence", path_dependence},
        {"finite-N oracle", finite_n_oracle},
        {"qubit gate", qubit}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
