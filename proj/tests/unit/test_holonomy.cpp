#include <gtest/gtest.h>

#include <holomem/holonomy.hpp>
#include <holomem/protocol.hpp>

using namespace holomem;

namespace {

PulseSchedule loop()
{
    return PulseSchedule::from_waypoints({{0.0, 3.0, 0.2}, {40.0, 0.5, 1.2}, {100.0, 2.0, 0.4}});
}

/// exp(x) for a small real matrix by scaling and squaring a Taylor series.
Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& x)
{
    int squarings = 0;
    double n = x.cwiseAbs().rowwise().sum().maxCoeff();
    while (n > 0.1) {
        n /= 2;
        ++squarings;
    }
    const Eigen::MatrixXd y = x / std::pow(2.0, squarings);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(x.rows(), x.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * y / k;
        sum += term;
    }
    for (int i = 0; i < squarings; ++i)
        sum = sum * sum;
    return sum;
}

} // namespace

TEST(Holonomy, AnalyticConnectionMatchesFiniteDifferences)
{
    SystemParams p{1.0, 0.3, 0.13, -0.07};
    const auto s = loop();
    for (int l = 1; l <= 3; ++l)
        for (double t : {15.0, 55.0}) {
            const CMatrix ka = connection_analytic(p, s, t, l).k;
            const double e1 = (ka - connection_numeric(p, s, t, l, 1e-2).k).cwiseAbs().maxCoeff();
            const double e2 = (ka - connection_numeric(p, s, t, l, 5e-3).k).cwiseAbs().maxCoeff();
            EXPECT_LT(e1, 1e-6);
            EXPECT_NEAR(e1 / e2, 4.0, 0.2) << "second-order convergence, l = " << l;
        }
}

TEST(Holonomy, ConnectionIsAntiHermitianAndTridiagonal)
{
    SystemParams p{0.8, -0.2, 0.3, 0.11};
    const auto s = loop();
    for (int l = 0; l <= 5; ++l) {
        const CMatrix k = connection_analytic(p, s, 33.0, l).k;
        EXPECT_LT((k + k.adjoint()).norm(), 1e-15);
        for (int i = 0; i <= l; ++i)
            for (int j = 0; j <= l; ++j)
                if (std::abs(i - j) > 1)
                    EXPECT_EQ(k(i, j), Complex(0.0));
    }
}

TEST(Holonomy, ResonantConnectionIsMinusKappaDotSinThetaK0)
{
    SystemParams p;
    const auto s = loop();
    const auto m = mixing_angles(p, s, 20.0);
    for (int l = 1; l <= 4; ++l) {
        const CMatrix expect = (-m.kappa_dot * std::sin(m.theta) * k0_matrix(l)).cast<Complex>();
        EXPECT_LT((connection_analytic(p, s, 20.0, l).k - expect).norm(), 1e-15);
    }
}

TEST(Holonomy, K0Spectrum)
{
    // K0_l is real antisymmetric with eigenvalues i (l - 2m).
    for (int l = 1; l <= 5; ++l) {
        Eigen::ComplexEigenSolver<CMatrix> es(k0_matrix(l).cast<Complex>());
        std::vector<double> im;
        for (int i = 0; i <= l; ++i) {
            EXPECT_NEAR(es.eigenvalues()(i).real(), 0.0, 1e-12);
            im.push_back(es.eigenvalues()(i).imag());
        }
        std::sort(im.begin(), im.end());
        for (int m = 0; m <= l; ++m)
            EXPECT_NEAR(im[static_cast<std::size_t>(m)], -l + 2 * m, 1e-12);
    }
}

TEST(Holonomy, ClosedFormExamples)
{
    // l = 1: exp(-phi K0) = [[cos, -sin], [sin, cos]].
    const auto w = holonomy_closed_form(1, kPi / 2).w;
    EXPECT_NEAR(std::abs(w(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(w(0, 1).real(), -1.0, 1e-15);
    EXPECT_NEAR(w(1, 0).real(), 1.0, 1e-15);
    EXPECT_LT((holonomy_closed_form(3, 0.0).w - CMatrix::Identity(4, 4)).norm(), 1e-15);
    for (int l = 0; l <= 4; ++l) {
        const CMatrix oracle = expm_taylor(-0.83 * k0_matrix(l)).cast<Complex>();
        EXPECT_LT((holonomy_closed_form(l, 0.83).w - oracle).norm(), 1e-13);
        EXPECT_LT((holonomy_closed_form(l, 2 * kPi).w - CMatrix::Identity(l + 1, l + 1)).norm(), 1e-12);
    }
}

TEST(Holonomy, IntegratedMatchesClosedFormAtResonance)
{
    SystemParams p;
    const auto s = loop();
    const double phi = phi_of_t(p, s, s.duration());
    for (int l = 1; l <= 4; ++l) {
        const auto w = holonomy_integrate(p, s, l, 0.0, s.duration());
        EXPECT_LT(linalg::operator_norm(w.w - holonomy_closed_form(l, phi).w), 1e-10);
        EXPECT_LT(linalg::unitarity_defect(w.w), 1e-10);
    }
}

TEST(Holonomy, PhiOfConstantOmegaStrokeIsDeltaKappaSinTheta)
{
    SystemParams p;
    const auto s = PulseSchedule::from_waypoints({{0.0, 0.5, 0.1}, {30.0, 0.5, 1.4}});
    EXPECT_NEAR(phi_of_t(p, s, 30.0), 1.3 * std::sin(std::atan2(1.0, 0.5)), 1e-13);
    EXPECT_NEAR(phi_between(p, s, 30.0, 0.0), -phi_of_t(p, s, 30.0), 1e-15);
}

TEST(Holonomy, CompositionAlongTheLoop)
{
    SystemParams p{1.0, 0.2, 0.25, -0.15};
    const auto s = loop();
    for (int l = 1; l <= 3; ++l) {
        const auto w01 = holonomy_integrate(p, s, l, 0.0, 37.0).w;
        const auto w12 = holonomy_integrate(p, s, l, 37.0, 100.0).w;
        const auto w02 = holonomy_integrate(p, s, l, 0.0, 100.0).w;
        EXPECT_LT(linalg::operator_norm(w12 * w01 - w02), 1e-10);
    }
}

TEST(Holonomy, ResonantHolonomyDependsOnlyOnPhi)
{
    SystemParams p;
    CycleFamily a, b;
    b.omega_low = 0.3;
    a.max_margin = b.max_margin = 0.05;
    const auto sa = design_phase_schedule(p, 1.1, a).schedule;
    const auto sb = design_phase_schedule(p, 1.1, b).schedule;
    for (int l = 1; l <= 3; ++l) {
        const auto wa = holonomy_integrate(p, sa, l, 0.0, sa.duration()).w;
        const auto wb = holonomy_integrate(p, sb, l, 0.0, sb.duration()).w;
        EXPECT_LT(linalg::operator_norm(wa - wb), 1e-9);
    }
}

TEST(Holonomy, DetuningMakesLoopsDiffer)
{
    SystemParams p{1.0, 0.0, 0.2, -0.2};
    CycleFamily a, b;
    b.omega_low = 0.3;
    a.max_margin = b.max_margin = 0.05;
    a.check_detuning = b.check_detuning = false;
    const auto sa = design_phase_schedule(p, 1.1, a).schedule;
    const auto sb = design_phase_schedule(p, 1.1, b).schedule;
    const auto wa = holonomy_integrate(p, sa, 1, 0.0, sa.duration()).w;
    const auto wb = holonomy_integrate(p, sb, 1, 0.0, sb.duration()).w;
    EXPECT_GT(linalg::operator_norm(wa - wb), 1e-3);
}

TEST(Holonomy, PrimedFrameDiagonalizes)
{
    for (int l = 0; l <= 4; ++l) {
        const CMatrix v = basis_change_matrix(l);
        EXPECT_LT(linalg::unitarity_defect(v), 1e-14);
        for (double phi : {0.3, 1.0, kPi})
            EXPECT_LT(linalg::operator_norm(v * primed_holonomy(l, phi).w * v.adjoint() -
                                            holonomy_closed_form(l, phi).w),
                      1e-12);
    }
}

TEST(Holonomy, BasisChangeRelatesTheTwoFrames)
{
    SystemParams p{1.0, 0.1, 0.0, 0.0};
    const auto s = loop();
    for (int l = 0; l <= 4; ++l) {
        const CMatrix f = dark_basis(p, s, 12.0, l).frame;
        const CMatrix fp = dark_basis(p, s, 12.0, l, true).frame;
        EXPECT_LT((fp - f * basis_change_matrix(l)).norm(), 1e-13);
    }
    // V_1 = (1/sqrt2) [[-i, i], [1, 1]]
    const CMatrix v1 = basis_change_matrix(1);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(v1(0, 0) - Complex(0, -r)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v1(0, 1) - Complex(0, r)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v1(1, 0) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v1(1, 1) - r), 0.0, 1e-15);
}

TEST(Holonomy, PrimedHolonomyDiagonal)
{
    const auto w = primed_holonomy(2, 0.4).w;
    EXPECT_NEAR(std::abs(w(0, 0) - std::exp(-kI * 0.8)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w(1, 1) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w(2, 2) - std::exp(kI * 0.8)), 0.0, 1e-15);
}

TEST(Holonomy, NumericConnectionRejectsStepsLeavingTheDomain)
{
    SystemParams p;
    const auto s = loop();
    EXPECT_THROW(connection_numeric(p, s, 0.001, 1, 0.01), ArgumentError);
    EXPECT_THROW(connection_numeric(p, s, 50.0, 1, 0.0), ArgumentError);
    EXPECT_TRUE(connection_numeric(p, s, 50.0, 1, 2.0).accuracy_warning);
    EXPECT_FALSE(connection_numeric(p, s, 50.0, 1, 0.5).accuracy_warning);
}

TEST(Holonomy, TrivialSectorAndConstantKappa)
{
    SystemParams p;
    const auto s = PulseSchedule::from_waypoints({{0.0, 5.0, 0.7}, {10.0, 0.1, 0.7}, {20.0, 5.0, 0.7}});
    EXPECT_EQ(phi_of_t(p, s, 20.0), 0.0);
    for (int l = 0; l <= 3; ++l)
        EXPECT_LT((holonomy_integrate(p, s, l, 0.0, 20.0).w - CMatrix::Identity(l + 1, l + 1)).norm(), 1e-15);
}
