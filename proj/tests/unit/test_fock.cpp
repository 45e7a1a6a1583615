#include <gtest/gtest.h>

#include <holomem/fock.hpp>

using namespace holomem;
using namespace holomem::fock;

TEST(Fock, SectorDimensionsAreBinomial)
{
    for (int l = 0; l <= 6; ++l)
        EXPECT_EQ(sector_basis(l).size(), binomial(l + 3, 3)) << "l = " << l;
    EXPECT_EQ(sector_basis(2).size(), 10);
}

TEST(Fock, BasisIsLexicographicallyDescending)
{
    const auto b = sector_basis(2);
    EXPECT_EQ(b[0], (OccupationState{{2, 0, 0, 0}}));
    EXPECT_EQ(b[1], (OccupationState{{1, 1, 0, 0}}));
    EXPECT_EQ(b[b.size() - 1], (OccupationState{{0, 0, 0, 2}}));
    for (int i = 1; i < b.size(); ++i) {
        EXPECT_GT(b[i - 1], b[i]);
        EXPECT_EQ(b[i].total(), 2);
    }
}

TEST(Fock, IndexOfRoundTripsAndRejectsForeignStates)
{
    const auto b = sector_basis(3);
    for (int i = 0; i < b.size(); ++i)
        EXPECT_EQ(b.index_of(b[i]), i);
    EXPECT_EQ(b.index_of(OccupationState{{1, 0, 0, 0}}), -1);
}

TEST(Fock, CapacityLimitsAreEnforced)
{
    EXPECT_THROW(sector_basis(-1), ArgumentError);
    EXPECT_THROW(sector_basis(3, 2), CapacityError);
    try {
        sector_basis(max_sector() + 1);
        FAIL() << "expected CapacityError";
    } catch (const CapacityError& e) {
        EXPECT_NE(std::string(e.what()).find(std::to_string(max_sector())), std::string::npos);
    }
}

TEST(Fock, NumberOperatorIsDiagonalOccupation)
{
    const auto b = sector_basis(3);
    for (int i = 0; i < kModeCount; ++i) {
        const CMatrix n = bilinear(i, i, b);
        for (int q = 0; q < b.size(); ++q)
            EXPECT_DOUBLE_EQ(n(q, q).real(), b[q].n[i]);
        EXPECT_DOUBLE_EQ((n - CMatrix(n.diagonal().asDiagonal())).norm(), 0.0);
    }
}

TEST(Fock, BilinearAdjointSwapsIndices)
{
    for (int l = 0; l <= 3; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                EXPECT_DOUBLE_EQ((bilinear(i, j, l).adjoint() - bilinear(j, i, l)).norm(), 0.0);
}

TEST(Fock, BilinearsCloseUnderCommutation)
{
    // [a_i^+ a_j, a_k^+ a_m] = delta_jk a_i^+ a_m - delta_im a_k^+ a_j
    const int l = 3;
    const auto& s = sector(l);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int m = 0; m < 4; ++m) {
                    CMatrix lhs = s.op(i, j) * s.op(k, m) - s.op(k, m) * s.op(i, j);
                    CMatrix rhs = CMatrix::Zero(s.dim(), s.dim());
                    if (j == k)
                        rhs += s.op(i, m);
                    if (i == m)
                        rhs -= s.op(k, j);
                    EXPECT_LT((lhs - rhs).norm(), 1e-12);
                }
}

TEST(Fock, CreationLadderAmplitudes)
{
    // a^+ |1,0,0,0> = sqrt(2) |2,0,0,0>; a^+ a^+ |0> = sqrt(2) |2>.
    ModeAmplitudes photon = ModeAmplitudes::Zero();
    photon(0) = 1.0;
    const auto one = apply_creation(photon, vacuum());
    const auto two = apply_creation(photon, one);
    EXPECT_EQ(two.l, 2);
    EXPECT_NEAR(std::abs(two.amplitudes(sector(2).basis.index_of({{2, 0, 0, 0}}))), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(two.norm(), std::sqrt(2.0), 1e-15);
}

TEST(Fock, CreationOfSuperposedModeMatchesBinomialOracle)
{
    // (u.a^+)^2 |0> has amplitude sqrt(2) u_i^2 on |2 e_i> and 2 u_i u_j on |e_i + e_j>.
    ModeAmplitudes u;
    u << Complex(0.3, 0.1), Complex(-0.2, 0.4), Complex(0.5, 0.0), Complex(0.1, -0.6);
    const auto v = apply_creation(u, apply_creation(u, vacuum()));
    const auto& b = sector(2).basis;
    for (int q = 0; q < b.size(); ++q) {
        Complex expect = 1.0;
        double fact = 1.0;
        for (int i = 0; i < 4; ++i) {
            expect *= std::pow(u(i), b[q].n[i]);
            for (int k = 2; k <= b[q].n[i]; ++k)
                fact *= k;
        }
        expect *= 2.0 / std::sqrt(fact);
        EXPECT_NEAR(std::abs(v.amplitudes(q) - expect), 0.0, 1e-14);
    }
}

TEST(Fock, AnnihilationIsAdjointOfCreation)
{
    ModeAmplitudes u;
    u << Complex(0.3, 0.1), Complex(-0.2, 0.4), Complex(0.5, 0.0), Complex(0.1, -0.6);
    const auto& s1 = sector(1);
    const auto& s2 = sector(2);
    CVector x = CVector::LinSpaced(s1.dim(), 0.1, 1.0) * Complex(1.0, 0.5);
    CVector y = CVector::LinSpaced(s2.dim(), -1.0, 0.7) * Complex(0.2, -1.0);
    const Complex lhs = y.dot(apply_creation(u, {1, x}).amplitudes);
    const Complex rhs = apply_annihilation(u, {2, y}).amplitudes.dot(x);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
    EXPECT_THROW(apply_annihilation(u, vacuum()), ArgumentError);
}

TEST(Fock, ModeOccupationOfFockStates)
{
    const auto v = fock_state({{1, 0, 2, 0}});
    EXPECT_DOUBLE_EQ(mode_occupation(0, v), 1.0);
    EXPECT_DOUBLE_EQ(mode_occupation(2, v), 2.0);
    EXPECT_DOUBLE_EQ(mode_occupation(3, v), 0.0);
    EXPECT_THROW(mode_occupation(4, v), ArgumentError);
}

TEST(Fock, SectorCacheReturnsSameObject)
{
    EXPECT_EQ(&sector(2), &sector(2));
    EXPECT_EQ(sector(2).dim(), 10);
}
