// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>

#include "cfmimo/qlmmse.hpp"
#include "helpers.hpp"

using namespace cfmimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// Centralized LMMSE transform with an explicit solve, independent of the eigen route.
cmat lmmse_gram_form(const cmat &H, const cmat &S_mrc, double s2)
{
    cmat G = H.adjoint() * H;
    G.diagonal().array() += s2;
    return G.fullPivLu().solve(S_mrc);
}

cmat exact_A(const cmat &H, double s2)
{
    const cmat G = H.adjoint() * H;
    return G * G + s2 * G;
}

} // namespace

TEST_CASE("MRC statistics")
{
    CHECK(mrc_statistics(cmat::Zero(3, 5), 1.0).C.isZero(0.0));
    const MrcStatistics st = mrc_statistics(cmat::Ones(1, 7), 1.0);
    CHECK(st.C(0, 0) == cdouble(7.0, 0.0));
    CHECK(st.C_over_LD()(0, 0) == cdouble(1.0, 0.0));

    std::mt19937_64 gen(1);
    const MrcStatistics r = mrc_statistics(testutil::random_complex(5, 40, gen), 0.1);
    CHECK((r.C - r.C.adjoint()).norm() <= 1e-12 * r.C.norm());
    CHECK_THROWS(mrc_statistics(cmat(2, 0), 1.0));
}

TEST_CASE("isotropic Gram recovery")
{
    const GramRecovery g = recover_gram(1.3 * cmat::Identity(4, 4), 0.3);
    for (int i = 0; i < 4; ++i)
    {
        CHECK_THAT(g.omega(i), WithinRel(1.3, 1e-14));
        CHECK_THAT(g.lambda(i), WithinRel(1.0, 1e-14));
    }
    CHECK((g.G_hat - cmat::Identity(4, 4)).norm() < 1e-13);
}

TEST_CASE("zero noise gives square roots")
{
    for (double w : {0.0, 1e-30, 0.25, 9.0, 1e12})
        CHECK(gram_eigenvalue(w, 0.0) == std::sqrt(w));
}

TEST_CASE("eigen map roundtrip and weight identity")
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> e(-12.0, 12.0), s(-6.0, 3.0);
    for (int i = 0; i < 100000; ++i)
    {
        const double lam = std::pow(10.0, e(gen));
        const double s2 = i % 50 == 0 ? 0.0 : std::pow(10.0, s(gen));
        const double w = lam * lam + s2 * lam;
        const double back = gram_eigenvalue(w, s2);
        REQUIRE(std::abs(back - lam) < 1e-12 * std::max(1.0, lam));
        if (s2 > 0.0)
            REQUIRE_THAT(combiner_weight(w, s2) * (back + s2), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("recovered eigenvalues are sorted and U is unitary")
{
    std::mt19937_64 gen(3);
    const cmat H = testutil::random_complex(9, 5, gen);
    const GramRecovery g = recover_gram(exact_A(H, 0.4), 0.4);
    for (int i = 1; i < 5; ++i)
        CHECK(g.omega(i - 1) >= g.omega(i));
    CHECK((g.U.adjoint() * g.U - cmat::Identity(5, 5)).norm() < 1e-10);
    for (int i = 0; i < 5; ++i)
    {
        CHECK(g.lambda(i) >= 0.0);
        CHECK_THAT(g.mu(i) * (g.lambda(i) + 0.4), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("Gram recovery with a repeated eigenvalue")
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int t = 0; t < 100; ++t)
    {
        rvec eig(5);
        eig << u(gen), u(gen), u(gen), u(gen), 0.0;
        eig(4) = eig(1); // multiplicity 2
        const cmat G = testutil::psd_with_eigenvalues(eig, gen);
        const double s2 = u(gen);
        const cmat A = G * G + s2 * G;
        const GramRecovery g = recover_gram(0.5 * (A + A.adjoint()), s2);
        REQUIRE(testutil::rel_err(g.G_hat, G) < 1e-9);
    }
}

TEST_CASE("recovery does not depend on the eigenbasis")
{
    std::mt19937_64 gen(5);
    rvec eig(4);
    eig << 2.0, 2.0, 2.0, 0.5;
    const cmat G = testutil::psd_with_eigenvalues(eig, gen);
    const cmat A = G * G + 0.7 * G;
    const GramRecovery g = recover_gram(A, 0.7);
    // rotate inside the degenerate eigenspace and rebuild by hand
    cmat U = g.U;
    Eigen::HouseholderQR<cmat> qr(testutil::random_complex(3, 3, gen));
    const cmat W = qr.householderQ();
    U.leftCols(3) = U.leftCols(3) * W;
    const cmat alt = U * g.lambda.asDiagonal() * U.adjoint();
    CHECK(testutil::rel_err(alt, g.G_hat) < 1e-9);
}

TEST_CASE("non-Hermitian input is rejected")
{
    cmat A = cmat::Identity(2, 2);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS(recover_gram(A, 1.0), NumericError);
}

TEST_CASE("round-off negative eigenvalues are clamped")
{
    cmat A = cmat::Zero(3, 3);
    A(0, 0) = 1.0;
    A(2, 2) = -1e-14;
    const GramRecovery g = recover_gram(A, 0.1);
    CHECK(g.omega.minCoeff() == 0.0);
    CHECK(g.clamped == 0);
    CHECK(g.min_raw_omega < 0.0);
}

TEST_CASE("exact statistics reproduce LMMSE")
{
    std::mt19937_64 gen(6);
    std::uniform_int_distribution<int> kd(2, 6), md(4, 16);
    std::uniform_real_distribution<double> sd(-2.0, 1.0);
    for (int t = 0; t < 200; ++t)
    {
        const int K = kd(gen), M = std::max(md(gen), K);
        const double s2 = std::pow(10.0, sd(gen));
        const cmat H = testutil::random_complex(M, K, gen);
        const cmat Y = testutil::random_complex(M, 11, gen);
        const cmat S = H.adjoint() * Y;
        const CombinerResult r = qlmmse_receive_exact(exact_A(H, s2), S, s2);
        REQUIRE(testutil::rel_err(r.S_hat, lmmse_gram_form(H, S, s2)) < 1e-9);
    }
}

TEST_CASE("single user scalar case")
{
    std::mt19937_64 gen(7);
    const cmat h = testutil::random_complex(6, 1, gen);
    const double s2 = 0.2, g = h.squaredNorm();
    const cmat S = h.adjoint() * testutil::random_complex(6, 4, gen);
    const CombinerResult r = qlmmse_receive_exact(cmat::Constant(1, 1, g * g + s2 * g), S, s2);
    CHECK(testutil::rel_err(r.S_hat, S / (g + s2)) < 1e-12);
}

TEST_CASE("finite data converges towards the exact statistic")
{
    std::mt19937_64 gen(8);
    std::vector<double> dev_small, dev_mid, dev_large;
    auto deviation = [&](const cmat &H, double s2, int LD)
    {
        const int M = static_cast<int>(H.rows()), K = static_cast<int>(H.cols());
        const cmat Y = H * testutil::random_complex(K, LD, gen) + std::sqrt(s2) * testutil::random_complex(M, LD, gen);
        const cmat S = H.adjoint() * Y;
        const cmat B = recover_gram(mrc_statistics(S, s2).C_over_LD(), s2).transform();
        const cmat Bx = recover_gram(exact_A(H, s2), s2).transform();
        return testutil::rel_err(B, Bx);
    };
    for (int t = 0; t < 50; ++t)
    {
        const cmat H = testutil::random_complex(8, 4, gen);
        dev_small.push_back(deviation(H, 0.5, 100));
        dev_mid.push_back(deviation(H, 0.5, 1000));
        dev_large.push_back(deviation(H, 0.5, 10000));
    }
    auto median = [](std::vector<double> v)
    {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    CHECK(median(dev_mid) < median(dev_small));
    CHECK(median(dev_large) < median(dev_mid));
    int wins = 0;
    for (int t = 0; t < 20; ++t)
        wins += dev_large[static_cast<std::size_t>(t)] < dev_small[static_cast<std::size_t>(t)];
    CHECK(wins > 10);
}

TEST_CASE("UC entry point equals the plain receiver")
{
    std::mt19937_64 gen(9);
    const cmat S = testutil::random_complex(4, 30, gen);
    const CombinerResult a = qlmmse_receive(S, 0.3), b = qlmmse_uc_receive(S, 0.3);
    CHECK(testutil::rel_err(a.S_hat, b.S_hat) < 1e-15);
    CHECK(b.uc_applied);
}

TEST_CASE("detection applies powers and matches its end-to-end combiner")
{
    std::mt19937_64 gen(10);
    const int M = 10, K = 3, LD = 25;
    CombinerResult mrc;
    mrc.V = testutil::random_complex(M, K, gen);
    const cmat Y = testutil::random_complex(M, LD, gen);
    mrc.S_hat = mrc.V.adjoint() * Y;
    rvec p(3);
    p << 1.0, 4.0, 0.25;
    GramRecovery g;
    const CombinerResult r = qlmmse_detect(mrc, p, 0.5, nullptr, &g);
    CHECK(testutil::rel_err(r.V.adjoint() * Y, r.S_hat) < 1e-12);
    const cmat scaled = p.cwiseSqrt().asDiagonal() * mrc.S_hat;
    CHECK(testutil::rel_err(r.S_hat, qlmmse_receive(scaled, 0.5).S_hat) < 1e-12);

    // with exact statistics of the power-scaled channel this is the centralized LMMSE transform
    const cmat H = testutil::random_complex(M, K, gen);
    mrc.V = H;
    mrc.S_hat = H.adjoint() * Y;
    const cmat Hp = H * p.cwiseSqrt().asDiagonal();
    const cmat A = asymptotic_mrc_statistic(Hp, Hp, 0.5);
    const CombinerResult ex = qlmmse_detect(mrc, p, 0.5, &A);
    CHECK(testutil::rel_err(ex.S_hat, lmmse_gram_form(Hp, Hp.adjoint() * Y, 0.5)) < 1e-9);
}
