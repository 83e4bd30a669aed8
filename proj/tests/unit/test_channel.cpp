// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "cfmimo/channel.hpp"
#include "helpers.hpp"

using namespace cfmimo;

namespace
{

CovarianceSet single_cov(const cmat &R, int K = 1)
{
    CovarianceSet cov;
    cov.K = K;
    cov.L = 1;
    cov.N = static_cast<int>(R.rows());
    cov.beta = rmat::Constant(K, 1, R.trace().real() / static_cast<double>(R.rows()));
    cov.R.assign(static_cast<std::size_t>(K), R);
    return cov;
}

SystemConfig tiny(int N, int K, int tau_p, int tau_c)
{
    SystemConfig cfg;
    cfg.L = 1;
    cfg.N = N;
    cfg.K = K;
    cfg.tau_p = tau_p;
    cfg.tau_c = tau_c;
    return cfg;
}

} // namespace

TEST_CASE("identity covariance draws converge")
{
    const CovarianceSet cov = single_cov(cmat::Identity(3, 3));
    const CovarianceSqrt roots = covariance_sqrt(cov);
    RngStream rng(11);
    const int draws = 100000;
    cmat acc = cmat::Zero(3, 3);
    for (int i = 0; i < draws; ++i)
    {
        const ChannelBlock ch = draw_channel(roots, rng);
        acc += ch.H * ch.H.adjoint();
    }
    acc /= static_cast<double>(draws);
    CHECK(testutil::rel_err(acc, cmat::Identity(3, 3)) < 0.02);
}

TEST_CASE("zero and rank-one covariances")
{
    RngStream rng(2);
    CHECK(draw_channel(single_cov(cmat::Zero(4, 4)), rng).H.isZero(0.0));

    cvec u(3);
    u << cdouble(1, 0), cdouble(0, 1), cdouble(-1, 1);
    u.normalize();
    const CovarianceSqrt roots = covariance_sqrt(single_cov(2.0 * u * u.adjoint()));
    for (int i = 0; i < 20; ++i)
    {
        const cvec h = draw_channel(roots, rng).H.col(0);
        const cvec residual = h - u * (u.adjoint() * h);
        CHECK(residual.norm() <= 1e-12 * std::max(1.0, h.norm()));
    }
}

TEST_CASE("covariance square root rejects indefinite input")
{
    cmat R = cmat::Identity(2, 2);
    R(1, 1) = -0.5;
    CHECK_THROWS_AS(covariance_sqrt(single_cov(R)), NumericError);
}

TEST_CASE("channel stacks per-AP blocks")
{
    SystemConfig cfg;
    cfg.L = 3;
    cfg.N = 2;
    cfg.K = 2;
    cfg.tau_p = 2;
    CovarianceSet cov;
    cov.K = 2;
    cov.L = 3;
    cov.N = 2;
    cov.beta = rmat::Ones(2, 3);
    for (int i = 0; i < 6; ++i)
        cov.R.push_back(cmat::Identity(2, 2) * (i + 1.0));
    RngStream rng(4);
    const ChannelBlock ch = draw_channel(cov, rng);
    CHECK(ch.H.rows() == 6);
    CHECK(ch.ap_block(1).rows() == 2);
    CHECK(ch.ap_block(2)(1, 0) == ch.H(5, 0));
}

TEST_CASE("pilot book is orthogonal")
{
    const PilotBook pb = make_orthogonal_pilots(8, 5);
    CHECK((pb.Phi.adjoint() * pb.Phi - 8.0 * cmat::Identity(8, 8)).norm() < 1e-12);
    for (int k = 0; k < 5; ++k)
        CHECK(pb.sharing(k) == std::vector<int>{k});
    CHECK_THROWS(make_orthogonal_pilots(4, 5));

    const PilotBook reused = make_reused_pilots(2, 5);
    CHECK(reused.sharing(0) == std::vector<int>{0, 2, 4});
}

TEST_CASE("noiseless pilot reception")
{
    SystemConfig cfg = tiny(3, 1, 4, 10);
    cfg.sigma2_dBm = -1e9; // sigma2 underflows to 0
    cfg.p = {2.0};
    RngStream rng(1), noise(2);
    const ChannelBlock ch = draw_channel(single_cov(cmat::Identity(3, 3)), rng);
    PilotBook pb;
    pb.Phi = cmat::Ones(4, 1);
    pb.assignment = {0};
    const ReceivedPilot Z = transmit_pilots(cfg, ch, pb, noise);
    const cmat expect = std::sqrt(2.0) * ch.H.col(0) * cmat::Ones(1, 4);
    CHECK((Z.Z[0] - expect).norm() < 1e-12);
}

TEST_CASE("orthogonal pilots separate the users without noise")
{
    SystemConfig cfg = tiny(2, 2, 2, 10);
    cfg.sigma2_dBm = -1e9;
    RngStream rng(5), noise(6);
    const ChannelBlock ch = draw_channel(single_cov(cmat::Identity(2, 2), 2), rng);
    const PilotBook pb = make_orthogonal_pilots(2, 2);
    const ReceivedPilot Z = transmit_pilots(cfg, ch, pb, noise);
    const cvec proj = Z.Z[0] * pb.pilot(0).conjugate();
    CHECK((proj - std::sqrt(50.0) * 2.0 * ch.H.col(0)).norm() < 1e-10);
}

TEST_CASE("zero power leaves pure noise")
{
    SystemConfig cfg = tiny(4, 1, 1, 2);
    cfg.tau_p = 1;
    cfg.p = {0.0};
    cfg.sigma2_dBm = 3.0;
    RngStream rng(1), noise(8);
    const ChannelBlock ch = draw_channel(single_cov(cmat::Identity(4, 4)), rng);
    PilotBook pb;
    pb.Phi = cmat::Ones(1, 1);
    pb.assignment = {0};
    double acc = 0.0;
    const int reps = 25000; // 4 entries each
    for (int i = 0; i < reps; ++i)
        acc += transmit_pilots(cfg, ch, pb, noise).Z[0].squaredNorm();
    const double var = acc / (4.0 * reps);
    CHECK(std::abs(var / cfg.sigma2() - 1.0) < 0.02);
}

TEST_CASE("data model matches a dense product oracle")
{
    SystemConfig cfg;
    cfg.L = 2;
    cfg.N = 2;
    cfg.K = 2;
    cfg.tau_p = 2;
    cfg.tau_c = 7;
    cfg.p = {3.0, 0.5};
    CovarianceSet cov;
    cov.K = 2;
    cov.L = 2;
    cov.N = 2;
    cov.beta = rmat::Ones(2, 2);
    cov.R.assign(4, cmat::Identity(2, 2));
    RngStream rng(1), sym(2), noise(3);
    const ChannelBlock ch = draw_channel(cov, rng);
    const ReceivedData d = transmit_data(cfg, ch, sym, noise);
    REQUIRE(d.Y.rows() == 4);
    REQUIRE(d.Y.cols() == 5);

    // replay the noise stream and rebuild entry by entry
    RngStream noise2(3);
    const cmat Nz = noise2.complex_normal(4, 5, cfg.sigma2());
    for (int m = 0; m < 4; ++m)
        for (int t = 0; t < 5; ++t)
        {
            cdouble y = Nz(m, t);
            for (int k = 0; k < 2; ++k)
                y += std::sqrt(cfg.p[static_cast<std::size_t>(k)]) * ch.H(m, k) * d.S_true(k, t);
            CHECK(std::abs(y - d.Y(m, t)) < 1e-12);
        }
}

TEST_CASE("symbol statistics")
{
    RngStream rng(10);
    const cmat S = draw_symbols(SymbolAlphabet::Gaussian, 1, 100000, rng);
    CHECK(std::abs(S.squaredNorm() / 1e5 - 1.0) < 0.02);

    const cmat Q = draw_symbols(SymbolAlphabet::QPSK, 3, 50, rng);
    for (Eigen::Index i = 0; i < Q.size(); ++i)
        CHECK(std::abs(std::abs(Q(i)) - 1.0) < 1e-14);

    auto dev = [&](int LD)
    {
        RngStream r(20 + LD);
        const cmat s = draw_symbols(SymbolAlphabet::Gaussian, 4, LD, r);
        return (s * s.adjoint() / static_cast<double>(LD) - cmat::Identity(4, 4)).norm();
    };
    CHECK(dev(10000) < dev(100));
}
