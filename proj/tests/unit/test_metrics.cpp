// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "cfmimo/metrics.hpp"
#include "helpers.hpp"

using namespace cfmimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("single-user SINR")
{
    cmat h(2, 1);
    h << 1.0, cdouble(0.0, 1.0); // |h|^2 = 2
    const rvec s = instantaneous_sinr(h, h, rvec::Ones(1), 1.0);
    CHECK_THAT(s(0), WithinRel(2.0, 1e-14));
}

TEST_CASE("orthogonal channels have no interference under MRC")
{
    const cmat H = 3.0 * cmat::Identity(4, 2);
    const rvec s = instantaneous_sinr(H, H, rvec::Ones(2), 0.5);
    CHECK_THAT(s(0), WithinRel(9.0 / 0.5, 1e-14));
    CHECK_THAT(s(1), WithinRel(9.0 / 0.5, 1e-14));
}

TEST_CASE("zero combiner gives zero SINR")
{
    std::mt19937_64 gen(1);
    const cmat H = testutil::random_complex(4, 2, gen);
    const rvec s = instantaneous_sinr(cmat::Zero(4, 2), H, rvec::Ones(2), 1.0);
    CHECK(s(0) == 0.0);
    CHECK(s(1) == 0.0);
}

TEST_CASE("SINR is invariant to combiner scaling")
{
    std::mt19937_64 gen(2);
    const cmat H = testutil::random_complex(6, 3, gen);
    const cmat V = testutil::random_complex(6, 3, gen);
    rvec p(3);
    p << 1.0, 2.0, 0.5;
    const rvec a = instantaneous_sinr(V, H, p, 0.3);
    cmat W = V;
    W.col(0) *= cdouble(0.0, 7.0);
    W.col(2) *= 1e-3;
    const rvec b = instantaneous_sinr(W, H, p, 0.3);
    CHECK((a - b).norm() < 1e-12 * a.norm());
}

TEST_CASE("SINR matches a symbol-level power split")
{
    std::mt19937_64 gen(3);
    const int M = 5, K = 3, T = 100000;
    const cmat H = testutil::random_complex(M, K, gen);
    const cmat V = testutil::random_complex(M, K, gen);
    rvec p(3);
    p << 1.0, 0.3, 2.0;
    const double s2 = 0.4;
    const cmat S = testutil::random_complex(K, T, gen);
    const cmat Nz = std::sqrt(s2) * testutil::random_complex(M, T, gen);
    const rvec analytic = instantaneous_sinr(V, H, p, s2);
    for (int k = 0; k < K; ++k)
    {
        double sig = 0.0, intf = 0.0;
        const cdouble gk = V.col(k).dot(H.col(k)) * std::sqrt(p(k));
        sig = (gk * S.row(k)).squaredNorm() / T;
        cmat other = cmat::Zero(1, T);
        for (int i = 0; i < K; ++i)
            if (i != k)
                other += V.col(k).dot(H.col(i)) * std::sqrt(p(i)) * S.row(i);
        intf = other.squaredNorm() / T;
        const double noise = (V.col(k).adjoint() * Nz).squaredNorm() / T;
        CHECK_THAT(sig / (intf + noise), WithinRel(analytic(k), 0.02));
    }
}

TEST_CASE("probing recovers the effective map")
{
    std::mt19937_64 gen(4);
    const cmat H = testutil::random_complex(6, 3, gen);
    const cmat V = testutil::random_complex(6, 3, gen);
    rvec p(3);
    p << 2.0, 1.0, 0.1;
    const LinearReceiver rx = [&](const cmat &Y) { return cmat(V.adjoint() * Y); };
    const EffectiveMap em = probe_effective_map(rx, H, p);
    CHECK(testutil::rel_err(em.T, V.adjoint() * H * p.cwiseSqrt().asDiagonal()) < 1e-14);
    const rvec a = sinr_from_effective(em.T, em.noise_gain, 0.2);
    const rvec b = instantaneous_sinr(V, H, p, 0.2);
    CHECK((a - b).norm() < 1e-12 * b.norm());
}

TEST_CASE("spectral efficiency")
{
    CHECK_THAT(spectral_efficiency(std::vector<double>{1.0}, 720, 24), WithinAbs(696.0 / 720.0, 1e-15));
    CHECK(spectral_efficiency(std::vector<double>{0.0, 0.0}, 720, 24) == 0.0);
    CHECK_THAT(spectral_efficiency(std::vector<double>{1.0, 3.0}, 240, 24), WithinAbs(0.9 * 1.5, 1e-15));
    CHECK_THROWS(spectral_efficiency(std::vector<double>{}, 720, 24));

    const SEStats st = spectral_efficiency(std::vector<std::vector<double>>{{1.0}, {3.0}, {0.0}}, 10, 0);
    REQUIRE(st.per_user_se.size() == 3);
    CHECK_THAT(st.mean, WithinAbs(1.0, 1e-15));
}

TEST_CASE("SEStats merging is order independent")
{
    SEStats a, b, c;
    a.per_user_se = {0.1, 0.7, 3.0};
    b.per_user_se = {2.2, 0.3};
    c.per_user_se = {1e-3, 9.0, 4.4, 0.25};
    SEStats x = a, y = c;
    x.merge(b);
    x.merge(c);
    y.merge(b);
    y.merge(a);
    CHECK(x.mean == y.mean);
    CHECK(x.p10 == y.p10);
}

TEST_CASE("empirical CDF")
{
    const EmpiricalCdf cdf({4.0, 2.0, 1.0, 3.0});
    CHECK(cdf(2.5) == 0.5);
    CHECK(cdf(0.0) == 0.0);
    CHECK(cdf(4.0) == 1.0);
    const auto t = cdf.table();
    CHECK(t.front() == std::pair<double, double>{1.0, 0.25});
    CHECK(t.back() == std::pair<double, double>{4.0, 1.0});
    CHECK_THAT(cdf.quantile(0.5), WithinAbs(2.5, 1e-15));
    CHECK(cdf.quantile(0.0) == 1.0);

    const EmpiricalCdf flat({2.0, 2.0, 2.0});
    CHECK(flat(1.999) == 0.0);
    CHECK(flat(2.0) == 1.0);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(10000);
    for (double &v : xs)
        v = u(gen);
    const EmpiricalCdf ks(xs);
    double worst = 0.0;
    for (const auto &[v, prob] : ks.table())
        worst = std::max(worst, std::abs(prob - v));
    CHECK(worst < 0.03);

    SEStats st;
    st.per_user_se = xs;
    st.refresh_summary();
    CHECK_THAT(st.p10, WithinAbs(0.1, 0.02));
    CHECK(cdf_table(st).size() == xs.size());
}
