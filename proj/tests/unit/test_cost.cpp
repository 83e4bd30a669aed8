// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "cfmimo/cost.hpp"

using namespace cfmimo;

namespace
{

SystemConfig short_block()
{
    SystemConfig cfg;
    cfg.tau_c = 240;
    return cfg;
}

} // namespace

TEST_CASE("fronthaul loads at the short coherence block")
{
    const SystemConfig cfg = short_block();
    CHECK(fronthaul_load(Scheme::MRC, cfg) == 10368);
    CHECK(fronthaul_load(Scheme::QLMMSE, cfg) == 10368);
    CHECK(fronthaul_load(Scheme::NLMMSE, cfg) == 12096);
    CHECK(fronthaul_load(Scheme::LMMSE, cfg) == 46080);
    CHECK((12096 - 10368) * 7 == 12096);
}

TEST_CASE("fronthaul ordering and degenerate block")
{
    for (int K : {2, 8, 24})
        for (int tc : {K + 1, 100, 720, 5000})
        {
            SystemConfig cfg;
            cfg.K = K;
            cfg.tau_p = K;
            cfg.tau_c = tc;
            CHECK(fronthaul_load(Scheme::MRC, cfg) == fronthaul_load(Scheme::QLMMSE, cfg));
            const double LD = tc - K, M = cfg.M();
            if (K < M && LD > 3.0 * K * K / (2.0 * (M - K)))
            {
                CHECK(fronthaul_load(Scheme::LMMSE, cfg) > fronthaul_load(Scheme::NLMMSE, cfg));
                CHECK(fronthaul_load(Scheme::NLMMSE, cfg) > fronthaul_load(Scheme::MRC, cfg));
            }
        }
    SystemConfig flat;
    flat.tau_c = flat.tau_p; // not a valid run config, but the formula is defined
    CHECK(fronthaul_load(Scheme::MRC, flat) == 0);
    CHECK(fronthaul_load(Scheme::NLMMSE, flat) == 3 * 24 * 24);
    CHECK(fronthaul_load(Scheme::LMMSE, flat) == 2 * 96 * 24);
}

TEST_CASE("Hermitian solve count")
{
    CHECK(hermitian_solve_mults(4, 1) == 21 + 16);
    CHECK(hermitian_solve_mults(5, 1) == 41 + 25);
    CHECK(hermitian_solve_mults(96, 24) == 294912 + 221184);
}

TEST_CASE("complexity at the short coherence block")
{
    const SystemConfig cfg = short_block();
    // per user and AP: pilot projection 4*24, solve 21 + 16, product 16
    const std::uint64_t estimate = 24 * (96 + 37 + 16);
    REQUIRE(estimate == 3576);

    const CostReport mrc = complexity_counts(Scheme::MRC, cfg);
    CHECK(mrc.c_serial == 0);
    CHECK(mrc.c_parallel == estimate + 24 * 4 * 216);
    CHECK(mrc.c_total == mrc.c_parallel);

    const CostReport q = complexity_counts(Scheme::QLMMSE, cfg);
    CHECK(q.c_total == 24312);
    CHECK(q.c_total == q.c_parallel);
    CHECK(q.cpu_mults > 0);

    // per user: system 25*24, solve 41+25, stream 5*216, channel 5*24,
    // error variance 25+5, renormalization 216+24
    const std::uint64_t per_user = 600 + 66 + 1080 + 120 + 30 + 240;
    const CostReport n = complexity_counts(Scheme::NLMMSE, cfg);
    CHECK(n.c_serial == 24 * per_user);
    CHECK(n.c_parallel == estimate);
    CHECK(n.c_total == 24 * 24 * per_user + estimate);
    CHECK(n.c_total == 1233912);
    CHECK(static_cast<double>(n.c_total) / static_cast<double>(q.c_total) > 20.0);

    const CostReport lm = complexity_counts(Scheme::LMMSE, cfg);
    CHECK(lm.c_total == estimate);
    CHECK(lm.fronthaul_reals == 46080);
}

TEST_CASE("c_total is twice the serial work plus the parallel work")
{
    SystemConfig cfg;
    cfg.L = 2;
    cfg.N = 2;
    cfg.K = 2;
    cfg.tau_p = 2;
    cfg.tau_c = 30;
    for (Scheme s : {Scheme::MRC, Scheme::LMMSE, Scheme::NLMMSE, Scheme::QLMMSE})
    {
        const CostReport r = complexity_counts(s, cfg);
        CHECK(r.c_total == 2 * r.c_serial + r.c_parallel);
    }
}

TEST_CASE("UC counts follow the most loaded AP")
{
    SystemConfig cfg = short_block();
    cfg.L = 4;
    cfg.K = 4;
    cfg.tau_p = 4;
    UCMask m(4, 4);
    m.set(0, 0, true);
    m.set(1, 0, true);
    m.set(2, 0, true);
    m.set(3, 1, true);
    const CostReport full = complexity_counts(Scheme::NLMMSE, cfg);
    const CostReport uc = complexity_counts(Scheme::NLMMSE, cfg, &m);
    CHECK(uc.uc);
    CHECK(uc.c_parallel * 4 == full.c_parallel * 3);
    CHECK(uc.c_serial * 4 == full.c_serial * 3);
    CHECK(uc.c_total == 4 * uc.c_serial + uc.c_parallel);
    const CostReport q = complexity_counts(Scheme::QLMMSE, cfg, &m);
    CHECK(q.c_total == q.c_parallel);
}
