// SPDX-License-Identifier: Apache-2.0
//
// cfmimo - uplink simulator for cell-free massive MIMO over radio stripes
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfmimo/cost.hpp"

#include <algorithm>

namespace cfmimo
{

using u64 = std::uint64_t;

std::uint64_t fronthaul_load(Scheme scheme, const SystemConfig &cfg)
{
    const u64 K = static_cast<u64>(cfg.K);
    const u64 M = static_cast<u64>(cfg.M());
    const u64 L_D = static_cast<u64>(std::max(cfg.tau_c - cfg.tau_p, 0));
    switch (scheme)
    {
    case Scheme::MRC:
    case Scheme::QLMMSE:
        return 2 * K * L_D;
    case Scheme::LMMSE:
        return 2 * M * L_D + 2 * M * K;
    case Scheme::NLMMSE:
        return 2 * K * L_D + 3 * K * K;
    }
    throw std::invalid_argument("fronthaul_load: unknown scheme");
}

std::uint64_t hermitian_solve_mults(std::uint64_t n, std::uint64_t rhs)
{
    return n * n * n / 3 + n * n * rhs;
}

namespace
{

struct ApCounts
{
    u64 parallel = 0;
    u64 serial = 0;
};

ApCounts ap_counts(Scheme scheme, const SystemConfig &cfg, u64 users)
{
    const u64 N = static_cast<u64>(cfg.N);
    const u64 K = static_cast<u64>(cfg.K);
    const u64 tau_p = static_cast<u64>(cfg.tau_p);
    const u64 L_D = static_cast<u64>(cfg.L_D());

    const u64 estimate = users * (N * tau_p + hermitian_solve_mults(N, 1) + N * N);

    ApCounts c;
    switch (scheme)
    {
    case Scheme::MRC:
    case Scheme::QLMMSE:
        c.parallel = estimate + users * N * L_D;
        break;
    case Scheme::LMMSE:
        c.parallel = estimate;
        break;
    case Scheme::NLMMSE:
    {
        const u64 n = N + 1;
        const u64 per_user = n * n * K                    // A A^H
                             + hermitian_solve_mults(n, 1) // w
                             + n * L_D                     // stream
                             + n * K                       // effective channel
                             + n * n + n                   // error variance w^H E w
                             + L_D + K;                    // renormalization
        c.parallel = estimate;
        c.serial = users * per_user;
        break;
    }
    }
    return c;
}

u64 cpu_counts(Scheme scheme, const SystemConfig &cfg)
{
    const u64 K = static_cast<u64>(cfg.K);
    const u64 M = static_cast<u64>(cfg.M());
    const u64 L_D = static_cast<u64>(cfg.L_D());
    switch (scheme)
    {
    case Scheme::MRC:
        return 0;
    case Scheme::QLMMSE:
        // correlation, eigendecomposition (~9 K^3), U diag(mu) U^H, application
        return K * K * L_D + 9 * K * K * K + K * K * K + K * K * L_D;
    case Scheme::LMMSE:
        return M * M * K + hermitian_solve_mults(M, K) + K * M * L_D;
    case Scheme::NLMMSE:
        return K * L_D;
    }
    return 0;
}

} // namespace

CostReport complexity_counts(Scheme scheme, const SystemConfig &cfg, const UCMask *mask)
{
    CostReport r;
    r.scheme = scheme;
    r.uc = mask != nullptr;
    r.fronthaul_reals = fronthaul_load(scheme, cfg);
    r.cpu_mults = cpu_counts(scheme, cfg);

    if (!mask)
    {
        const ApCounts c = ap_counts(scheme, cfg, static_cast<u64>(cfg.K));
        r.c_parallel = c.parallel;
        r.c_serial = c.serial;
    }
    else
    {
        for (int l = 0; l < mask->L(); ++l)
        {
            const ApCounts c = ap_counts(scheme, cfg, static_cast<u64>(mask->load(l)));
            r.c_parallel = std::max(r.c_parallel, c.parallel);
            r.c_serial = std::max(r.c_serial, c.serial);
        }
    }
    r.c_total = static_cast<u64>(cfg.L) * r.c_serial + r.c_parallel;
    return r;
}

} // namespace cfmimo
