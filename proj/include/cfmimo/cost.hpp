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

/**
 * @file cost.hpp
 * @brief Fronthaul loading and AP complexity per coherence block.
 *
 * Complexity is the number of complex multiplications. Counting rules:
 *
 *   - dense product (m x n)(n x p): m n p
 *   - Hermitian solve of size n with r right-hand sides (Cholesky plus
 *     substitution): floor(n^3 / 3) + n^2 r
 *   - channel estimate of one user at one AP: pilot projection N tau_p, one
 *     solve of size N, one N x N matrix-vector product
 *   - MRC / Q-LMMSE AP work: estimates plus h_hat_{k,l}^H Y_l (N L_D per
 *     user); everything is parallel, the stripe only adds partial sums
 *   - centralized LMMSE AP work: estimates only (raw data is forwarded)
 *   - N-LMMSE AP work: estimates are parallel; per user the (N+1) x (N+1)
 *     system build, solve, stream/effective-channel update and renormalization
 *     wait for the previous AP and are serial
 *
 * Under UC an AP only processes the users it serves; c_parallel and c_serial
 * are then the maxima over APs (the most loaded AP sets the latency).
 * CPU work is reported separately in cpu_mults and is not part of c_total.
 */

#pragma once

#include <cstdint>

#include "cfmimo/combiners.hpp"
#include "cfmimo/config.hpp"

namespace cfmimo
{

struct CostReport
{
    Scheme scheme = Scheme::MRC;
    bool uc = false;
    std::uint64_t fronthaul_reals = 0;
    std::uint64_t c_serial = 0;
    std::uint64_t c_parallel = 0;
    std::uint64_t c_total = 0; // L * c_serial + c_parallel
    std::uint64_t cpu_mults = 0;
};

// Real numbers sent to the CPU per coherence block.
std::uint64_t fronthaul_load(Scheme scheme, const SystemConfig &cfg);

std::uint64_t hermitian_solve_mults(std::uint64_t n, std::uint64_t rhs);

CostReport complexity_counts(Scheme scheme, const SystemConfig &cfg, const UCMask *mask = nullptr);

} // namespace cfmimo
