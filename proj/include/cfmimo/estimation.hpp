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

#pragma once

#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo
{

/// Per-AP LMMSE channel estimates.
///
/// The block-diagonal M x M matrices R_i and Gamma_i are kept as their L
/// diagonal N x N blocks; off-block entries are never materialized.
struct ChannelEstimate
{
    int N = 0;
    int L = 0;
    int K = 0;
    cmat H_hat;                // M x K
    std::vector<cmat> Gamma;   // index i * L + l, covariance of h_hat_{i,l}
    std::vector<cmat> R_blk;   // index i * L + l

    auto ap_block(int l) const { return H_hat.middleRows(static_cast<Eigen::Index>(l) * N, N); }
    const cmat &gamma(int i, int l) const { return Gamma[static_cast<std::size_t>(i * L + l)]; }
    const cmat &R(int i, int l) const { return R_blk[static_cast<std::size_t>(i * L + l)]; }
    // Estimation-error covariance R_{i,l} - Gamma_{i,l}.
    cmat error_cov(int i, int l) const { return R(i, l) - gamma(i, l); }
};

// h_hat_{k,l} = sqrt(p_k) R_{k,l} Psi^{-1} Z_l conj(phi_{t_k}),
// Psi = sum_{i in S_k} tau_p p_i R_{i,l} + sigma2 I, solved by Cholesky.
// Gamma_{k,l} = tau_p p_k R_{k,l} Psi^{-1} R_{k,l}.
ChannelEstimate estimate_channels(const SystemConfig &cfg, const CovarianceSet &cov, const PilotBook &pilots,
                                  const ReceivedPilot &Z);

} // namespace cfmimo
