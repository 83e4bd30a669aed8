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

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

/// True channels of one coherence block. Column k of H is h_k, the vertical
/// stack of the per-AP vectors h_{k,1}, ..., h_{k,L}.
struct ChannelBlock
{
    int N = 0;
    int L = 0;
    cmat H; // M x K

    auto ap_block(int l) const { return H.middleRows(static_cast<Eigen::Index>(l) * N, N); }
};

// Hermitian square roots R_{k,l}^{1/2}, computed once per drop.
struct CovarianceSqrt
{
    int K = 0;
    int L = 0;
    int N = 0;
    std::vector<cmat> root; // index k * L + l

    const cmat &at(int k, int l) const { return root[static_cast<std::size_t>(k * L + l)]; }
};

// Throws NumericError if some R_{k,l} has an eigenvalue below
// -1e-10 * trace(R_{k,l}); smaller negative round-off is clamped to 0.
CovarianceSqrt covariance_sqrt(const CovarianceSet &cov);

ChannelBlock draw_channel(const CovarianceSqrt &roots, RngStream &rng);
ChannelBlock draw_channel(const CovarianceSet &cov, RngStream &rng);

/// Orthogonal pilot book. Column t of Phi is the pilot phi_t; user k uses
/// column assignment[k].
struct PilotBook
{
    cmat Phi; // tau_p x tau_p, Phi^H Phi = tau_p I
    std::vector<int> assignment;

    int tau_p() const { return static_cast<int>(Phi.rows()); }
    auto pilot(int k) const { return Phi.col(assignment[static_cast<std::size_t>(k)]); }
    // Users sharing the pilot of user k (S_k), including k.
    std::vector<int> sharing(int k) const;
};

// DFT columns with norm^2 = tau_p; user k gets pilot k. Requires tau_p >= K.
PilotBook make_orthogonal_pilots(int tau_p, int K);
// Pilot t_k = k mod tau_p. Only meant for exercising the pilot-sharing path.
PilotBook make_reused_pilots(int tau_p, int K);

/// Received pilot signals, one N x tau_p matrix per AP.
struct ReceivedPilot
{
    std::vector<cmat> Z;
};

ReceivedPilot transmit_pilots(const SystemConfig &cfg, const ChannelBlock &channel, const PilotBook &pilots,
                              RngStream &noise_rng);

/// Received data block; Y stacks the per-AP N x L_D blocks.
struct ReceivedData
{
    int N = 0;
    int L = 0;
    cmat Y;      // M x L_D
    cmat S_true; // K x L_D

    int L_D() const { return static_cast<int>(Y.cols()); }
    auto ap_block(int l) const { return Y.middleRows(static_cast<Eigen::Index>(l) * N, N); }
};

// Unit-variance symbols: CN(0, 1) or QPSK with unit energy.
cmat draw_symbols(SymbolAlphabet alphabet, int K, int L_D, RngStream &rng);

ReceivedData transmit_data(const SystemConfig &cfg, const ChannelBlock &channel, RngStream &symbol_rng,
                           RngStream &noise_rng);

} // namespace cfmimo
