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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo
{

/// User-centric serving sets: serve(k, l) is true when AP l detects user k.
class UCMask
{
public:
    UCMask() = default;
    UCMask(int K, int L, bool value = false);

    static UCMask all(int K, int L) { return UCMask(K, L, true); }

    int K() const { return K_; }
    int L() const { return L_; }
    bool serves(int k, int l) const { return serve_[static_cast<std::size_t>(k * L_ + l)] != 0; }
    void set(int k, int l, bool v) { serve_[static_cast<std::size_t>(k * L_ + l)] = v ? 1 : 0; }

    int serving_count(int k) const;
    int load(int l) const; // users served by AP l
    std::vector<int> serving_aps(int k) const;
    bool all_true() const;

private:
    int K_ = 0;
    int L_ = 0;
    std::vector<unsigned char> serve_;
};

// Per user, the ceil(fraction * L) APs with the largest beta_{k,l}; ties go to
// the lower AP index.
UCMask uc_select(const CovarianceSet &cov, double uc_fraction);
UCMask uc_select(const rmat &beta, double uc_fraction);

/// Output of one receiver over a data block.
///
/// V is the M x K linear combiner that maps the stacked received data to the
/// soft outputs (S_hat = V^H Y). Schemes that finish detection at the CPU
/// (N-LMMSE, Q-LMMSE) never form V on an AP; for them V is the end-to-end
/// map, which is what the SINR evaluation needs.
struct CombinerResult
{
    Scheme scheme = Scheme::MRC;
    bool uc_applied = false;
    cmat S_hat; // K x L_D
    cmat V;     // M x K
};

// S^MRC = H_hat^H Y, accumulated as the per-AP partial products
// h_hat_{k,l}^H Y_l in the given AP order (default 0..L-1). With a mask, AP l
// contributes to user k only when it serves k.
CombinerResult mrc_combine(const ChannelEstimate &est, const ReceivedData &data,
                           const UCMask *mask = nullptr, std::span<const int> ap_order = {});

// Combining vectors
//   v_k = (sum_{i != k} p_i (h_hat_i h_hat_i^H + R_i - Gamma_i) + sigma2 I)^{-1} h_hat_k.
// With a mask the system is restricted to user k's serving APs and v_k is
// zero elsewhere.
cmat lmmse_combiner(const ChannelEstimate &est, const rvec &powers, double sigma2, const UCMask *mask = nullptr);

// Centralized LMMSE detection; S_hat is the linear MMSE estimate of the
// transmitted symbols.
CombinerResult lmmse_receive(const ChannelEstimate &est, const ReceivedData &data, const rvec &powers,
                             double sigma2, const UCMask *mask = nullptr);

// Both closed forms of LMMSE detection with known channel H:
//   first  = H^H (H H^H + sigma2 I_M)^{-1} Y
//   second = (H^H H + sigma2 I_K)^{-1} H^H Y
std::pair<cmat, cmat> lmmse_receive_forms(const cmat &H, const cmat &Y, double sigma2);

enum class NlmmseVariant
{
    // AP l combines its N antennas with the single incoming stream of the
    // user being detected (N + 1 observations per user).
    PerUserStream,
    // AP l combines its N antennas with all K incoming streams.
    JointStreams,
};

// Sequential processing along the stripe. Each AP performs LMMSE on its own
// antennas plus the soft streams handed over by the previous AP, using the
// effective channel and per-stream error variance of those streams, then
// rescales every output stream so its error variance equals sigma2. With a
// mask, APs that do not serve user k pass its stream through unchanged.
CombinerResult nlmmse_receive(const ChannelEstimate &est, const ReceivedData &data, const rvec &powers,
                              double sigma2, const UCMask *mask = nullptr,
                              NlmmseVariant variant = NlmmseVariant::PerUserStream);

} // namespace cfmimo
