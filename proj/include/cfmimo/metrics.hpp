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

#include <functional>
#include <utility>
#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo
{

// Instantaneous SINR of every user for the combiner V (M x K), evaluated
// with the true channels H (M x K):
//   p_k |v_k^H h_k|^2 / (sum_{i != k} p_i |v_k^H h_i|^2 + sigma2 ||v_k||^2).
// A zero combiner yields SINR 0.
rvec instantaneous_sinr(const cmat &V, const cmat &H, const rvec &powers, double sigma2);

// Same formula on an end-to-end description: T = F H P^{1/2} (K x K) is the
// map from symbols to outputs and noise_gain(k) = ||f_k||^2.
rvec sinr_from_effective(const cmat &T, const rvec &noise_gain, double sigma2);

// A linear receiver seen as a black box: maps M x n received data to K x n
// outputs.
using LinearReceiver = std::function<cmat(const cmat &)>;

/// End-to-end linear map of a receiver extracted by probing.
struct EffectiveMap
{
    cmat T;          // K x K, outputs per unit transmitted symbol
    rvec noise_gain; // ||f_k||^2
};

// Feeds the receiver the noiseless responses to the identity symbol basis
// (Y = H P^{1/2}) and the identity antenna basis (Y = I_M).
EffectiveMap probe_effective_map(const LinearReceiver &receiver, const cmat &H, const rvec &powers);

/// Per-user spectral efficiencies of one (scheme, UC) configuration.
struct SEStats
{
    std::vector<double> per_user_se; // one entry per (drop, user)
    double mean = 0.0;
    double p10 = 0.0; // 10th percentile, the "90%-likely" SE

    void merge(const SEStats &other);
    void refresh_summary();
};

// SE of one user: (tau_c - tau_p) / tau_c * mean(log2(1 + SINR)).
double spectral_efficiency(const std::vector<double> &sinr_samples, int tau_c, int tau_p);

// SEStats from per-user SINR sample lists.
SEStats spectral_efficiency(const std::vector<std::vector<double>> &sinr_per_user, int tau_c, int tau_p);

/// Empirical CDF with plotting positions i / n.
class EmpiricalCdf
{
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    // Fraction of samples <= x.
    double operator()(double x) const;
    // Linear-interpolated quantile, q in [0, 1].
    double quantile(double q) const;
    double mean() const;

    // Sorted (value, i / n) pairs, i = 1..n.
    std::vector<std::pair<double, double>> table() const;
    const std::vector<double> &sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

std::vector<std::pair<double, double>> cdf_table(const SEStats &stats);

} // namespace cfmimo
