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

#include "cfmimo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo
{

rvec sinr_from_effective(const cmat &T, const rvec &noise_gain, double sigma2)
{
    const Eigen::Index K = T.rows();
    rvec sinr(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double signal = std::norm(T(k, k));
        double interference = 0.0;
        for (Eigen::Index i = 0; i < T.cols(); ++i)
            if (i != k)
                interference += std::norm(T(k, i));
        const double denom = interference + sigma2 * noise_gain(k);
        sinr(k) = signal == 0.0 ? 0.0 : signal / denom;
    }
    return sinr;
}

rvec instantaneous_sinr(const cmat &V, const cmat &H, const rvec &powers, double sigma2)
{
    if (V.rows() != H.rows() || V.cols() != H.cols() || powers.size() != H.cols())
        throw std::invalid_argument("instantaneous_sinr: dimension mismatch");
    const cmat T = V.adjoint() * H * powers.cwiseSqrt().asDiagonal();
    const rvec gain = V.colwise().squaredNorm().transpose();
    return sinr_from_effective(T, gain, sigma2);
}

EffectiveMap probe_effective_map(const LinearReceiver &receiver, const cmat &H, const rvec &powers)
{
    const Eigen::Index M = H.rows();
    EffectiveMap out;
    out.T = receiver(H * powers.cwiseSqrt().asDiagonal());
    const cmat F = receiver(cmat::Identity(M, M));
    out.noise_gain = F.rowwise().squaredNorm();
    return out;
}

void SEStats::merge(const SEStats &other)
{
    per_user_se.insert(per_user_se.end(), other.per_user_se.begin(), other.per_user_se.end());
    refresh_summary();
}

void SEStats::refresh_summary()
{
    if (per_user_se.empty())
    {
        mean = p10 = 0.0;
        return;
    }
    EmpiricalCdf cdf(per_user_se);
    mean = cdf.mean();
    p10 = cdf.quantile(0.1);
}

double spectral_efficiency(const std::vector<double> &sinr_samples, int tau_c, int tau_p)
{
    if (sinr_samples.empty())
        throw std::invalid_argument("spectral_efficiency: no SINR samples");
    double acc = 0.0;
    for (double s : sinr_samples)
        acc += std::log2(1.0 + std::max(s, 0.0));
    const double prefactor = static_cast<double>(tau_c - tau_p) / tau_c;
    return prefactor * acc / static_cast<double>(sinr_samples.size());
}

SEStats spectral_efficiency(const std::vector<std::vector<double>> &sinr_per_user, int tau_c, int tau_p)
{
    SEStats stats;
    stats.per_user_se.reserve(sinr_per_user.size());
    for (const auto &samples : sinr_per_user)
        stats.per_user_se.push_back(spectral_efficiency(samples, tau_c, tau_p));
    stats.refresh_summary();
    return stats;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples))
{
    if (sorted_.empty())
        throw std::invalid_argument("EmpiricalCdf: no samples");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const
{
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double q) const
{
    q = std::clamp(q, 0.0, 1.0);
    const double pos = q * static_cast<double>(sorted_.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted_.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted_[lo] + frac * (sorted_[hi] - sorted_[lo]);
}

double EmpiricalCdf::mean() const
{
    // summed in sorted order so the result does not depend on merge order
    return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> EmpiricalCdf::table() const
{
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted_.size());
    const double n = static_cast<double>(sorted_.size());
    for (std::size_t i = 0; i < sorted_.size(); ++i)
        out.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
    return out;
}

std::vector<std::pair<double, double>> cdf_table(const SEStats &stats)
{
    return EmpiricalCdf(stats.per_user_se).table();
}

} // namespace cfmimo
