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

#include "cfmimo/estimation.hpp"

#include <cassert>
#include <cmath>

namespace cfmimo
{

ChannelEstimate estimate_channels(const SystemConfig &cfg, const CovarianceSet &cov, const PilotBook &pilots,
                                  const ReceivedPilot &Z)
{
    if (static_cast<int>(Z.Z.size()) != cov.L)
        throw std::invalid_argument("estimate_channels: need one pilot observation per AP");
    if (static_cast<int>(pilots.assignment.size()) < cov.K)
        throw std::invalid_argument("estimate_channels: pilot assignment does not cover all users");

    const int N = cov.N, L = cov.L, K = cov.K;
    const double sigma2 = cfg.sigma2();
    const double tau_p = pilots.tau_p();

    ChannelEstimate est;
    est.N = N;
    est.L = L;
    est.K = K;
    est.H_hat.resize(static_cast<Eigen::Index>(N) * L, K);
    est.Gamma.resize(static_cast<std::size_t>(K * L));
    est.R_blk = cov.R;

    for (int k = 0; k < K; ++k)
    {
        const std::vector<int> shared = pilots.sharing(k);
        const double p_k = cfg.power(k);
        const cvec phi_conj = pilots.pilot(k).conjugate();

        for (int l = 0; l < L; ++l)
        {
            const auto &Z_l = Z.Z[static_cast<std::size_t>(l)];
            if (Z_l.rows() != N || Z_l.cols() != pilots.tau_p())
                throw std::invalid_argument("estimate_channels: pilot observation has wrong shape");

            cmat Psi = sigma2 * cmat::Identity(N, N);
            for (int i : shared)
                Psi += tau_p * cfg.power(i) * cov.at(i, l);

            Eigen::LLT<cmat> llt(Psi);
            assert(llt.info() == Eigen::Success); // sigma2 > 0 keeps Psi positive definite
            if (llt.info() != Eigen::Success)
                throw NumericError("estimate_channels: pilot covariance is not positive definite");

            const cmat &R = cov.at(k, l);
            const cvec projected = Z_l * phi_conj;
            est.H_hat.col(k).segment(static_cast<Eigen::Index>(l) * N, N) = std::sqrt(p_k) * R * llt.solve(projected);

            cmat G = tau_p * p_k * R * llt.solve(R);
            est.Gamma[static_cast<std::size_t>(k * L + l)] = 0.5 * (G + G.adjoint());
        }
    }
    return est;
}

} // namespace cfmimo
