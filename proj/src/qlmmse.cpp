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

#include "cfmimo/qlmmse.hpp"

#include <algorithm>
#include <cmath>

namespace cfmimo
{

MrcStatistics mrc_statistics(const cmat &S_mrc, double sigma2)
{
    if (S_mrc.cols() < 1)
        throw std::invalid_argument("mrc_statistics: need at least one data symbol");

    MrcStatistics st;
    st.S_mrc = S_mrc;
    st.L_D = static_cast<int>(S_mrc.cols());
    st.sigma2 = sigma2;
    st.C = S_mrc * S_mrc.adjoint();
    // exact Hermitian symmetry; the product is only Hermitian up to round-off
    st.C = 0.5 * (st.C + st.C.adjoint()).eval();
    return st;
}

double gram_eigenvalue(double omega, double sigma2)
{
    // (sqrt(s^2 + 4w) - s) / 2 cancels badly for small omega; the conjugate
    // form 2w / (sqrt(s^2 + 4w) + s) is exact to rounding everywhere.
    if (sigma2 == 0.0)
        return std::sqrt(omega);
    const double root = std::sqrt(sigma2 * sigma2 + 4.0 * omega);
    const double denom = root + sigma2;
    return denom > 0.0 ? 2.0 * omega / denom : 0.0;
}

double combiner_weight(double omega, double sigma2)
{
    return 2.0 / (std::sqrt(sigma2 * sigma2 + 4.0 * omega) + sigma2);
}

cmat GramRecovery::transform() const
{
    return U * mu.asDiagonal() * U.adjoint();
}

GramRecovery recover_gram(const cmat &C_over_LD, double sigma2)
{
    if (C_over_LD.rows() != C_over_LD.cols())
        throw std::invalid_argument("recover_gram: input must be square");
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("recover_gram: sigma2 must be >= 0");

    const double scale = std::max(C_over_LD.norm(), 1e-300);
    if ((C_over_LD - C_over_LD.adjoint()).norm() > 1e-8 * scale)
        throw NumericError("recover_gram: input is not Hermitian");

    const cmat herm = 0.5 * (C_over_LD + C_over_LD.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> eig(herm);
    if (eig.info() != Eigen::Success)
        throw NumericError("recover_gram: eigendecomposition failed");

    const Eigen::Index K = herm.rows();
    GramRecovery g;
    g.U.resize(K, K);
    g.omega.resize(K);
    g.lambda.resize(K);
    g.mu.resize(K);

    // Eigen returns ascending order; store descending.
    const double tol = 1e-9 * std::abs(herm.trace().real());
    g.min_raw_omega = K > 0 ? eig.eigenvalues().minCoeff() : 0.0;
    for (Eigen::Index i = 0; i < K; ++i)
    {
        const Eigen::Index src = K - 1 - i;
        double w = eig.eigenvalues()(src);
        if (w < 0.0)
        {
            if (w < -tol)
                ++g.clamped;
            w = 0.0;
        }
        g.omega(i) = w;
        g.U.col(i) = eig.eigenvectors().col(src);
        g.lambda(i) = gram_eigenvalue(w, sigma2);
        g.mu(i) = combiner_weight(w, sigma2);
    }
    g.G_hat = g.U * g.lambda.asDiagonal() * g.U.adjoint();
    return g;
}

namespace
{

CombinerResult apply_transform(const GramRecovery &g, const cmat &S_mrc)
{
    CombinerResult out;
    out.scheme = Scheme::QLMMSE;
    out.S_hat = g.transform() * S_mrc;
    return out;
}

} // namespace

CombinerResult qlmmse_receive(const cmat &S_mrc, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("qlmmse_receive: sigma2 must be positive");
    const MrcStatistics st = mrc_statistics(S_mrc, sigma2);
    return apply_transform(recover_gram(st.C_over_LD(), sigma2), S_mrc);
}

CombinerResult qlmmse_receive_exact(const cmat &A, const cmat &S_mrc, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("qlmmse_receive_exact: sigma2 must be positive");
    return apply_transform(recover_gram(A, sigma2), S_mrc);
}

CombinerResult qlmmse_uc_receive(const cmat &S_mrc_masked, double sigma2)
{
    CombinerResult out = qlmmse_receive(S_mrc_masked, sigma2);
    out.uc_applied = true;
    return out;
}

CombinerResult qlmmse_detect(const CombinerResult &mrc, const rvec &powers, double sigma2, const cmat *exact_A,
                             GramRecovery *recovery)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("qlmmse_detect: sigma2 must be positive");
    if (powers.size() != mrc.S_hat.rows())
        throw std::invalid_argument("qlmmse_detect: need one power per stream");

    const rvec sqrt_p = powers.cwiseSqrt();
    const cmat S = sqrt_p.asDiagonal() * mrc.S_hat;
    const GramRecovery g = recover_gram(exact_A ? *exact_A : mrc_statistics(S, sigma2).C_over_LD(), sigma2);
    const cmat B = g.transform();

    CombinerResult out;
    out.scheme = Scheme::QLMMSE;
    out.uc_applied = mrc.uc_applied;
    out.S_hat = B * S;
    out.V = mrc.V * sqrt_p.asDiagonal() * B.adjoint();
    if (recovery)
        *recovery = g;
    return out;
}

cmat asymptotic_mrc_statistic(const cmat &V, const cmat &H, double sigma2)
{
    const cmat D = V.adjoint() * H;
    cmat A = D * D.adjoint() + sigma2 * (V.adjoint() * V);
    return 0.5 * (A + A.adjoint());
}

} // namespace cfmimo
