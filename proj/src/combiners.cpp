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

#include "cfmimo/combiners.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace cfmimo
{

UCMask::UCMask(int K, int L, bool value)
    : K_(K), L_(L), serve_(static_cast<std::size_t>(K * L), value ? 1 : 0)
{
}

int UCMask::serving_count(int k) const
{
    int n = 0;
    for (int l = 0; l < L_; ++l)
        n += serves(k, l);
    return n;
}

int UCMask::load(int l) const
{
    int n = 0;
    for (int k = 0; k < K_; ++k)
        n += serves(k, l);
    return n;
}

std::vector<int> UCMask::serving_aps(int k) const
{
    std::vector<int> out;
    for (int l = 0; l < L_; ++l)
        if (serves(k, l))
            out.push_back(l);
    return out;
}

bool UCMask::all_true() const
{
    return std::all_of(serve_.begin(), serve_.end(), [](unsigned char v) { return v != 0; });
}

UCMask uc_select(const CovarianceSet &cov, double uc_fraction)
{
    return uc_select(cov.beta, uc_fraction);
}

UCMask uc_select(const rmat &beta, double uc_fraction)
{
    const int K = static_cast<int>(beta.rows()), L = static_cast<int>(beta.cols());
    if (!(uc_fraction > 0.0 && uc_fraction <= 1.0))
        throw std::invalid_argument("uc_select: fraction must lie in (0, 1]");

    // guard against 0.25 * 24 landing a hair above 6
    const int count = std::clamp(static_cast<int>(std::ceil(uc_fraction * L - 1e-9)), 1, L);

    UCMask mask(K, L);
    std::vector<int> order(static_cast<std::size_t>(L));
    for (int k = 0; k < K; ++k)
    {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return beta(k, a) > beta(k, b); });
        for (int i = 0; i < count; ++i)
            mask.set(k, order[static_cast<std::size_t>(i)], true);
    }
    return mask;
}

CombinerResult mrc_combine(const ChannelEstimate &est, const ReceivedData &data, const UCMask *mask,
                           std::span<const int> ap_order)
{
    if (data.N != est.N || data.L != est.L || data.Y.rows() != est.H_hat.rows())
        throw std::invalid_argument("mrc_combine: estimate and data dimensions differ");

    std::vector<int> order(ap_order.begin(), ap_order.end());
    if (order.empty())
    {
        order.resize(static_cast<std::size_t>(est.L));
        std::iota(order.begin(), order.end(), 0);
    }

    CombinerResult out;
    out.scheme = Scheme::MRC;
    out.uc_applied = mask != nullptr;
    out.S_hat = cmat::Zero(est.K, data.L_D());
    out.V = est.H_hat;

    for (int l : order)
    {
        cmat partial = est.ap_block(l).adjoint() * data.ap_block(l);
        if (mask)
        {
            for (int k = 0; k < est.K; ++k)
                if (!mask->serves(k, l))
                    partial.row(k).setZero();
        }
        out.S_hat += partial;
    }

    if (mask)
    {
        for (int k = 0; k < est.K; ++k)
            for (int l = 0; l < est.L; ++l)
                if (!mask->serves(k, l))
                    out.V.col(k).segment(static_cast<Eigen::Index>(l) * est.N, est.N).setZero();
    }
    return out;
}

namespace
{

cmat lmmse_masked(const ChannelEstimate &est, const rvec &powers, double sigma2, const UCMask &mask)
{
    const int N = est.N;
    cmat V = cmat::Zero(est.H_hat.rows(), est.K);

    for (int k = 0; k < est.K; ++k)
    {
        const std::vector<int> aps = mask.serving_aps(k);
        const Eigen::Index n = static_cast<Eigen::Index>(aps.size()) * N;
        if (n == 0)
            continue;

        cmat Hs(n, est.K);
        for (std::size_t j = 0; j < aps.size(); ++j)
            Hs.middleRows(static_cast<Eigen::Index>(j) * N, N) = est.ap_block(aps[j]);

        cmat B = sigma2 * cmat::Identity(n, n);
        for (int i = 0; i < est.K; ++i)
        {
            if (i == k)
                continue;
            B.noalias() += powers(i) * Hs.col(i) * Hs.col(i).adjoint();
            for (std::size_t j = 0; j < aps.size(); ++j)
                B.block(static_cast<Eigen::Index>(j) * N, static_cast<Eigen::Index>(j) * N, N, N) +=
                    powers(i) * est.error_cov(i, aps[j]);
        }

        Eigen::LLT<cmat> llt(B);
        if (llt.info() != Eigen::Success)
            throw NumericError("lmmse_combiner: restricted system matrix is not positive definite");
        const cvec v = llt.solve(Hs.col(k));
        for (std::size_t j = 0; j < aps.size(); ++j)
            V.col(k).segment(static_cast<Eigen::Index>(aps[j]) * N, N) =
                v.segment(static_cast<Eigen::Index>(j) * N, N);
    }
    return V;
}

} // namespace

cmat lmmse_combiner(const ChannelEstimate &est, const rvec &powers, double sigma2, const UCMask *mask)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("lmmse_combiner: sigma2 must be positive");
    if (powers.size() != est.K)
        throw std::invalid_argument("lmmse_combiner: need one power per user");
    return lmmse_masked(est, powers, sigma2, mask ? *mask : UCMask::all(est.K, est.L));
}

CombinerResult lmmse_receive(const ChannelEstimate &est, const ReceivedData &data, const rvec &powers,
                             double sigma2, const UCMask *mask)
{
    CombinerResult out;
    out.scheme = Scheme::LMMSE;
    out.uc_applied = mask != nullptr;
    out.V = lmmse_combiner(est, powers, sigma2, mask);

    // v_k^H y scaled to the MMSE estimate of s_k under y = sqrt(p_k) h_hat_k s_k + w,
    // Cov(w) = B_k (the matrix inverted for v_k):
    //   s_hat_k = sqrt(p_k) / (1 + p_k h_hat_k^H v_k) * v_k^H y
    for (int k = 0; k < est.K; ++k)
    {
        const double a = est.H_hat.col(k).dot(out.V.col(k)).real();
        out.V.col(k) *= std::sqrt(powers(k)) / (1.0 + powers(k) * a);
    }
    out.S_hat = out.V.adjoint() * data.Y;
    return out;
}

std::pair<cmat, cmat> lmmse_receive_forms(const cmat &H, const cmat &Y, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("lmmse_receive_forms: sigma2 must be positive");
    if (H.rows() != Y.rows())
        throw std::invalid_argument("lmmse_receive_forms: H and Y row counts differ");

    cmat outer = H * H.adjoint();
    outer.diagonal().array() += sigma2;
    Eigen::LLT<cmat> llt_m(outer);

    cmat gram = H.adjoint() * H;
    gram.diagonal().array() += sigma2;
    Eigen::LLT<cmat> llt_k(gram);

    if (llt_m.info() != Eigen::Success || llt_k.info() != Eigen::Success)
        throw NumericError("lmmse_receive_forms: factorization failed");

    cmat first = H.adjoint() * llt_m.solve(Y);
    cmat second = llt_k.solve(H.adjoint() * Y);
    return {std::move(first), std::move(second)};
}

} // namespace cfmimo
