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

#include <cmath>

namespace cfmimo
{

namespace
{

// Soft streams travelling along the stripe. Row k describes user k's stream
//   z_k = g_k s + e_k,  var(e_k) = sigma2 (after renormalization),
// and f_k is the exact end-to-end map from the stacked antenna data (z_k = f_k Y).
struct StreamState
{
    std::vector<bool> active;
    cmat Z; // K x L_D
    cmat G; // K x K effective channel (bookkept, built from estimates)
    cmat F; // K x M
};

// Local observation model at AP l: y_l = H_hat_l P^{1/2} s + noise with
// covariance sigma2 I + sum_i p_i (R_{i,l} - Gamma_{i,l}).
cmat local_noise(const ChannelEstimate &est, const rvec &powers, double sigma2, int l)
{
    cmat Q = sigma2 * cmat::Identity(est.N, est.N);
    for (int i = 0; i < est.K; ++i)
        Q += powers(i) * est.error_cov(i, l);
    return Q;
}

// Solves the LMMSE problem on one augmented observation and writes the
// renormalized streams of `users` back into the state.
//
//   obs    : n x L_D observation rows
//   A      : n x K effective channel of obs
//   E      : n x n covariance of the non-signal part
//   T      : n x M end-to-end map of obs
//   own    : per user, the N x N block p_k (R_{k,l} - Gamma_{k,l}) on the
//            antenna rows; as in the centralized combiner it is left out of
//            user k's own system matrix but stays in the residual variance
void detect_and_forward(StreamState &st, const std::vector<int> &users, const cmat &obs, const cmat &A,
                        const cmat &E, const cmat &T, const std::vector<cmat> &own, double sigma2)
{
    const cmat cov = A * A.adjoint() + E;
    for (int k : users)
    {
        const cmat &Ok = own[static_cast<std::size_t>(k)];
        cmat Bk = cov;
        Bk.noalias() -= A.col(k) * A.col(k).adjoint();
        Bk.topLeftCorner(Ok.rows(), Ok.cols()) -= Ok;
        Eigen::LLT<cmat> llt(Bk);
        if (llt.info() != Eigen::Success)
            throw NumericError("nlmmse: local system matrix is not positive definite");

        const cvec w = llt.solve(A.col(k));
        const double err_var = (w.adjoint() * E * w)(0, 0).real();
        const double c = err_var > 0.0 ? std::sqrt(sigma2 / err_var) : 1.0;
        st.Z.row(k) = c * (w.adjoint() * obs);
        st.G.row(k) = c * (w.adjoint() * A);
        st.F.row(k) = c * (w.adjoint() * T);
        st.active[static_cast<std::size_t>(k)] = true;
    }
}

} // namespace

CombinerResult nlmmse_receive(const ChannelEstimate &est, const ReceivedData &data, const rvec &powers,
                              double sigma2, const UCMask *mask, NlmmseVariant variant)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("nlmmse_receive: sigma2 must be positive");
    if (data.N != est.N || data.L != est.L)
        throw std::invalid_argument("nlmmse_receive: estimate and data dimensions differ");

    const int N = est.N, L = est.L, K = est.K, L_D = data.L_D();
    const Eigen::Index M = static_cast<Eigen::Index>(N) * L;
    const rvec sqrt_p = powers.cwiseSqrt();

    StreamState st;
    st.active.assign(static_cast<std::size_t>(K), false);
    st.Z = cmat::Zero(K, L_D);
    st.G = cmat::Zero(K, K);
    st.F = cmat::Zero(K, M);

    for (int l = 0; l < L; ++l)
    {
        std::vector<int> served;
        for (int k = 0; k < K; ++k)
            if (!mask || mask->serves(k, l))
                served.push_back(k);
        if (served.empty())
            continue;

        const cmat Hl = est.ap_block(l) * sqrt_p.asDiagonal();
        const cmat Ql = local_noise(est, powers, sigma2, l);
        std::vector<cmat> own(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
            own[static_cast<std::size_t>(k)] = powers(k) * est.error_cov(k, l);
        cmat Tl = cmat::Zero(N, M);
        Tl.middleCols(static_cast<Eigen::Index>(l) * N, N).setIdentity();
        const cmat Yl = data.ap_block(l);

        if (variant == NlmmseVariant::PerUserStream)
        {
            const StreamState incoming = st;
            for (int k : served)
            {
                const bool chained = incoming.active[static_cast<std::size_t>(k)];
                const int n = N + (chained ? 1 : 0);
                cmat obs(n, L_D), A(n, K), T(n, M);
                cmat E = cmat::Zero(n, n);
                obs.topRows(N) = Yl;
                A.topRows(N) = Hl;
                T.topRows(N) = Tl;
                E.topLeftCorner(N, N) = Ql;
                if (chained)
                {
                    obs.row(N) = incoming.Z.row(k);
                    A.row(N) = incoming.G.row(k);
                    T.row(N) = incoming.F.row(k);
                    E(N, N) = sigma2;
                }
                detect_and_forward(st, {k}, obs, A, E, T, own, sigma2);
            }
        }
        else
        {
            std::vector<int> chained;
            for (int k = 0; k < K; ++k)
                if (st.active[static_cast<std::size_t>(k)])
                    chained.push_back(k);

            const Eigen::Index n = N + static_cast<Eigen::Index>(chained.size());
            cmat obs(n, L_D), A(n, K), T(n, M);
            cmat E = cmat::Zero(n, n);
            obs.topRows(N) = Yl;
            A.topRows(N) = Hl;
            T.topRows(N) = Tl;
            E.topLeftCorner(N, N) = Ql;
            for (std::size_t j = 0; j < chained.size(); ++j)
            {
                const Eigen::Index r = N + static_cast<Eigen::Index>(j);
                obs.row(r) = st.Z.row(chained[j]);
                A.row(r) = st.G.row(chained[j]);
                T.row(r) = st.F.row(chained[j]);
                E(r, r) = sigma2;
            }
            detect_and_forward(st, served, obs, A, E, T, own, sigma2);
        }
    }

    // CPU: scale each stream to the MMSE estimate of s_k under the bookkept
    // model z_k = g_k s + e_k.
    CombinerResult out;
    out.scheme = Scheme::NLMMSE;
    out.uc_applied = mask != nullptr;
    out.S_hat = cmat::Zero(K, L_D);
    out.V = cmat::Zero(M, K);
    for (int k = 0; k < K; ++k)
    {
        if (!st.active[static_cast<std::size_t>(k)])
            continue;
        const cdouble scale = std::conj(st.G(k, k)) / (st.G.row(k).squaredNorm() + sigma2);
        out.S_hat.row(k) = scale * st.Z.row(k);
        out.V.col(k) = (scale * st.F.row(k)).adjoint();
    }
    return out;
}

} // namespace cfmimo
