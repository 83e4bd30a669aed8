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

#include "cfmimo/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cfmimo
{

namespace
{

cmat hermitian_sqrt(const cmat &R)
{
    Eigen::SelfAdjointEigenSolver<cmat> eig(R);
    if (eig.info() != Eigen::Success)
        throw NumericError("eigendecomposition of covariance failed");

    const double trace = R.trace().real();
    rvec ev = eig.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() < -1e-10 * std::abs(trace))
        throw NumericError("covariance is not positive semidefinite");
    // eigenvalues at round-off level are exact zeros (rank-deficient R)
    const double floor = ev.size() > 0 ? 64.0 * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff() : 0.0;
    ev = (ev.array() <= floor).select(0.0, ev).cwiseSqrt();
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().adjoint();
}

} // namespace

CovarianceSqrt covariance_sqrt(const CovarianceSet &cov)
{
    CovarianceSqrt out;
    out.K = cov.K;
    out.L = cov.L;
    out.N = cov.N;
    out.root.reserve(cov.R.size());
    for (int k = 0; k < cov.K; ++k)
    {
        for (int l = 0; l < cov.L; ++l)
        {
            try
            {
                out.root.push_back(hermitian_sqrt(cov.at(k, l)));
            }
            catch (const NumericError &e)
            {
                throw NumericError(std::string(e.what()) + " for (k=" + std::to_string(k) +
                                   ", l=" + std::to_string(l) + ")");
            }
        }
    }
    return out;
}

ChannelBlock draw_channel(const CovarianceSqrt &roots, RngStream &rng)
{
    ChannelBlock ch;
    ch.N = roots.N;
    ch.L = roots.L;
    ch.H.resize(static_cast<Eigen::Index>(roots.N) * roots.L, roots.K);
    for (int k = 0; k < roots.K; ++k)
    {
        for (int l = 0; l < roots.L; ++l)
        {
            const cmat g = rng.complex_normal(roots.N, 1);
            ch.H.col(k).segment(static_cast<Eigen::Index>(l) * roots.N, roots.N) = roots.at(k, l) * g;
        }
    }
    return ch;
}

ChannelBlock draw_channel(const CovarianceSet &cov, RngStream &rng)
{
    return draw_channel(covariance_sqrt(cov), rng);
}

std::vector<int> PilotBook::sharing(int k) const
{
    std::vector<int> out;
    const int t = assignment[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == t)
            out.push_back(static_cast<int>(i));
    return out;
}

namespace
{

cmat dft_pilots(int tau_p)
{
    cmat Phi(tau_p, tau_p);
    for (int n = 0; n < tau_p; ++n)
        for (int t = 0; t < tau_p; ++t)
            Phi(n, t) = std::polar(1.0, -2.0 * std::numbers::pi * ((static_cast<long>(n) * t) % tau_p) / tau_p);
    return Phi;
}

} // namespace

PilotBook make_orthogonal_pilots(int tau_p, int K)
{
    if (tau_p < K)
        throw std::invalid_argument("orthogonal pilots need tau_p >= K");
    PilotBook book;
    book.Phi = dft_pilots(tau_p);
    for (int k = 0; k < K; ++k)
        book.assignment.push_back(k);
    return book;
}

PilotBook make_reused_pilots(int tau_p, int K)
{
    PilotBook book;
    book.Phi = dft_pilots(tau_p);
    for (int k = 0; k < K; ++k)
        book.assignment.push_back(k % tau_p);
    return book;
}

ReceivedPilot transmit_pilots(const SystemConfig &cfg, const ChannelBlock &channel, const PilotBook &pilots,
                              RngStream &noise_rng)
{
    const int K = static_cast<int>(channel.H.cols());
    if (static_cast<int>(pilots.assignment.size()) < K)
        throw std::invalid_argument("pilot assignment does not cover all users");

    const double sigma2 = cfg.sigma2();
    ReceivedPilot out;
    out.Z.reserve(static_cast<std::size_t>(channel.L));
    for (int l = 0; l < channel.L; ++l)
    {
        cmat Z = noise_rng.complex_normal(channel.N, pilots.tau_p(), sigma2);
        const auto Hl = channel.ap_block(l);
        for (int i = 0; i < K; ++i)
            Z.noalias() += std::sqrt(cfg.power(i)) * Hl.col(i) * pilots.pilot(i).transpose();
        out.Z.push_back(std::move(Z));
    }
    return out;
}

cmat draw_symbols(SymbolAlphabet alphabet, int K, int L_D, RngStream &rng)
{
    if (alphabet == SymbolAlphabet::Gaussian)
        return rng.complex_normal(K, L_D);

    cmat S(K, L_D);
    std::uniform_int_distribution<int> bit(0, 1);
    for (Eigen::Index c = 0; c < L_D; ++c)
        for (Eigen::Index r = 0; r < K; ++r)
        {
            const double re = bit(rng.engine()) ? M_SQRT1_2 : -M_SQRT1_2;
            const double im = bit(rng.engine()) ? M_SQRT1_2 : -M_SQRT1_2;
            S(r, c) = {re, im};
        }
    return S;
}

ReceivedData transmit_data(const SystemConfig &cfg, const ChannelBlock &channel, RngStream &symbol_rng,
                           RngStream &noise_rng)
{
    const int K = static_cast<int>(channel.H.cols());
    const int L_D = cfg.L_D();
    if (L_D < 1)
        throw std::invalid_argument("transmit_data: tau_c - tau_p must be >= 1");

    ReceivedData out;
    out.N = channel.N;
    out.L = channel.L;
    out.S_true = draw_symbols(cfg.symbols, K, L_D, symbol_rng);

    rvec sqrt_p(K);
    for (int k = 0; k < K; ++k)
        sqrt_p(k) = std::sqrt(cfg.power(k));

    out.Y = noise_rng.complex_normal(channel.H.rows(), L_D, cfg.sigma2());
    out.Y.noalias() += channel.H * sqrt_p.asDiagonal() * out.S_true;
    return out;
}

} // namespace cfmimo
