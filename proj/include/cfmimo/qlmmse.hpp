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

/**
 * @file qlmmse.hpp
 * @brief Quasi-LMMSE detection from MRC fronthaul streams.
 *
 * The CPU only sees S = H^H Y (K x L_D). With unit-power uncorrelated symbols
 * and white noise, S S^H / L_D converges to A = G^2 + sigma2 G where G = H^H H
 * is the user Gram matrix. A and G share eigenvectors and every eigenvalue of
 * A satisfies omega = lambda^2 + sigma2 lambda, whose nonnegative root is
 *
 *     lambda = (sqrt(sigma2^2 + 4 omega) - sigma2) / 2.
 *
 * Because omega -> lambda is a function, it is constant on every eigenspace
 * of A, so G = U diag(lambda) U^H holds for any eigenbasis U that the solver
 * happens to return, repeated eigenvalues included. The LMMSE output
 * (G + sigma2 I)^{-1} S then becomes U diag(mu) U^H S with
 *
 *     mu = 1 / (lambda + sigma2) = 2 / (sqrt(sigma2^2 + 4 omega) + sigma2).
 */

#pragma once

#include "cfmimo/combiners.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

struct MrcStatistics
{
    cmat S_mrc; // K x L_D
    cmat C;     // S_mrc S_mrc^H
    int L_D = 0;
    double sigma2 = 0.0;

    // Estimator of A = G^2 + sigma2 G.
    cmat C_over_LD() const { return C / static_cast<double>(L_D); }
};

MrcStatistics mrc_statistics(const cmat &S_mrc, double sigma2);

struct GramRecovery
{
    cmat U;       // K x K unitary, A = U diag(omega) U^H
    rvec omega;   // descending, clamped at 0
    rvec lambda;  // recovered Gram eigenvalues
    rvec mu;      // 1 / (lambda + sigma2)
    cmat G_hat;   // U diag(lambda) U^H

    int clamped = 0;          // eigenvalues raised to 0 before the inversion
    double min_raw_omega = 0; // smallest eigenvalue before clamping

    // U diag(mu) U^H, i.e. (G_hat + sigma2 I)^{-1}
    cmat transform() const;
};

// Nonnegative root of omega = lambda^2 + sigma2 lambda.
double gram_eigenvalue(double omega, double sigma2);
// 2 / (sqrt(sigma2^2 + 4 omega) + sigma2)
double combiner_weight(double omega, double sigma2);

// Eigendecomposes the Hermitian input (its Hermitian part is used) and maps
// the spectrum. Eigenvalues below zero are clamped; `clamped` counts the ones
// that were more negative than -1e-9 * trace, which callers report as a
// warning. Throws NumericError if the eigensolver fails or the input is far
// from Hermitian.
GramRecovery recover_gram(const cmat &C_over_LD, double sigma2);

// Q-LMMSE on MRC streams: estimates A by C / L_D and applies
// (G_hat + sigma2 I)^{-1} to S_mrc. S_hat estimates the symbols in the units
// in which S_mrc was formed; V stays empty.
CombinerResult qlmmse_receive(const cmat &S_mrc, double sigma2);

// Same transform with A supplied directly (the L_D -> infinity statistic).
CombinerResult qlmmse_receive_exact(const cmat &A, const cmat &S_mrc, double sigma2);

// UC variant: the serving sets only shape the MRC streams, so the CPU side is
// identical to qlmmse_receive.
CombinerResult qlmmse_uc_receive(const cmat &S_mrc_masked, double sigma2);

// CPU-side Q-LMMSE on the output of mrc_combine (masked or not). The streams
// are weighted by sqrt(p_k) at the CPU so that S = (H_hat P^{1/2})^H Y; the
// transform is then learnt from those streams, or from `exact_A` when given.
// V holds the resulting end-to-end combiner H_hat P^{1/2} (G_hat + sigma2 I)^{-1}.
CombinerResult qlmmse_detect(const CombinerResult &mrc, const rvec &powers, double sigma2,
                             const cmat *exact_A = nullptr, GramRecovery *recovery = nullptr);

// Converged MRC statistic for a given (estimated) MRC combiner:
//   A = V^H H H^H V + sigma2 V^H V,
// where V and H already carry the sqrt(p) factors. With V = H this is
// G^2 + sigma2 G.
cmat asymptotic_mrc_statistic(const cmat &V, const cmat &H, double sigma2);

} // namespace cfmimo
