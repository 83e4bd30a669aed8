// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the unit tests.

#pragma once

#include <random>

#include "cfmimo/types.hpp"

namespace testutil
{

using namespace cfmimo;

inline cmat random_complex(int rows, int cols, std::mt19937_64 &gen, double scale = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5) * scale);
    cmat out(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            out(i, j) = {n(gen), n(gen)};
    return out;
}

// Random Hermitian PSD matrix with the given eigenvalues.
inline cmat psd_with_eigenvalues(const rvec &eig, std::mt19937_64 &gen)
{
    const int n = static_cast<int>(eig.size());
    Eigen::HouseholderQR<cmat> qr(random_complex(n, n, gen));
    const cmat Q = qr.householderQ();
    return Q * eig.cast<cdouble>().asDiagonal() * Q.adjoint();
}

inline double rel_err(const cmat &a, const cmat &b)
{
    const double nb = b.norm();
    return nb == 0.0 ? a.norm() : (a - b).norm() / nb;
}

} // namespace testutil
