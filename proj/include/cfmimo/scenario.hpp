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

#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Vec3 &a, const Vec3 &b);

/// Deployment geometry of one drop.
///
/// APs sit on the rectangular room perimeter at the stripe height, walked
/// counter-clockwise from the corner (0, 0). Each AP carries a half-wavelength
/// ULA whose axis runs along its wall; `ap_tangent` is that axis and
/// `ap_normal` the inward wall normal (array broadside), both horizontal.
struct Layout
{
    std::vector<Vec3> ap_positions;
    std::vector<Vec3> ap_tangent;
    std::vector<Vec3> ap_normal;
    std::vector<Vec3> user_positions;

    int L() const { return static_cast<int>(ap_positions.size()); }
    int K() const { return static_cast<int>(user_positions.size()); }

    // Azimuth of the AP -> user direction measured from the array broadside.
    double nominal_angle(int k, int l) const;
};

Layout place_layout(const SystemConfig &cfg, RngStream &rng);

// Large-scale gain (linear) at distance d [m]: -30.5 - 36.7 log10(d) dB.
// Throws std::domain_error for d <= 0.
double large_scale_gain(double d);

constexpr double kMinDistance = 1.0;

/// Per-link spatial covariances R_{k,l} (N x N) and large-scale gains.
struct CovarianceSet
{
    int K = 0;
    int L = 0;
    int N = 0;
    std::vector<cmat> R; // index k * L + l
    rmat beta;           // K x L

    const cmat &at(int k, int l) const { return R[static_cast<std::size_t>(k * L + l)]; }
    cmat &at(int k, int l) { return R[static_cast<std::size_t>(k * L + l)]; }
};

// Normalized (unit diagonal) correlation of an N-element half-wavelength ULA
// under the local scattering model with a Laplace angular deviation of
// standard deviation `spread_rad` around `nominal_rad`. The Laplace density is
// truncated at +-5 spreads and renormalized; entries come from adaptive
// Gauss-Kronrod quadrature with tolerance 1e-8. Throws NumericError when the
// quadrature error estimate stays above tolerance.
cmat laplace_ula_correlation(int N, double nominal_rad, double spread_rad);

// Steering vector a_n = exp(j pi n sin(theta)) of the same ULA.
cvec ula_steering(int N, double theta_rad);

CovarianceSet build_covariances(const SystemConfig &cfg, const Layout &layout);

} // namespace cfmimo
