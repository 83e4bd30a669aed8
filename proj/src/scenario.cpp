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

#include "cfmimo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cfmimo
{

double distance(const Vec3 &a, const Vec3 &b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double Layout::nominal_angle(int k, int l) const
{
    const Vec3 &ap = ap_positions[static_cast<std::size_t>(l)];
    const Vec3 &ue = user_positions[static_cast<std::size_t>(k)];
    const Vec3 &t = ap_tangent[static_cast<std::size_t>(l)];
    const Vec3 &n = ap_normal[static_cast<std::size_t>(l)];
    const double dx = ue.x - ap.x, dy = ue.y - ap.y;
    return std::atan2(dx * t.x + dy * t.y, dx * n.x + dy * n.y);
}

Layout place_layout(const SystemConfig &cfg, RngStream &rng)
{
    Layout out;
    const double X = cfg.room_x, Y = cfg.room_y;
    const double perimeter = 2.0 * (X + Y);
    const double spacing = perimeter / cfg.L;

    for (int l = 0; l < cfg.L; ++l)
    {
        const double s = l * spacing;
        Vec3 pos{0.0, 0.0, cfg.stripe_height}, tangent, normal;
        if (s < X)
        {
            pos.x = s;
            tangent = {1.0, 0.0, 0.0};
            normal = {0.0, 1.0, 0.0};
        }
        else if (s < X + Y)
        {
            pos.x = X;
            pos.y = s - X;
            tangent = {0.0, 1.0, 0.0};
            normal = {-1.0, 0.0, 0.0};
        }
        else if (s < 2.0 * X + Y)
        {
            pos.x = X - (s - X - Y);
            pos.y = Y;
            tangent = {-1.0, 0.0, 0.0};
            normal = {0.0, -1.0, 0.0};
        }
        else
        {
            pos.y = Y - (s - 2.0 * X - Y);
            tangent = {0.0, -1.0, 0.0};
            normal = {1.0, 0.0, 0.0};
        }
        out.ap_positions.push_back(pos);
        out.ap_tangent.push_back(tangent);
        out.ap_normal.push_back(normal);
    }

    out.user_positions.reserve(static_cast<std::size_t>(cfg.K));
    for (int k = 0; k < cfg.K; ++k)
    {
        const double x = rng.uniform(0.0, X);
        const double y = rng.uniform(0.0, Y);
        out.user_positions.push_back({x, y, cfg.user_height});
    }
    return out;
}

double large_scale_gain(double d)
{
    if (!(d > 0.0))
        throw std::domain_error("large_scale_gain: distance must be positive");
    const double gain_db = -30.5 - 36.7 * std::log10(d);
    return std::pow(10.0, gain_db / 10.0);
}

cvec ula_steering(int N, double theta_rad)
{
    cvec a(N);
    for (int n = 0; n < N; ++n)
        a(n) = std::polar(1.0, std::numbers::pi * n * std::sin(theta_rad));
    return a;
}

cmat laplace_ula_correlation(int N, double nominal_rad, double spread_rad)
{
    if (spread_rad == 0.0)
    {
        cvec a = ula_steering(N, nominal_rad);
        return a * a.adjoint();
    }

    using boost::math::quadrature::gauss_kronrod;
    constexpr double tol = 1e-8;
    constexpr unsigned max_depth = 20;

    const double width = 5.0 * spread_rad;
    const double rate = std::numbers::sqrt2 / spread_rad;
    auto pdf = [&](double delta) { return 0.5 * rate * std::exp(-rate * std::abs(delta)); };

    // The density has a kink at 0, so each half is integrated separately.
    auto integrate = [&](auto &&f)
    {
        double total = 0.0;
        for (auto [a, b] : {std::pair{-width, 0.0}, std::pair{0.0, width}})
        {
            double err = 0.0, l1 = 0.0;
            total += gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err, &l1);
            if (!(err <= tol * std::max(l1, 1.0)))
                throw NumericError("local scattering quadrature did not converge");
        }
        return total;
    };

    const double mass = integrate(pdf);

    // Toeplitz Hermitian: [R]_{m,n} = c_{m-n}, c_{-d} = conj(c_d).
    std::vector<cdouble> lag(static_cast<std::size_t>(N));
    lag[0] = 1.0;
    for (int d = 1; d < N; ++d)
    {
        auto phase = [&](double delta) { return std::numbers::pi * d * std::sin(nominal_rad + delta); };
        const double re = integrate([&](double delta) { return std::cos(phase(delta)) * pdf(delta); });
        const double im = integrate([&](double delta) { return std::sin(phase(delta)) * pdf(delta); });
        lag[static_cast<std::size_t>(d)] = cdouble(re, im) / mass;
    }

    cmat R(N, N);
    for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n)
            R(m, n) = m >= n ? lag[static_cast<std::size_t>(m - n)] : std::conj(lag[static_cast<std::size_t>(n - m)]);
    return R;
}

CovarianceSet build_covariances(const SystemConfig &cfg, const Layout &layout)
{
    CovarianceSet cov;
    cov.K = layout.K();
    cov.L = layout.L();
    cov.N = cfg.N;
    cov.beta.resize(cov.K, cov.L);
    cov.R.resize(static_cast<std::size_t>(cov.K * cov.L));

    const double spread = cfg.angle_spread_deg * std::numbers::pi / 180.0;

    for (int k = 0; k < cov.K; ++k)
    {
        for (int l = 0; l < cov.L; ++l)
        {
            const double d = std::max(kMinDistance, distance(layout.user_positions[static_cast<std::size_t>(k)],
                                                             layout.ap_positions[static_cast<std::size_t>(l)]));
            const double beta = large_scale_gain(d);
            cov.beta(k, l) = beta;

            if (cfg.antenna_mode == AntennaMode::Uncorrelated)
            {
                cov.at(k, l) = beta * cmat::Identity(cfg.N, cfg.N);
                continue;
            }
            try
            {
                cov.at(k, l) = beta * laplace_ula_correlation(cfg.N, layout.nominal_angle(k, l), spread);
            }
            catch (const NumericError &e)
            {
                throw NumericError(std::string(e.what()) + " for (k=" + std::to_string(k) +
                                   ", l=" + std::to_string(l) + ")");
            }
        }
    }
    return cov;
}

} // namespace cfmimo
