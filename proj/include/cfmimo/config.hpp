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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo
{

enum class AntennaMode
{
    Correlated,
    Uncorrelated
};

enum class SymbolAlphabet
{
    Gaussian,
    QPSK
};

/// Scalar parameters of one simulation setup. Powers are in mW, lengths in m.
///
/// The default values reproduce the dense-room deployment: a 200 x 200 x 5 m
/// room, 24 APs with 4 antennas each on an 800 m stripe, 24 users with
/// orthogonal pilots, 50 mW per user and -92 dBm noise.
struct SystemConfig
{
    int L = 24;
    int N = 4;
    int K = 24;
    int tau_c = 720;
    int tau_p = 24;

    // Per-user transmit power. A single entry is broadcast to all K users.
    std::vector<double> p = {50.0};
    double sigma2_dBm = -92.0;

    double room_x = 200.0;
    double room_y = 200.0;
    double room_z = 5.0;
    double stripe_height = 5.0;
    double user_height = 1.5;

    double angle_spread_deg = 15.0;
    double uc_fraction = 0.25;
    AntennaMode antenna_mode = AntennaMode::Correlated;
    SymbolAlphabet symbols = SymbolAlphabet::Gaussian;

    std::uint64_t seed = 1;
    int drops = 50;
    int blocks_per_drop = 1;

    int M() const { return N * L; }
    int L_D() const { return tau_c - tau_p; }
    double sigma2() const;          // linear noise power (mW)
    double power(int k) const;      // transmit power of user k (mW)
    rvec powers() const;            // all K powers
    rvec sqrt_powers() const;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

std::string antenna_mode_name(AntennaMode m);

// Flat "key = value" text. Keys match the SystemConfig field names; '#' starts
// a comment. Unknown keys and malformed values are rejected with the key name.
SystemConfig parse_config(std::istream &in);
SystemConfig load_config(const std::filesystem::path &path);
std::string format_config(const SystemConfig &cfg);

} // namespace cfmimo
