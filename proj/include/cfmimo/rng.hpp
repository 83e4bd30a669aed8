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
#include <initializer_list>
#include <random>

#include "cfmimo/types.hpp"

namespace cfmimo
{

// Purposes of independent sub-streams inside one drop. Keeping them apart
// means, e.g., the channel of block b does not change when L_D changes.
enum class StreamPurpose : std::uint64_t
{
    Layout = 1,
    Channel = 2,
    PilotNoise = 3,
    Data = 4,
    DataNoise = 5,
};

// Counter-based derivation of sub-seeds: the seed of a stream is a pure
// function of (master seed, path). No state is shared between streams, so
// drops and blocks may be generated in any order or concurrently.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

class RngStream
{
public:
    explicit RngStream(std::uint64_t seed);

    static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        return RngStream(derive_seed(master, path));
    }

    std::uint64_t seed() const { return seed_; }

    double uniform(double lo = 0.0, double hi = 1.0);
    double normal();
    cdouble complex_normal(); // CN(0, 1)

    // Matrix of i.i.d. CN(0, variance) entries.
    cmat complex_normal(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

    std::mt19937_64 &engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace cfmimo
