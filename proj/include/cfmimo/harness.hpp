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
#include <optional>
#include <string>
#include <vector>

#include "cfmimo/combiners.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/cost.hpp"
#include "cfmimo/metrics.hpp"

namespace cfmimo
{

struct ExperimentOptions
{
    std::vector<Scheme> schemes = {Scheme::MRC, Scheme::LMMSE, Scheme::NLMMSE, Scheme::QLMMSE};
    std::vector<bool> uc_modes = {false, true};
    int threads = 1;
    NlmmseVariant nlmmse_variant = NlmmseVariant::PerUserStream;

    // Uniform transmit-power offset in dB (the SNR sweep knob).
    double power_offset_db = 0.0;
    // Q-LMMSE uses the converged statistic instead of C / L_D.
    bool exact_statistics = false;
    // Report SE without the (tau_c - tau_p) / tau_c pilot overhead factor.
    bool unit_prefactor = false;
};

/// One (drop, user, scheme, uc) record.
struct SampleRow
{
    int drop = 0;
    int user = 0;
    Scheme scheme = Scheme::MRC;
    bool uc = false;
    double sinr_mean = 0.0;
    double se = 0.0;
};

struct SchemeSummary
{
    Scheme scheme = Scheme::MRC;
    bool uc = false;
    SEStats stats;
};

struct RunManifest
{
    std::string version;
    std::string config_text;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> drop_seeds;
    int total_blocks = 0;
    int skipped_blocks = 0;
    int clamped_eigenvalues = 0;
    double wall_seconds = 0.0;
    std::vector<double> drop_seconds;
};

struct ExperimentResult
{
    SystemConfig cfg;
    ExperimentOptions options;
    std::vector<SampleRow> rows; // ordered by drop, scheme, uc, user
    std::vector<SchemeSummary> summaries;
    std::vector<CostReport> costs;
    RunManifest manifest;

    const SchemeSummary &summary(Scheme s, bool uc) const;
};

// Throws std::invalid_argument for an invalid config and std::runtime_error
// when more than 0.1% of the coherence blocks hit a numeric failure.
ExperimentResult run_experiment(const SystemConfig &cfg, const ExperimentOptions &options);

// Cost reports for every scheme without UC and with the UC sets of the
// configured drops (only the user placement is simulated).
std::vector<CostReport> cost_table(const SystemConfig &cfg, const std::vector<Scheme> &schemes,
                                   const std::vector<bool> &uc_modes);

/// Mean SE per (scheme, SNR offset, L_D). An empty `ld` means L_D -> infinity,
/// which is only reported for Q-LMMSE with the converged statistic.
struct SweepRow
{
    Scheme scheme = Scheme::MRC;
    double dsnr_db = 0.0;
    std::optional<int> ld;
    double mean_se = 0.0;
};

std::vector<SweepRow> sweep_snr_ld(const SystemConfig &cfg, const std::vector<double> &dsnr_db,
                                   const std::vector<std::optional<int>> &ld_list, ExperimentOptions options);

std::string version_string();

} // namespace cfmimo
