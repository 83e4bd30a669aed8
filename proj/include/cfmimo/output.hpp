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

#include <filesystem>
#include <string>
#include <vector>

#include "cfmimo/harness.hpp"

namespace cfmimo
{

// Decimal text with 9 significant digits.
std::string format_real(double v);

std::string se_samples_csv(const ExperimentResult &res);
std::string cdf_csv(const SEStats &stats);
std::string cost_csv(const std::vector<CostReport> &costs);
std::string summary_json(const ExperimentResult &res);
std::string sweep_csv(const std::vector<SweepRow> &rows);
// Wall-clock data only; kept out of the reproducible files.
std::string timing_json(const RunManifest &manifest);

std::string cdf_filename(Scheme s, bool uc);

// Writes se_samples.csv, cdf_<scheme>_<uc>.csv, cost.csv, summary.json and
// timing.json into dir (created when missing).
void write_experiment(const ExperimentResult &res, const std::filesystem::path &dir);
void write_text(const std::filesystem::path &file, const std::string &text);

} // namespace cfmimo
