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

#include "cfmimo/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cfmimo
{

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace
{

const char *uc_tag(bool uc)
{
    return uc ? "on" : "off";
}

} // namespace

std::string cdf_filename(Scheme s, bool uc)
{
    return "cdf_" + std::string(scheme_name(s)) + "_" + uc_tag(uc) + ".csv";
}

std::string se_samples_csv(const ExperimentResult &res)
{
    std::ostringstream os;
    os << "drop,user,scheme,uc,sinr_mean,se\n";
    for (const SampleRow &r : res.rows)
        os << r.drop << ',' << r.user << ',' << scheme_name(r.scheme) << ',' << uc_tag(r.uc) << ','
           << format_real(r.sinr_mean) << ',' << format_real(r.se) << '\n';
    return os.str();
}

std::string cdf_csv(const SEStats &stats)
{
    std::ostringstream os;
    os << "se,prob\n";
    for (const auto &[v, p] : cdf_table(stats))
        os << format_real(v) << ',' << format_real(p) << '\n';
    return os.str();
}

std::string cost_csv(const std::vector<CostReport> &costs)
{
    std::ostringstream os;
    os << "scheme,uc,fronthaul_reals,c_serial,c_parallel,c_total,cpu_mults\n";
    for (const CostReport &c : costs)
        os << scheme_name(c.scheme) << ',' << uc_tag(c.uc) << ',' << c.fronthaul_reals << ',' << c.c_serial << ','
           << c.c_parallel << ',' << c.c_total << ',' << c.cpu_mults << '\n';
    return os.str();
}

std::string summary_json(const ExperimentResult &res)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["version"] = res.manifest.version;
    j["master_seed"] = res.manifest.master_seed;
    j["config"] = res.manifest.config_text;
    j["drop_seeds"] = res.manifest.drop_seeds;
    j["total_blocks"] = res.manifest.total_blocks;
    j["skipped_blocks"] = res.manifest.skipped_blocks;
    j["clamped_eigenvalues"] = res.manifest.clamped_eigenvalues;
    ordered_json schemes = ordered_json::array();
    for (const SchemeSummary &s : res.summaries)
    {
        ordered_json e;
        e["scheme"] = scheme_name(s.scheme);
        e["uc"] = uc_tag(s.uc);
        e["samples"] = s.stats.per_user_se.size();
        // strings keep the 9-digit rendering used by the CSVs
        e["mean_se"] = format_real(s.stats.mean);
        e["p10_se"] = format_real(s.stats.p10);
        schemes.push_back(std::move(e));
    }
    j["schemes"] = std::move(schemes);
    return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow> &rows)
{
    std::ostringstream os;
    os << "scheme,dsnr_db,ld,mean_se\n";
    for (const SweepRow &r : rows)
        os << scheme_name(r.scheme) << ',' << format_real(r.dsnr_db) << ','
           << (r.ld ? std::to_string(*r.ld) : std::string("inf")) << ',' << format_real(r.mean_se) << '\n';
    return os.str();
}

std::string timing_json(const RunManifest &manifest)
{
    nlohmann::ordered_json j;
    j["wall_seconds"] = manifest.wall_seconds;
    j["drop_seconds"] = manifest.drop_seconds;
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path &file, const std::string &text)
{
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << text;
    if (!out)
        throw std::runtime_error("write failed: " + file.string());
}

void write_experiment(const ExperimentResult &res, const std::filesystem::path &dir)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "se_samples.csv", se_samples_csv(res));
    for (const SchemeSummary &s : res.summaries)
        write_text(dir / cdf_filename(s.scheme, s.uc), cdf_csv(s.stats));
    write_text(dir / "cost.csv", cost_csv(res.costs));
    write_text(dir / "summary.json", summary_json(res));
    write_text(dir / "timing.json", timing_json(res.manifest));
}

} // namespace cfmimo
