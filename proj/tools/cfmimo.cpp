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

// Command-line front end: simulate, sweep, cost.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfmimo/harness.hpp"
#include "cfmimo/output.hpp"

using namespace cfmimo;

namespace
{

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::vector<Scheme> parse_schemes(const std::string &s)
{
    std::vector<Scheme> out;
    for (const auto &name : split(s, ','))
        out.push_back(parse_scheme(name));
    return out;
}

std::vector<bool> parse_uc(const std::string &s)
{
    std::vector<bool> out;
    for (const auto &v : split(s, ','))
    {
        if (v == "off")
            out.push_back(false);
        else if (v == "on")
            out.push_back(true);
        else
            throw std::invalid_argument("--uc expects on/off, got '" + v + "'");
    }
    return out;
}

// "a:step:b" or a comma list.
std::vector<double> parse_range(const std::string &s)
{
    const auto parts = split(s, ':');
    if (parts.size() == 3)
    {
        const double a = std::stod(parts[0]), step = std::stod(parts[1]), b = std::stod(parts[2]);
        if (step <= 0.0)
            throw std::invalid_argument("--dsnr step must be positive");
        std::vector<double> out;
        const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
        for (int i = 0; i <= n; ++i)
            out.push_back(a + i * step);
        return out;
    }
    std::vector<double> out;
    for (const auto &v : split(s, ','))
        out.push_back(std::stod(v));
    return out;
}

std::vector<std::optional<int>> parse_ld(const std::string &s)
{
    std::vector<std::optional<int>> out;
    for (const auto &v : split(s, ','))
        out.push_back(v == "inf" ? std::nullopt : std::optional<int>(std::stoi(v)));
    return out;
}

SystemConfig load(const std::string &path)
{
    return path.empty() ? SystemConfig{} : load_config(path);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Uplink spectral-efficiency simulator for cell-free massive MIMO radio stripes"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", schemes = "mrc,lmmse,nlmmse,qlmmse", uc = "off,on";
    std::optional<int> drops;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string nlmmse_variant = "per-user";

    auto add_common = [&](CLI::App *cmd)
    {
        cmd->add_option("--config", config_path, "config file (key = value)")->check(CLI::ExistingFile);
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--drops", drops, "number of user drops");
        cmd->add_option("--seed", seed, "master seed");
    };

    auto *sim = app.add_subcommand("simulate", "Monte Carlo SE run");
    add_common(sim);
    sim->add_option("--schemes", schemes, "comma list of mrc,lmmse,nlmmse,qlmmse");
    sim->add_option("--uc", uc, "comma list of on,off");
    sim->add_option("--threads", threads, "worker threads across drops")->check(CLI::PositiveNumber);
    sim->add_option("--nlmmse-variant", nlmmse_variant, "per-user or joint")
        ->check(CLI::IsMember({"per-user", "joint"}));

    std::string dsnr = "-10:5:10", ld = "54,216,696,inf";
    auto *sweep = app.add_subcommand("sweep", "mean SE over SNR offsets and data lengths");
    add_common(sweep);
    sweep->add_option("--dsnr", dsnr, "SNR offsets in dB, a:step:b or list");
    sweep->add_option("--ld", ld, "data block lengths, 'inf' for the converged statistic");
    sweep->add_option("--schemes", schemes, "comma list of schemes");
    sweep->add_option("--threads", threads, "worker threads across drops")->check(CLI::PositiveNumber);

    auto *cost = app.add_subcommand("cost", "fronthaul and complexity table");
    add_common(cost);
    cost->add_option("--uc", uc, "comma list of on,off");

    CLI11_PARSE(app, argc, argv);

    try
    {
        SystemConfig cfg = load(config_path);
        if (drops)
            cfg.drops = *drops;
        if (seed)
            cfg.seed = *seed;
        cfg.validate();

        ExperimentOptions opt;
        opt.schemes = parse_schemes(schemes);
        opt.threads = threads;
        opt.nlmmse_variant =
            nlmmse_variant == "joint" ? NlmmseVariant::JointStreams : NlmmseVariant::PerUserStream;

        if (*sim)
        {
            opt.uc_modes = parse_uc(uc);
            const ExperimentResult res = run_experiment(cfg, opt);
            write_experiment(res, out_dir);
            for (const auto &s : res.summaries)
                std::cout << scheme_name(s.scheme) << (s.uc ? "+uc" : "") << "  mean " << format_real(s.stats.mean)
                          << "  p10 " << format_real(s.stats.p10) << '\n';
            if (res.manifest.skipped_blocks > 0)
                std::cerr << "skipped blocks: " << res.manifest.skipped_blocks << '\n';
        }
        else if (*sweep)
        {
            const auto rows = sweep_snr_ld(cfg, parse_range(dsnr), parse_ld(ld), opt);
            std::filesystem::create_directories(out_dir);
            write_text(std::filesystem::path(out_dir) / "sweep.csv", sweep_csv(rows));
            std::cout << sweep_csv(rows);
        }
        else if (*cost)
        {
            const auto rows = cost_table(cfg, opt.schemes, parse_uc(uc));
            std::filesystem::create_directories(out_dir);
            write_text(std::filesystem::path(out_dir) / "cost.csv", cost_csv(rows));
            std::cout << cost_csv(rows);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
