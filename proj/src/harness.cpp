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

#include "cfmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "cfmimo/channel.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/qlmmse.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"

#ifndef CFMIMO_VERSION
#define CFMIMO_VERSION "unknown"
#endif

namespace cfmimo
{

std::string version_string()
{
    return CFMIMO_VERSION;
}

const SchemeSummary &ExperimentResult::summary(Scheme s, bool uc) const
{
    for (const auto &sum : summaries)
        if (sum.scheme == s && sum.uc == uc)
            return sum;
    throw std::out_of_range("no summary for scheme " + std::string(scheme_name(s)) + (uc ? " with UC" : ""));
}

namespace
{

using Clock = std::chrono::steady_clock;

struct Combo
{
    Scheme scheme;
    bool uc;
};

struct DropResult
{
    // [combo][user] -> SINR per successful block
    std::vector<std::vector<std::vector<double>>> sinr;
    int skipped = 0;
    int clamped = 0;
    UCMask mask;
    double seconds = 0.0;
};

CombinerResult run_scheme(Scheme scheme, const ChannelEstimate &est, const ReceivedData &data, const ChannelBlock &ch,
                          const rvec &powers, double sigma2, const UCMask *mask, const ExperimentOptions &opt,
                          int &clamped)
{
    switch (scheme)
    {
    case Scheme::MRC:
        return mrc_combine(est, data, mask);
    case Scheme::LMMSE:
        return lmmse_receive(est, data, powers, sigma2, mask);
    case Scheme::NLMMSE:
        return nlmmse_receive(est, data, powers, sigma2, mask, opt.nlmmse_variant);
    case Scheme::QLMMSE:
    {
        const CombinerResult mrc = mrc_combine(est, data, mask);
        GramRecovery rec;
        if (opt.exact_statistics)
        {
            const rvec sqrt_p = powers.cwiseSqrt();
            const cmat A = asymptotic_mrc_statistic(mrc.V * sqrt_p.asDiagonal(), ch.H * sqrt_p.asDiagonal(), sigma2);
            CombinerResult out = qlmmse_detect(mrc, powers, sigma2, &A, &rec);
            clamped += rec.clamped;
            return out;
        }
        CombinerResult out = qlmmse_detect(mrc, powers, sigma2, nullptr, &rec);
        clamped += rec.clamped;
        return out;
    }
    }
    throw std::invalid_argument("unknown scheme");
}

DropResult simulate_drop(const SystemConfig &cfg, const ExperimentOptions &opt, const std::vector<Combo> &combos,
                         int drop)
{
    const auto t0 = Clock::now();
    const std::uint64_t seed = cfg.seed;
    const auto d = static_cast<std::uint64_t>(drop);

    DropResult out;
    out.sinr.assign(combos.size(), std::vector<std::vector<double>>(static_cast<std::size_t>(cfg.K)));

    RngStream layout_rng = RngStream::derive(seed, {d, static_cast<std::uint64_t>(StreamPurpose::Layout)});
    const Layout layout = place_layout(cfg, layout_rng);
    const CovarianceSet cov = build_covariances(cfg, layout);
    const CovarianceSqrt roots = covariance_sqrt(cov);
    out.mask = uc_select(cov, cfg.uc_fraction);
    const PilotBook pilots = make_orthogonal_pilots(cfg.tau_p, cfg.K);

    const rvec powers = cfg.powers();
    const double sigma2 = cfg.sigma2();

    for (int b = 0; b < cfg.blocks_per_drop; ++b)
    {
        const auto blk = static_cast<std::uint64_t>(b);
        auto stream = [&](StreamPurpose p)
        { return RngStream::derive(seed, {d, blk, static_cast<std::uint64_t>(p)}); };

        try
        {
            RngStream ch_rng = stream(StreamPurpose::Channel);
            RngStream pilot_rng = stream(StreamPurpose::PilotNoise);
            RngStream sym_rng = stream(StreamPurpose::Data);
            RngStream noise_rng = stream(StreamPurpose::DataNoise);

            const ChannelBlock ch = draw_channel(roots, ch_rng);
            const ReceivedPilot Z = transmit_pilots(cfg, ch, pilots, pilot_rng);
            const ReceivedData data = transmit_data(cfg, ch, sym_rng, noise_rng);
            const ChannelEstimate est = estimate_channels(cfg, cov, pilots, Z);

            std::vector<rvec> block_sinr;
            block_sinr.reserve(combos.size());
            for (const Combo &c : combos)
            {
                const UCMask *mask = c.uc ? &out.mask : nullptr;
                const CombinerResult r = run_scheme(c.scheme, est, data, ch, powers, sigma2, mask, opt, out.clamped);
                rvec s = instantaneous_sinr(r.V, ch.H, powers, sigma2);
                if (!s.allFinite())
                    throw NumericError("non-finite SINR");
                block_sinr.push_back(std::move(s));
            }
            for (std::size_t c = 0; c < combos.size(); ++c)
                for (int k = 0; k < cfg.K; ++k)
                    out.sinr[c][static_cast<std::size_t>(k)].push_back(block_sinr[c](k));
        }
        catch (const NumericError &)
        {
            ++out.skipped;
        }
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

SystemConfig apply_power_offset(SystemConfig cfg, double offset_db)
{
    if (offset_db != 0.0)
    {
        const double scale = std::pow(10.0, offset_db / 10.0);
        for (double &p : cfg.p)
            p *= scale;
    }
    return cfg;
}

template <typename Fn>
void parallel_for(int count, int threads, Fn &&fn)
{
    threads = std::clamp(threads, 1, std::max(count, 1));
    if (threads == 1)
    {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int t = 0; t < threads; ++t)
    {
        pool.emplace_back(
            [&]
            {
                for (int i = next++; i < count; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
    }
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

std::uint64_t rounded_mean(std::uint64_t sum, std::uint64_t n)
{
    return n == 0 ? 0 : (sum + n / 2) / n;
}

} // namespace

ExperimentResult run_experiment(const SystemConfig &base_cfg, const ExperimentOptions &options)
{
    base_cfg.validate();
    if (options.schemes.empty() || options.uc_modes.empty())
        throw std::invalid_argument("run_experiment: need at least one scheme and one UC mode");

    const auto t0 = Clock::now();
    const SystemConfig cfg = apply_power_offset(base_cfg, options.power_offset_db);

    std::vector<Combo> combos;
    for (Scheme s : options.schemes)
        for (bool uc : options.uc_modes)
            combos.push_back({s, uc});

    std::vector<DropResult> drops(static_cast<std::size_t>(cfg.drops));
    parallel_for(cfg.drops, options.threads,
                 [&](int d) { drops[static_cast<std::size_t>(d)] = simulate_drop(cfg, options, combos, d); });

    ExperimentResult res;
    res.cfg = base_cfg;
    res.options = options;
    res.manifest.version = version_string();
    res.manifest.config_text = format_config(base_cfg);
    res.manifest.master_seed = cfg.seed;
    res.manifest.total_blocks = cfg.drops * cfg.blocks_per_drop;

    const int tau_c = options.unit_prefactor ? 1 : cfg.tau_c;
    const int tau_p = options.unit_prefactor ? 0 : cfg.tau_p;

    std::vector<SEStats> stats(combos.size());
    for (int d = 0; d < cfg.drops; ++d)
    {
        const DropResult &dr = drops[static_cast<std::size_t>(d)];
        res.manifest.drop_seeds.push_back(
            derive_seed(cfg.seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(StreamPurpose::Layout)}));
        res.manifest.drop_seconds.push_back(dr.seconds);
        res.manifest.skipped_blocks += dr.skipped;
        res.manifest.clamped_eigenvalues += dr.clamped;

        if (dr.skipped == cfg.blocks_per_drop)
            continue;
        for (std::size_t c = 0; c < combos.size(); ++c)
        {
            for (int k = 0; k < cfg.K; ++k)
            {
                const auto &samples = dr.sinr[c][static_cast<std::size_t>(k)];
                SampleRow row;
                row.drop = d;
                row.user = k;
                row.scheme = combos[c].scheme;
                row.uc = combos[c].uc;
                double acc = 0.0;
                for (double s : samples)
                    acc += s;
                row.sinr_mean = acc / static_cast<double>(samples.size());
                row.se = spectral_efficiency(samples, tau_c, tau_p);
                stats[c].per_user_se.push_back(row.se);
                res.rows.push_back(row);
            }
        }
    }

    if (res.manifest.skipped_blocks * 1000 > res.manifest.total_blocks)
        throw std::runtime_error("run_experiment: " + std::to_string(res.manifest.skipped_blocks) + " of " +
                                 std::to_string(res.manifest.total_blocks) +
                                 " coherence blocks failed numerically (limit 0.1%)");

    for (std::size_t c = 0; c < combos.size(); ++c)
    {
        stats[c].refresh_summary();
        res.summaries.push_back({combos[c].scheme, combos[c].uc, std::move(stats[c])});
    }

    // Costs: UC counts averaged over the simulated serving sets.
    for (Scheme s : options.schemes)
    {
        for (bool uc : options.uc_modes)
        {
            if (!uc)
            {
                res.costs.push_back(complexity_counts(s, cfg, nullptr));
                continue;
            }
            std::uint64_t par = 0, ser = 0;
            CostReport r;
            for (const DropResult &dr : drops)
            {
                r = complexity_counts(s, cfg, &dr.mask);
                par += r.c_parallel;
                ser += r.c_serial;
            }
            r.c_parallel = rounded_mean(par, drops.size());
            r.c_serial = rounded_mean(ser, drops.size());
            r.c_total = static_cast<std::uint64_t>(cfg.L) * r.c_serial + r.c_parallel;
            res.costs.push_back(r);
        }
    }

    res.manifest.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

std::vector<CostReport> cost_table(const SystemConfig &cfg, const std::vector<Scheme> &schemes,
                                   const std::vector<bool> &uc_modes)
{
    cfg.validate();
    std::vector<UCMask> masks;
    for (int d = 0; d < cfg.drops; ++d)
    {
        RngStream rng = RngStream::derive(cfg.seed, {static_cast<std::uint64_t>(d),
                                                     static_cast<std::uint64_t>(StreamPurpose::Layout)});
        const Layout layout = place_layout(cfg, rng);
        rmat beta(cfg.K, cfg.L);
        for (int k = 0; k < cfg.K; ++k)
            for (int l = 0; l < cfg.L; ++l)
                beta(k, l) = large_scale_gain(std::max(kMinDistance, distance(layout.user_positions[static_cast<std::size_t>(k)],
                                                                              layout.ap_positions[static_cast<std::size_t>(l)])));
        masks.push_back(uc_select(beta, cfg.uc_fraction));
    }

    std::vector<CostReport> out;
    for (Scheme s : schemes)
    {
        for (bool uc : uc_modes)
        {
            if (!uc)
            {
                out.push_back(complexity_counts(s, cfg, nullptr));
                continue;
            }
            std::uint64_t par = 0, ser = 0;
            CostReport r;
            for (const UCMask &m : masks)
            {
                r = complexity_counts(s, cfg, &m);
                par += r.c_parallel;
                ser += r.c_serial;
            }
            r.c_parallel = rounded_mean(par, masks.size());
            r.c_serial = rounded_mean(ser, masks.size());
            r.c_total = static_cast<std::uint64_t>(cfg.L) * r.c_serial + r.c_parallel;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<SweepRow> sweep_snr_ld(const SystemConfig &cfg, const std::vector<double> &dsnr_db,
                                   const std::vector<std::optional<int>> &ld_list, ExperimentOptions options)
{
    std::vector<SweepRow> out;
    for (double dsnr : dsnr_db)
    {
        for (const auto &ld : ld_list)
        {
            ExperimentOptions opt = options;
            opt.power_offset_db = dsnr;
            opt.uc_modes = {false};
            SystemConfig c = cfg;
            if (ld)
            {
                if (*ld < 1)
                    throw std::invalid_argument("sweep: L_D must be >= 1");
                c.tau_c = c.tau_p + *ld;
            }
            else
            {
                // converged statistic: the data block length no longer matters
                if (std::find(opt.schemes.begin(), opt.schemes.end(), Scheme::QLMMSE) == opt.schemes.end())
                    continue;
                opt.schemes = {Scheme::QLMMSE};
                opt.exact_statistics = true;
                opt.unit_prefactor = true;
                c.tau_c = c.tau_p + 1;
            }
            const ExperimentResult r = run_experiment(c, opt);
            for (Scheme s : opt.schemes)
                out.push_back({s, dsnr, ld, r.summary(s, false).stats.mean});
        }
    }
    return out;
}

} // namespace cfmimo
