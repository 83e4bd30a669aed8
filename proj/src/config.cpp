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

#include "cfmimo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cfmimo
{

std::string_view scheme_name(Scheme s)
{
    switch (s)
    {
    case Scheme::MRC:
        return "mrc";
    case Scheme::LMMSE:
        return "lmmse";
    case Scheme::NLMMSE:
        return "nlmmse";
    case Scheme::QLMMSE:
        return "qlmmse";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name)
{
    for (Scheme s : {Scheme::MRC, Scheme::LMMSE, Scheme::NLMMSE, Scheme::QLMMSE})
        if (scheme_name(s) == name)
            return s;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

std::string antenna_mode_name(AntennaMode m)
{
    return m == AntennaMode::Correlated ? "correlated" : "uncorrelated";
}

double SystemConfig::sigma2() const
{
    return std::pow(10.0, sigma2_dBm / 10.0);
}

double SystemConfig::power(int k) const
{
    return p.size() == 1 ? p.front() : p.at(static_cast<std::size_t>(k));
}

rvec SystemConfig::powers() const
{
    rvec out(K);
    for (int k = 0; k < K; ++k)
        out(k) = power(k);
    return out;
}

rvec SystemConfig::sqrt_powers() const
{
    return powers().cwiseSqrt();
}

void SystemConfig::validate() const
{
    auto fail = [](const std::string &field, const std::string &why)
    { throw std::invalid_argument("config field '" + field + "': " + why); };

    if (L < 1)
        fail("L", "must be >= 1");
    if (N < 1)
        fail("N", "must be >= 1");
    if (K < 1)
        fail("K", "must be >= 1");
    if (tau_p <= 0)
        fail("tau_p", "must be > 0");
    if (tau_c <= tau_p)
        fail("tau_c", "must exceed tau_p");
    if (tau_p < K)
        fail("tau_p", "must be >= K (pilot reuse is not supported)");
    if (p.empty() || (p.size() != 1 && p.size() != static_cast<std::size_t>(K)))
        fail("p", "needs 1 or K entries");
    for (double v : p)
        if (!(v >= 0.0) || !std::isfinite(v))
            fail("p", "powers must be finite and >= 0");
    if (!std::isfinite(sigma2_dBm))
        fail("sigma2_dBm", "must be finite");
    if (!(room_x > 0.0))
        fail("room_x", "must be > 0");
    if (!(room_y > 0.0))
        fail("room_y", "must be > 0");
    if (!(room_z > 0.0))
        fail("room_z", "must be > 0");
    if (!(stripe_height >= 0.0))
        fail("stripe_height", "must be >= 0");
    if (!(user_height >= 0.0))
        fail("user_height", "must be >= 0");
    if (!(angle_spread_deg >= 0.0))
        fail("angle_spread_deg", "must be >= 0");
    if (!(uc_fraction > 0.0 && uc_fraction <= 1.0))
        fail("uc_fraction", "must lie in (0, 1]");
    if (drops < 1)
        fail("drops", "must be >= 1");
    if (blocks_per_drop < 1)
        fail("blocks_per_drop", "must be >= 1");
}

namespace
{

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string &key, const std::string &text)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("config field '" + key + "': cannot parse '" + text + "'");
    return value;
}

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

SystemConfig parse_config(std::istream &in)
{
    SystemConfig cfg;

    using Setter = std::function<void(const std::string &, const std::string &)>;
    auto as_int = [](int &dst)
    { return Setter([&dst](const std::string &k, const std::string &v) { dst = parse_number<int>(k, v); }); };
    auto as_double = [](double &dst)
    { return Setter([&dst](const std::string &k, const std::string &v) { dst = parse_number<double>(k, v); }); };

    const std::map<std::string, Setter, std::less<>> setters = {
        {"L", as_int(cfg.L)},
        {"N", as_int(cfg.N)},
        {"K", as_int(cfg.K)},
        {"tau_c", as_int(cfg.tau_c)},
        {"tau_p", as_int(cfg.tau_p)},
        {"p", [&cfg](const std::string &k, const std::string &v)
         {
             cfg.p.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ','))
                 cfg.p.push_back(parse_number<double>(k, trim(item)));
         }},
        {"sigma2_dBm", as_double(cfg.sigma2_dBm)},
        {"room_x", as_double(cfg.room_x)},
        {"room_y", as_double(cfg.room_y)},
        {"room_z", as_double(cfg.room_z)},
        {"stripe_height", as_double(cfg.stripe_height)},
        {"user_height", as_double(cfg.user_height)},
        {"angle_spread_deg", as_double(cfg.angle_spread_deg)},
        {"uc_fraction", as_double(cfg.uc_fraction)},
        {"antenna_mode", [&cfg](const std::string &k, const std::string &v)
         {
             if (v == "correlated")
                 cfg.antenna_mode = AntennaMode::Correlated;
             else if (v == "uncorrelated")
                 cfg.antenna_mode = AntennaMode::Uncorrelated;
             else
                 throw std::invalid_argument("config field '" + k + "': expected correlated|uncorrelated");
         }},
        {"symbols", [&cfg](const std::string &k, const std::string &v)
         {
             if (v == "gaussian")
                 cfg.symbols = SymbolAlphabet::Gaussian;
             else if (v == "qpsk")
                 cfg.symbols = SymbolAlphabet::QPSK;
             else
                 throw std::invalid_argument("config field '" + k + "': expected gaussian|qpsk");
         }},
        {"seed", [&cfg](const std::string &k, const std::string &v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
        {"drops", as_int(cfg.drops)},
        {"blocks_per_drop", as_int(cfg.blocks_per_drop)},
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::string body = trim(line);
        if (body.empty())
            continue;

        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));

        auto it = setters.find(key);
        if (it == setters.end())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(key, value);
    }

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file " + path.string());
    return parse_config(in);
}

std::string format_config(const SystemConfig &cfg)
{
    std::ostringstream out;
    out << "L = " << cfg.L << '\n'
        << "N = " << cfg.N << '\n'
        << "K = " << cfg.K << '\n'
        << "tau_c = " << cfg.tau_c << '\n'
        << "tau_p = " << cfg.tau_p << '\n';
    out << "p = ";
    for (std::size_t i = 0; i < cfg.p.size(); ++i)
        out << (i ? "," : "") << fmt_double(cfg.p[i]);
    out << '\n'
        << "sigma2_dBm = " << fmt_double(cfg.sigma2_dBm) << '\n'
        << "room_x = " << fmt_double(cfg.room_x) << '\n'
        << "room_y = " << fmt_double(cfg.room_y) << '\n'
        << "room_z = " << fmt_double(cfg.room_z) << '\n'
        << "stripe_height = " << fmt_double(cfg.stripe_height) << '\n'
        << "user_height = " << fmt_double(cfg.user_height) << '\n'
        << "angle_spread_deg = " << fmt_double(cfg.angle_spread_deg) << '\n'
        << "uc_fraction = " << fmt_double(cfg.uc_fraction) << '\n'
        << "antenna_mode = " << antenna_mode_name(cfg.antenna_mode) << '\n'
        << "symbols = " << (cfg.symbols == SymbolAlphabet::QPSK ? "qpsk" : "gaussian") << '\n'
        << "seed = " << cfg.seed << '\n'
        << "drops = " << cfg.drops << '\n'
        << "blocks_per_drop = " << cfg.blocks_per_drop << '\n';
    return out.str();
}

} // namespace cfmimo
