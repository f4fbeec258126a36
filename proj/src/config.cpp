// SPDX-License-Identifier: Apache-2.0
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

#include "nfbt/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace nfbt
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        [[noreturn]] void fail(std::string_view key, std::string_view value, std::string_view what)
        {
            throw ConfigError(std::string(key) + " = '" + std::string(value) + "': " + std::string(what));
        }

        double to_double(std::string_view key, std::string_view v)
        {
            double out = 0.0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
                fail(key, v, "expected a finite number");
            return out;
        }

        template <typename Int>
        Int to_int(std::string_view key, std::string_view v)
        {
            Int out = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || ptr != v.data() + v.size())
                fail(key, v, "expected a non-negative integer");
            return out;
        }

        bool to_bool(std::string_view key, std::string_view v)
        {
            if (v == "true")
                return true;
            if (v == "false")
                return false;
            fail(key, v, "expected true or false");
        }

        std::vector<std::string_view> split_on(std::string_view v, char sep)
        {
            std::vector<std::string_view> out;
            while (true)
            {
                const auto pos = v.find(sep);
                out.push_back(trim(v.substr(0, pos)));
                if (pos == std::string_view::npos)
                    break;
                v.remove_prefix(pos + 1);
            }
            return out;
        }

        std::vector<double> to_list(std::string_view key, std::string_view v)
        {
            std::vector<double> out;
            if (v.empty())
                return out;
            for (std::string_view item : split_on(v, ','))
                out.push_back(to_double(key, item));
            return out;
        }

        std::string join(const std::vector<double> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? "," : "") + format_number(v[i]);
            return out;
        }

        std::string scheme_token(const SchemeSpec &s)
        {
            std::string out(scheme_name(s.scheme));
            if (s.scheme == Scheme::AswJe || s.scheme == Scheme::PrmseJe || s.scheme == Scheme::TwoPhase)
                out += "@" + std::to_string(s.k);
            return out;
        }

        struct ParseState
        {
            std::optional<std::string> schemes; // resolved after n_candidates is known
        };

        struct Key
        {
            std::string_view name;
            std::function<void(CliConfig &, ParseState &, std::string_view)> set;
            std::function<std::string(const CliConfig &)> get;
        };

        // Table order is the canonical serialization order.
        const std::vector<Key> &keys()
        {
            static const std::vector<Key> table = [] {
                std::vector<Key> t;
                const auto num = [&t](std::string_view name, auto field) {
                    t.push_back({name, [name, field](CliConfig &c, ParseState &, std::string_view v) { field(c) = to_double(name, v); },
                                 [field](const CliConfig &c) { return format_number(field(c)); }});
                };
                const auto count = [&t](std::string_view name, auto field) {
                    t.push_back({name,
                                 [name, field](CliConfig &c, ParseState &, std::string_view v) {
                                     field(c) = to_int<std::size_t>(name, v);
                                 },
                                 [field](const CliConfig &c) {
                                     return std::to_string(field(c));
                                 }});
                };
                const auto flag = [&t](std::string_view name, auto field) {
                    t.push_back({name, [name, field](CliConfig &c, ParseState &, std::string_view v) { field(c) = to_bool(name, v); },
                                 [field](const CliConfig &c) {
                                     return std::string(field(c) ? "true" : "false");
                                 }});
                };
                const auto list = [&t](std::string_view name, auto field) {
                    t.push_back({name, [name, field](CliConfig &c, ParseState &, std::string_view v) { field(c) = to_list(name, v); },
                                 [field](const CliConfig &c) { return join(field(c)); }});
                };

                count("n_antennas", [](auto &c) -> auto & { return c.experiment.n_antennas; });
                num("freq_ghz", [](auto &c) -> auto & { return c.freq_ghz; });
                num("spacing_wavelengths", [](auto &c) -> auto & { return c.spacing_wavelengths; });
                num("tx_power_dbm", [](auto &c) -> auto & { return c.experiment.tx_power_dbm; });
                num("noise_dbm", [](auto &c) -> auto & { return c.experiment.noise_dbm; });
                t.push_back({"ref_gain_db",
                             [](CliConfig &c, ParseState &, std::string_view v) {
                                 if (v == "auto")
                                     c.experiment.ref_gain_db.reset();
                                 else
                                     c.experiment.ref_gain_db = to_double("ref_gain_db", v);
                             },
                             [](const CliConfig &c) {
                                 return c.experiment.ref_gain_db ? format_number(*c.experiment.ref_gain_db)
                                                                 : std::string("auto");
                             }});
                num("rician_db", [](auto &c) -> auto & { return c.experiment.rician_db; });
                count("n_nlos", [](auto &c) -> auto & { return c.experiment.n_nlos; });
                num("beta_delta", [](auto &c) -> auto & { return c.experiment.training.polar.beta_delta; });
                count("n_ranges", [](auto &c) -> auto & { return c.experiment.training.polar.n_ranges; });
                count("n_candidates", [](auto &c) -> auto & { return c.experiment.training.n_candidates; });
                num("power_threshold", [](auto &c) -> auto & { return c.experiment.training.power_threshold; });
                count("support_max_gap",
                      [](auto &c) -> auto & { return c.experiment.training.support_max_gap; });
                num("range_step_m", [](auto &c) -> auto & { return c.experiment.training.range_step; });
                count("t_total_symbols", [](auto &c) -> auto & { return c.experiment.t_total; });
                count("n_trials", [](auto &c) -> auto & { return c.experiment.n_trials; });
                t.push_back({"master_seed",
                             [](CliConfig &c, ParseState &, std::string_view v) {
                                 c.experiment.master_seed = to_int<std::uint64_t>("master_seed", v);
                             },
                             [](const CliConfig &c) { return std::to_string(c.experiment.master_seed); }});
                t.push_back({"schemes", [](CliConfig &, ParseState &st, std::string_view v) { st.schemes = std::string(v); },
                             [](const CliConfig &c) {
                                 std::string out;
                                 for (std::size_t i = 0; i < c.experiment.schemes.size(); ++i)
                                     out += (i ? "," : "") + scheme_token(c.experiment.schemes[i]);
                                 return out;
                             }});
                t.push_back({"sweep_variable",
                             [](CliConfig &c, ParseState &, std::string_view v) {
                                 try
                                 {
                                     c.experiment.sweep_variable = parse_sweep_variable(v);
                                 }
                                 catch (const InvalidArgument &e)
                                 {
                                     fail("sweep_variable", v, e.what());
                                 }
                             },
                             [](const CliConfig &c) {
                                 return std::string(sweep_variable_name(c.experiment.sweep_variable));
                             }});
                list("sweep_values", [](auto &c) -> auto & { return c.experiment.sweep_values; });
                t.push_back({"user_angle",
                             [](CliConfig &c, ParseState &, std::string_view v) {
                                 if (v == "uniform")
                                     c.experiment.angle = {true, 0.0};
                                 else
                                     c.experiment.angle = {false, to_double("user_angle", v)};
                             },
                             [](const CliConfig &c) {
                                 return c.experiment.angle.uniform ? std::string("uniform")
                                                                   : format_number(c.experiment.angle.value);
                             }});
                t.push_back({"user_range_m",
                             [](CliConfig &c, ParseState &, std::string_view v) {
                                 using K = RangeDistribution::Kind;
                                 if (v == "nearfield")
                                     c.experiment.range = {K::NearField, 0.0, 0.0};
                                 else if (v.substr(0, 8) == "uniform:")
                                 {
                                     const auto parts = split_on(v.substr(8), ':');
                                     if (parts.size() != 2)
                                         fail("user_range_m", v, "expected uniform:LO:HI");
                                     c.experiment.range = {K::Uniform, to_double("user_range_m", parts[0]),
                                                           to_double("user_range_m", parts[1])};
                                 }
                                 else
                                 {
                                     const double r = to_double("user_range_m", v);
                                     c.experiment.range = {K::Fixed, r, r};
                                 }
                             },
                             [](const CliConfig &c) {
                                 using K = RangeDistribution::Kind;
                                 const RangeDistribution &r = c.experiment.range;
                                 if (r.kind == K::NearField)
                                     return std::string("nearfield");
                                 if (r.kind == K::Uniform)
                                     return "uniform:" + format_number(r.lo) + ":" + format_number(r.hi);
                                 return format_number(r.lo);
                             }});
                t.push_back({"estimate_scheme",
                             [](CliConfig &c, ParseState &, std::string_view v) { c.estimate_scheme = std::string(v); },
                             [](const CliConfig &c) { return c.estimate_scheme; }});
                flag("noiseless", [](auto &c) -> auto & { return c.noiseless; });
                t.push_back({"snr_db",
                             [](CliConfig &c, ParseState &, std::string_view v) {
                                 if (v == "none")
                                     c.snr_db.reset();
                                 else
                                     c.snr_db = to_double("snr_db", v);
                             },
                             [](const CliConfig &c) { return c.snr_db ? format_number(*c.snr_db) : std::string("none"); }});
                list("pattern_angles", [](auto &c) -> auto & { return c.pattern_angles; });
                list("pattern_ranges_m", [](auto &c) -> auto & { return c.pattern_ranges_m; });
                num("scan_step", [](auto &c) -> auto & { return c.scan_step; });
                count("threads", [](auto &c) -> auto & { return c.threads; });
                flag("verbose", [](auto &c) -> auto & { return c.verbose; });
                t.push_back({"codebook_cache",
                             [](CliConfig &c, ParseState &, std::string_view v) { c.codebook_cache = std::string(v); },
                             [](const CliConfig &c) { return c.codebook_cache; }});
                return t;
            }();
            return table;
        }

        std::vector<SchemeSpec> resolve_schemes(std::string_view text, std::size_t default_k)
        {
            std::vector<SchemeSpec> out;
            if (trim(text).empty())
                return out;
            for (std::string_view token : split_on(text, ','))
            {
                try
                {
                    out.push_back(parse_scheme_spec(token, default_k));
                }
                catch (const InvalidArgument &e)
                {
                    fail("schemes", text, e.what());
                }
            }
            return out;
        }
    } // namespace

    CliConfig::CliConfig()
    {
        experiment.sweep_values = {15.0, 25.0, 35.0};
        experiment.range = {RangeDistribution::Kind::Fixed, 12.0, 12.0};
        experiment.schemes = resolve_schemes("asw,prmse,exhaustive,twophase,farfield,perfect",
                                             experiment.training.n_candidates);
    }

    ExperimentSpec CliConfig::spec() const
    {
        ExperimentSpec s = experiment;
        s.carrier_freq_hz = freq_ghz * 1e9;
        s.spacing_m = spacing_wavelengths * speed_of_light / s.carrier_freq_hz;
        return s;
    }

    void CliConfig::validate() const
    {
        try
        {
            require(freq_ghz > 0.0, "freq_ghz must be > 0");
            require(spacing_wavelengths > 0.0, "spacing_wavelengths must be > 0");
            require(scan_step > 0.0, "scan_step must be > 0");
            require(threads >= 1, "threads must be >= 1");
            require(!codebook_cache.empty(), "codebook_cache must not be empty");
            parse_scheme_spec(estimate_scheme, experiment.training.n_candidates);
            for (double a : pattern_angles)
                require(a >= -1.0 && a <= 1.0, "pattern_angles must lie in [-1, 1]");
            for (double r : pattern_ranges_m)
                require(r > 0.0, "pattern_ranges_m must be > 0");
            spec().validate();
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError(e.what());
        }
    }

    CliConfig parse_config(std::string_view text)
    {
        CliConfig cfg;
        ParseState state;
        const std::vector<Key> &table = keys();
        std::set<std::string, std::less<>> seen;

        std::size_t line_no = 0;
        while (!text.empty())
        {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;

            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = trim(line.substr(eq + 1));
            const auto it = std::find_if(table.begin(), table.end(), [&](const Key &k) { return k.name == key; });
            if (it == table.end())
                throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
            if (!seen.emplace(key).second)
                throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'");
            it->set(cfg, state, value);
        }

        if (state.schemes)
            cfg.experiment.schemes = resolve_schemes(*state.schemes, cfg.experiment.training.n_candidates);
        else
            cfg.experiment.schemes = resolve_schemes("asw,prmse,exhaustive,twophase,farfield,perfect",
                                                     cfg.experiment.training.n_candidates);
        cfg.validate();
        return cfg;
    }

    CliConfig load_config(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << f.rdbuf();
        return parse_config(buf.str());
    }

    std::string serialize_config(const CliConfig &cfg)
    {
        std::string out;
        for (const Key &k : keys())
            out += std::string(k.name) + " = " + k.get(cfg) + "\n";
        return out;
    }
} // namespace nfbt
