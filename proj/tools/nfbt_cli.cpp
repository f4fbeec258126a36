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

#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 2,
        exit_infeasible = 3,
        exit_internal = 4,
    };

    std::uint64_t parse_seed_env(const char *text)
    {
        const std::string_view s(text);
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size() || s.empty())
            throw nfbt::ConfigError("NFBT_SEED must be an unsigned 64-bit integer, got '" + std::string(s) + "'");
        return v;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Near-field beam training with a far-field DFT codebook"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;

    using Command = int (*)(const nfbt::cli::Invocation &, std::ostream &, std::ostream &);
    Command selected = nullptr;

    const auto add_command = [&](const char *name, const char *help, Command fn) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "Configuration file (key = value)");
        sub->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Master seed; overrides NFBT_SEED and the config");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->callback([&selected, fn] { selected = fn; });
    };
    add_command("pattern", "Beam pattern and angular-support width curves", nfbt::cli::cmd_pattern);
    add_command("estimate", "Single beam-training run, JSON report on stdout", nfbt::cli::cmd_estimate);
    add_command("mc", "Monte Carlo experiment, per-trial and summary CSV", nfbt::cli::cmd_mc);
    add_command("codebook-cache", "Write DFT and polar codebook caches", nfbt::cli::cmd_codebook_cache);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try
    {
        nfbt::cli::Invocation inv;
        if (!config_path.empty())
            inv.config = nfbt::load_config(config_path);
        if (seed)
            inv.config.experiment.master_seed = *seed;
        else if (const char *env = std::getenv("NFBT_SEED"))
            inv.config.experiment.master_seed = parse_seed_env(env);
        if (threads)
            inv.config.threads = *threads;
        inv.config.validate();
        inv.out_dir = out_dir;
        return selected(inv, std::cout, std::cerr);
    }
    catch (const nfbt::InfeasibleExperiment &e)
    {
        std::cerr << "nfbt: infeasible experiment: " << e.what() << '\n';
        return exit_infeasible;
    }
    catch (const nfbt::InvalidArgument &e)
    {
        std::cerr << "nfbt: configuration error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "nfbt: internal error: " << e.what() << '\n';
        return exit_internal;
    }
}
