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

#include "nfbt/codebook.hpp"
#include "nfbt/config.hpp"

#include <doctest.h>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace
{
    struct Run
    {
        int code;
        std::string out;
    };

    Run run(const std::string &args, const std::string &env = "env -u NFBT_SEED")
    {
        const std::string cmd = env + " " + std::string(NFBT_CLI_PATH) + " " + args + " 2>/dev/null";
        FILE *p = popen(cmd.c_str(), "r");
        REQUIRE(p != nullptr);
        std::string out;
        char buf[4096];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, p)) > 0)
            out.append(buf, n);
        const int status = pclose(p);
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
    }

    fs::path scratch(const std::string &name)
    {
        const fs::path dir = fs::temp_directory_path() / ("nfbt_cli_" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    std::string write_cfg(const fs::path &dir, const std::string &text)
    {
        const fs::path p = dir / "run.cfg";
        std::ofstream(p) << text;
        return p.string();
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    std::size_t lines(const std::string &s) { return std::size_t(std::count(s.begin(), s.end(), '\n')); }
} // namespace

TEST_CASE("estimate reports an on-grid user exactly without noise")
{
    const fs::path dir = scratch("estimate");
    const std::string cfg = write_cfg(dir, "user_angle = 0.50390625\nuser_range_m = 11.998388491530589\n"
                                           "noiseless = true\nn_nlos = 0\n");
    const Run r = run("estimate -c " + cfg);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["scheme"] == "prmse-k3");
    CHECK(j["theta_hat"].get<double>() == 0.50390625);
    CHECK(j["r_hat"].get<double>() == doctest::Approx(11.998388491530589).epsilon(1e-12));
    CHECK(j["n_training_symbols"] == 259);
    CHECK(j["candidates"].size() == 3);
    CHECK(j["seed"] == 1);

    CHECK(run("estimate -c " + cfg).out == r.out);
    CHECK(nlohmann::json::parse(run("estimate --seed 99 -c " + cfg).out)["seed"] == 99);
    CHECK(nlohmann::json::parse(run("estimate -c " + cfg + " --seed 5").out)["seed"] == 5);
}

TEST_CASE("seed from the environment sits between flag and config")
{
    const fs::path dir = scratch("seed");
    const std::string cfg = write_cfg(dir, "user_angle = 0.1\nuser_range_m = 10\nmaster_seed = 3\n");
    CHECK(nlohmann::json::parse(run("estimate -c " + cfg).out)["seed"] == 3);
    CHECK(nlohmann::json::parse(run("estimate -c " + cfg, "env NFBT_SEED=77").out)["seed"] == 77);
    CHECK(nlohmann::json::parse(run("estimate -c " + cfg + " --seed 8", "env NFBT_SEED=77").out)["seed"] == 8);
    CHECK(run("estimate -c " + cfg, "env NFBT_SEED=abc").code == 2);
}

TEST_CASE("configuration errors exit with 2")
{
    const fs::path dir = scratch("errors");
    CHECK(run("estimate -c " + write_cfg(dir, "estimate_scheme = nonsense\nuser_angle = 0\n")).code == 2);
    CHECK(run("estimate -c " + write_cfg(dir, "user_range_m = 10\n")).code == 2); // uniform angle
    CHECK(run("pattern -c " + write_cfg(dir, "pattern_ranges_m =\n")).code == 2);
    CHECK(run("mc -c " + (dir / "missing.cfg").string()).code == 2);
    CHECK(run("mc -c " + write_cfg(dir, "unknown_key = 1\n")).code == 2);
    CHECK(run("mc --threads 0").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("pattern writes one width curve per angle")
{
    const fs::path dir = scratch("pattern");
    const std::string cfg =
        write_cfg(dir, "pattern_angles = 0, 0.5, -0.5\npattern_ranges_m = 8, 15, 30, 60\nscan_step = 1e-3\n");
    const Run r = run("pattern -c " + cfg + " -o " + (dir / "a").string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::string widths = slurp(dir / "a" / "widths.csv");
    CHECK(lines(widths) == 1 + 3 * 4);
    CHECK(lines(slurp(dir / "a" / "pattern.csv")) == 1 + 3 * 4 * 2001);
    REQUIRE(run("pattern -c " + cfg + " -o " + (dir / "b").string()).code == 0);
    CHECK(slurp(dir / "b" / "widths.csv") == widths);
    CHECK(slurp(dir / "b" / "pattern.csv") == slurp(dir / "a" / "pattern.csv"));
}

TEST_CASE("mc smoke run")
{
    const fs::path dir = scratch("mc");
    const std::string cfg = write_cfg(dir, "n_trials = 1\n");
    const auto t0 = std::chrono::steady_clock::now();
    const Run r = run("mc -c " + cfg + " -o " + dir.string());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(secs < 10.0);
    CHECK(lines(slurp(dir / "trials.csv")) == 1 + 3 * 6);
    CHECK(lines(slurp(dir / "summary.csv")) == 1 + 3 * 6);
}

TEST_CASE("mc rejects a frame shorter than the exhaustive sweep")
{
    const fs::path dir = scratch("infeasible");
    CHECK(run("mc -c " + write_cfg(dir, "t_total_symbols = 100\nschemes = exhaustive\n") + " -o " + dir.string())
              .code == 3);
    CHECK_FALSE(fs::exists(dir / "trials.csv"));
}

TEST_CASE("codebook cache files decode")
{
    const fs::path dir = scratch("cache");
    const std::string cfg = write_cfg(dir, "n_antennas = 32\nn_ranges = 3\n");
    REQUIRE(run("codebook-cache -c " + cfg + " -o " + dir.string()).code == 0);
    const nfbt::Codebook dft = nfbt::read_codebook_cache((dir / "codebooks.bin.dft").string());
    const nfbt::Codebook polar = nfbt::read_codebook_cache((dir / "codebooks.bin.polar").string());
    CHECK(dft.size() == 32);
    CHECK(polar.size() == 96);
    CHECK(polar.n_ranges == 3);
}
