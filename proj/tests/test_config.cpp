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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace nfbt;

TEST_CASE("empty text gives the defaults")
{
    const CliConfig c = parse_config("");
    CHECK(serialize_config(c) == serialize_config(CliConfig{}));
    const ExperimentSpec s = c.spec();
    CHECK(s.n_antennas == 256);
    CHECK(s.carrier_freq_hz == 30e9);
    CHECK(s.spacing_m == doctest::Approx(0.005));
    CHECK(s.schemes.size() == 6);
    CHECK(s.sweep_values == std::vector<double>{15, 25, 35});
    CHECK(s.angle.uniform);
    CHECK(s.range.kind == RangeDistribution::Kind::Fixed);
    CHECK(s.range.lo == 12.0);
    CHECK_FALSE(s.ref_gain_db.has_value());
}

TEST_CASE("values of every kind")
{
    const CliConfig c = parse_config(R"(
# experiment
n_antennas = 128
freq_ghz = 28.5        # trailing comment
schemes = prmse@5, farfield, twophase
n_candidates = 2
user_angle = -0.25
user_range_m = uniform:5:20
ref_gain_db = -60
snr_db = 20
noiseless = true
sweep_variable = range
sweep_values = 5, 10.5, 20
pattern_angles = 0, 0.5, -0.5
)");
    const ExperimentSpec s = c.spec();
    CHECK(s.n_antennas == 128);
    CHECK(s.carrier_freq_hz == doctest::Approx(28.5e9));
    REQUIRE(s.schemes.size() == 3);
    CHECK(s.schemes[0].k == 5);
    CHECK(s.schemes[1].scheme == Scheme::FarField);
    CHECK(s.schemes[2].k == 2); // follows n_candidates
    CHECK_FALSE(s.angle.uniform);
    CHECK(s.angle.value == -0.25);
    CHECK(s.range.kind == RangeDistribution::Kind::Uniform);
    CHECK(s.range.lo == 5.0);
    CHECK(s.range.hi == 20.0);
    CHECK(*s.ref_gain_db == -60.0);
    CHECK(*c.snr_db == 20.0);
    CHECK(c.noiseless);
    CHECK(s.sweep_variable == SweepVariable::Range);
    CHECK(c.pattern_angles == std::vector<double>{0, 0.5, -0.5});

    CHECK(parse_config("user_range_m = nearfield").spec().range.kind == RangeDistribution::Kind::NearField);
}

TEST_CASE("round trip reproduces the canonical form")
{
    const std::string text = "threads=4\nmaster_seed = 18446744073709551615\nscan_step = 2.5e-5\n"
                             "user_range_m = uniform:7.5:30\nschemes = asw\npattern_ranges_m = 8, 9.25\n"
                             "verbose = true\ncodebook_cache = cache/cb.bin\n";
    const CliConfig c = parse_config(text);
    const std::string canon = serialize_config(c);
    CHECK(serialize_config(parse_config(canon)) == canon);
    CHECK(canon.find("master_seed = 18446744073709551615\n") != std::string::npos);
    CHECK(canon.find("schemes = asw@3\n") != std::string::npos);
    CHECK(canon.find("user_range_m = uniform:7.5:30\n") != std::string::npos);
    CHECK(c.experiment.master_seed == 18446744073709551615ull);
    CHECK(c.scan_step == 2.5e-5);

    const CliConfig d = parse_config(serialize_config(CliConfig{}));
    CHECK(serialize_config(d) == serialize_config(CliConfig{}));
}

TEST_CASE("malformed configuration")
{
    CHECK_THROWS_AS(parse_config("bogus = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_trials = 1\nn_trials = 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_trials 5"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_trials = five"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_trials = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_trials = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("freq_ghz = 1e400"), ConfigError);
    CHECK_THROWS_AS(parse_config("noiseless = maybe"), ConfigError);
    CHECK_THROWS_AS(parse_config("schemes = farfield@2"), ConfigError);
    CHECK_THROWS_AS(parse_config("schemes = "), ConfigError);
    CHECK_THROWS_AS(parse_config("user_angle = 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("user_range_m = uniform:9:3"), ConfigError);
    CHECK_THROWS_AS(parse_config("user_range_m = uniform:9"), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep_variable = pressure"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_antennas = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("power_threshold = 1.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("threads = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("estimate_scheme = magic"), ConfigError);
}

TEST_CASE("load from file")
{
    const auto path = (std::filesystem::temp_directory_path() / "nfbt_test.cfg").string();
    {
        std::ofstream f(path);
        f << "n_trials = 7\n";
    }
    CHECK(load_config(path).experiment.n_trials == 7);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config(path), ConfigError);
}
