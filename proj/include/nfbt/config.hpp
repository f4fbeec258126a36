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

#ifndef NFBT_CONFIG_HPP
#define NFBT_CONFIG_HPP

#include "nfbt/experiment.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nfbt
{
    // Malformed or inconsistent configuration text
    class ConfigError : public InvalidArgument
    {
    public:
        using InvalidArgument::InvalidArgument;
    };

    // Flat `key = value` file. '#' starts a comment, blank lines are ignored,
    // unknown or repeated keys are errors. Physical quantities carry their unit
    // in the key name (freq_ghz, tx_power_dbm, user_range_m, ...).
    struct CliConfig
    {
        CliConfig();

        ExperimentSpec experiment; // carrier_freq_hz and spacing_m are derived, see spec()
        double freq_ghz = 30.0;
        double spacing_wavelengths = 0.5;

        // estimate
        std::string estimate_scheme = "prmse";
        bool noiseless = false;
        std::optional<double> snr_db; // overrides noise_dbm when set

        // pattern
        std::vector<double> pattern_angles{0.0};
        std::vector<double> pattern_ranges_m{10.0};
        double scan_step = 1e-4;

        std::size_t threads = 1;
        bool verbose = false;
        std::string codebook_cache = "codebooks.bin";

        // Experiment spec with frequency and spacing in SI units
        ExperimentSpec spec() const;

        void validate() const;
    };

    CliConfig parse_config(std::string_view text);
    CliConfig load_config(const std::string &path);

    // Canonical form: every key once, fixed order, shortest round-trip numbers
    std::string serialize_config(const CliConfig &cfg);
} // namespace nfbt

#endif
