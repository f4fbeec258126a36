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

#ifndef NFBT_EXPERIMENT_HPP
#define NFBT_EXPERIMENT_HPP

#include "nfbt/training.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nfbt
{
    // Some scheme would spend the whole frame on training
    class InfeasibleExperiment : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class SweepVariable
    {
        Snr,      // reference SNR in dB; noise power follows per trial
        Range,    // user range in m
        Rician,   // Rician factor in dB
        NAntennas // array size
    };

    std::string_view sweep_variable_name(SweepVariable v);
    SweepVariable parse_sweep_variable(std::string_view name);

    struct SchemeSpec
    {
        Scheme scheme = Scheme::PrmseJe;
        std::size_t k = 3; // middle-K candidates; ignored by schemes without them

        // "prmse-k3", "twophase-k3", "exhaustive", ...
        std::string label() const;
    };

    // "prmse", "prmse@5", "farfield", ...
    SchemeSpec parse_scheme_spec(std::string_view token, std::size_t default_k);

    struct AngleDistribution
    {
        bool uniform = true; // uniform on [-1, 1] when set
        double value = 0.0;  // fixed angle otherwise
    };

    struct RangeDistribution
    {
        enum class Kind
        {
            Fixed,
            Uniform,  // [lo, hi]
            NearField // [Z_Fre, Z_Rayl] of the array in use
        };
        Kind kind = Kind::Fixed;
        double lo = 12.0; // also the fixed value
        double hi = 12.0;
    };

    struct ExperimentSpec
    {
        std::size_t n_antennas = 256;
        double carrier_freq_hz = 30e9;
        double spacing_m = 0.0; // 0 = half wavelength
        std::vector<SchemeSpec> schemes;
        SweepVariable sweep_variable = SweepVariable::Snr;
        std::vector<double> sweep_values;
        std::size_t n_trials = 100;
        AngleDistribution angle;
        RangeDistribution range;
        TrainingParams training;
        double tx_power_dbm = 30.0;
        double noise_dbm = -70.0;
        std::optional<double> ref_gain_db; // default (lambda / 4 pi)^2
        double rician_db = 30.0;
        std::size_t n_nlos = 2;
        std::size_t t_total = 2000;
        std::uint64_t master_seed = 1;

        void validate() const;
    };

    struct TrialRecord
    {
        std::string scheme;
        SweepVariable sweep_variable = SweepVariable::Snr;
        double sweep_value = 0.0;
        std::size_t trial = 0;
        double theta_true = 0.0;
        double r_true = 0.0;
        double theta_hat = 0.0;
        std::optional<double> r_hat;
        double rate = 0.0;     // bps/Hz
        double eff_rate = 0.0; // bps/Hz
        std::size_t n_train = 0;
    };

    struct MetricRow
    {
        std::string scheme;
        SweepVariable sweep_variable = SweepVariable::Snr;
        double sweep_value = 0.0;
        std::size_t n_trials = 0;
        double nmse_angle = 0.0;
        double nmse_angle_ci = 0.0; // 95% half-width, normal approximation
        std::optional<double> nmse_range;
        std::optional<double> nmse_range_ci;
        double rate = 0.0;
        double rate_ci = 0.0;
        double eff_rate = 0.0;
        double eff_rate_ci = 0.0;
    };

    struct RunOptions
    {
        std::size_t threads = 1;
        // Called from worker threads, serialized by the caller's lock
        std::function<void(std::size_t done, std::size_t total)> progress;
    };

    struct ExperimentResult
    {
        std::vector<TrialRecord> trials; // sweep value, then trial, then scheme order
        std::vector<MetricRow> summary;
    };

    // Throws InfeasibleExperiment if any scheme's overhead reaches t_total.
    ExperimentResult run_experiment(const ExperimentSpec &spec, const RunOptions &options = {});

    // Groups by (sweep value, scheme) in first-appearance order. Within a group
    // the statistics are taken over trials sorted by trial index.
    std::vector<MetricRow> summarize(const std::vector<TrialRecord> &trials);

    void write_trials_csv(std::ostream &out, const std::vector<TrialRecord> &trials);
    void write_summary_csv(std::ostream &out, const std::vector<MetricRow> &rows);

    // Shortest round-trip decimal form, independent of the locale
    std::string format_number(double v);
} // namespace nfbt

#endif
