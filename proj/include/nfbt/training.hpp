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

#ifndef NFBT_TRAINING_HPP
#define NFBT_TRAINING_HPP

#include "nfbt/array_model.hpp"
#include "nfbt/codebook.hpp"
#include "nfbt/fresnel.hpp"

#include <optional>
#include <vector>

namespace nfbt
{
    struct TrainingParams
    {
        double power_threshold = 0.5; // kappa^2, applied to received powers
        std::size_t n_candidates = 3; // default K of the middle-K selection
        std::size_t support_max_gap = 1; // holes bridged when growing the support
        double range_step = 0.05;     // m, prMSE range grid and mu grid resolution
        PolarSamplingParams polar;

        void validate() const;
    };

    // Immutable per-array state shared by every trial: codebooks and search grids.
    class TrainingContext
    {
    public:
        TrainingContext(const ArrayConfig &cfg, const TrainingParams &params);

        const ArrayConfig &array() const { return cfg_; }
        const TrainingParams &params() const { return params_; }
        const Codebook &dft() const { return dft_; }
        const Codebook &polar() const { return polar_; }
        const MuGrid &mu_grid() const { return mu_grid_; }
        const std::vector<double> &range_grid() const { return range_grid_; }

    private:
        ArrayConfig cfg_;
        TrainingParams params_;
        Codebook dft_;
        Codebook polar_;
        MuGrid mu_grid_;
        std::vector<double> range_grid_;
    };

    // Z_Fre, Z_Fre + step, ... up to Z_Rayl, which is always the last point.
    // Points are computed as Z_Fre + k * step, never by accumulation.
    std::vector<double> prmse_range_grid(const ArrayConfig &cfg, double step);

    struct SweepResult
    {
        std::vector<double> powers; // W, one per codebook entry in order
        CodebookKind kind = CodebookKind::Dft;
        double tx_power = 0.0;
        double noise_power = 0.0;
    };

    // One received power per codeword, fresh noise per symbol
    SweepResult beam_sweep(const ChannelRealization &channel, const Codebook &codebook, double tx_power,
                           double noise_power, Rng &rng);

    struct SupportIndexSet
    {
        std::vector<std::size_t> indices; // ascending
        std::size_t median_index = 0;     // ceil(Med(indices))
        std::size_t peak_index = 0;       // argmax of the sweep
    };

    // Indices with p_n >= threshold * max p, taken from the cluster around the
    // argmax; holes of up to max_gap indices do not end the cluster.
    SupportIndexSet extract_support(const SweepResult &sweep, double threshold = 0.5, std::size_t max_gap = 1);

    double estimate_angle(const SupportIndexSet &support, const Codebook &dft);

    // K grid indices nearest n_bar (ties toward the lower index), clipped to [0, N)
    std::vector<std::size_t> middle_k_indices(std::size_t n_bar, std::size_t n_antennas, std::size_t k);
    std::vector<double> middle_k_candidates(const SupportIndexSet &support, const Codebook &dft, std::size_t k);

    struct AswRangeEstimate
    {
        double range = 0.0;           // m, clamped to [Z_Fre, Z_Rayl]
        std::size_t boundary_index = 0; // m
        double eta = 0.0;             // p_m / p_c
        double a = 0.0;               // |theta_c - theta_m|
        double residual = 0.0;        // |L(mu0, a) - eta|
        bool degenerate = false;      // neither side dropped below the threshold
    };

    // Range from the surrogate support width seen around candidate index c.
    AswRangeEstimate asw_je_range(const SweepResult &sweep, std::size_t c, const TrainingContext &ctx);

    // |b^H(theta_c, r) a_n|^2 / |b^H(theta_c, r) a_c|^2 for every n in indices
    std::vector<double> predicted_power_ratios(const TrainingContext &ctx, std::size_t c, double range,
                                               const std::vector<std::size_t> &indices);

    // Indices the prMSE fit runs over: the support itself, or c and its grid
    // neighbours when the support holds no index other than c
    std::vector<std::size_t> prmse_fit_indices(const SupportIndexSet &support, std::size_t c, std::size_t size);

    // sum over the fit indices of (eta_{c,n} - g_{c,n}(r))^2
    double prmse_objective(const SweepResult &sweep, const SupportIndexSet &support, std::size_t c, double range,
                           const TrainingContext &ctx);

    // Exhaustive minimisation of prmse_objective over the context range grid;
    // ties go to the smaller range.
    double prmse_je_range(const SweepResult &sweep, const SupportIndexSet &support, std::size_t c,
                          const TrainingContext &ctx);

    struct Candidate
    {
        double angle;
        std::optional<double> range;
        double power; // received power of the verification (or sweep) symbol
    };

    struct EstimationReport
    {
        Scheme scheme = Scheme::AswJe;
        double theta_hat = 0.0;
        std::optional<double> r_hat;
        std::vector<Candidate> candidates;
        BeamformingVector beam;
        std::size_t n_training_symbols = 0;
        std::size_t degenerate_supports = 0; // ASW-JE fallbacks taken
    };

    // k = number of middle-K candidates for the schemes that use them
    EstimationReport run_scheme_asw(const ChannelRealization &channel, const TrainingContext &ctx, std::size_t k,
                                    double tx_power, double noise_power, Rng &rng);
    EstimationReport run_scheme_prmse(const ChannelRealization &channel, const TrainingContext &ctx, std::size_t k,
                                      double tx_power, double noise_power, Rng &rng);
    EstimationReport run_scheme_twophase(const ChannelRealization &channel, const TrainingContext &ctx,
                                         std::size_t k, double tx_power, double noise_power, Rng &rng);
    EstimationReport run_scheme_exhaustive(const ChannelRealization &channel, const TrainingContext &ctx,
                                           double tx_power, double noise_power, Rng &rng);
    EstimationReport run_scheme_farfield(const ChannelRealization &channel, const TrainingContext &ctx,
                                         double tx_power, double noise_power, Rng &rng);
    // Genie beam matched to the LoS path; spends no training symbols
    EstimationReport run_scheme_perfect(const ChannelRealization &channel, const TrainingContext &ctx);

    EstimationReport run_scheme(Scheme scheme, const ChannelRealization &channel, const TrainingContext &ctx,
                                std::size_t k, double tx_power, double noise_power, Rng &rng);
} // namespace nfbt

#endif
