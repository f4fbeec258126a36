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

#include "nfbt/training.hpp"
#include "nfbt/kernels.hpp"

#include <algorithm>
#include <limits>

namespace nfbt
{
    void TrainingParams::validate() const
    {
        require(power_threshold > 0.0 && power_threshold < 1.0, "power_threshold must lie in (0, 1)");
        require(n_candidates >= 1, "n_candidates must be >= 1");
        require(std::isfinite(range_step) && range_step > 0.0, "range_step must be > 0");
        polar.validate();
    }

    TrainingContext::TrainingContext(const ArrayConfig &cfg, const TrainingParams &params)
        : cfg_(cfg), params_((params.validate(), params)), dft_(build_dft_codebook(cfg)),
          polar_(build_polar_codebook(cfg, params.polar)), mu_grid_(MuGrid::for_array(cfg, params.range_step)),
          range_grid_(prmse_range_grid(cfg, params.range_step))
    {
    }

    std::vector<double> prmse_range_grid(const ArrayConfig &cfg, double step)
    {
        require(std::isfinite(step) && step > 0.0, "prmse_range_grid: step must be > 0");
        const double lo = cfg.fresnel_dist();
        const double hi = cfg.rayleigh_dist();
        std::vector<double> grid;
        for (std::size_t k = 0;; ++k)
        {
            const double r = lo + double(k) * step;
            if (r >= hi)
                break;
            grid.push_back(r);
        }
        grid.push_back(hi);
        return grid;
    }

    SweepResult beam_sweep(const ChannelRealization &channel, const Codebook &codebook, double tx_power,
                           double noise_power, Rng &rng)
    {
        require(codebook.size() > 0, "beam_sweep: empty codebook");
        SweepResult out;
        out.kind = codebook.kind;
        out.tx_power = tx_power;
        out.noise_power = noise_power;
        out.powers.reserve(codebook.size());
        for (const CodebookEntry &e : codebook.entries)
            out.powers.push_back(received_power(channel, e.beam, tx_power, noise_power, rng));
        return out;
    }

    namespace
    {
        std::size_t argmax(const std::vector<double> &v)
        {
            return std::size_t(std::max_element(v.begin(), v.end()) - v.begin());
        }

        // Outermost qualifying index reached from `start` in direction dir, where
        // runs of up to max_gap non-qualifying indices are stepped over.
        template <typename Qualifies>
        std::size_t grow(std::size_t start, int dir, std::size_t size, std::size_t max_gap, const Qualifies &ok)
        {
            std::size_t last = start;
            std::size_t misses = 0;
            for (std::ptrdiff_t m = std::ptrdiff_t(start) + dir; m >= 0 && m < std::ptrdiff_t(size); m += dir)
            {
                if (ok(std::size_t(m)))
                {
                    last = std::size_t(m);
                    misses = 0;
                }
                else if (++misses > max_gap)
                    break;
            }
            return last;
        }

        double ratio_to(const SweepResult &sweep, std::size_t c, std::size_t n)
        {
            return sweep.powers[n] / sweep.powers[c];
        }

        void check_reference(const SweepResult &sweep, std::size_t c)
        {
            require(c < sweep.powers.size(), "candidate index outside the sweep");
            if (!(sweep.powers[c] > 0.0))
                throw NumericError("reference power of the candidate beam is zero");
        }

        double clamp_range(const ArrayConfig &cfg, double r)
        {
            return std::clamp(r, cfg.fresnel_dist(), cfg.rayleigh_dist());
        }
    } // namespace

    SupportIndexSet extract_support(const SweepResult &sweep, double threshold, std::size_t max_gap)
    {
        require(!sweep.powers.empty(), "extract_support: empty sweep");
        require(threshold > 0.0 && threshold < 1.0, "extract_support: threshold must lie in (0, 1)");
        require(sweep.kind == CodebookKind::Dft, "extract_support: sweep must come from the DFT codebook");

        SupportIndexSet s;
        s.peak_index = argmax(sweep.powers);
        const double level = threshold * sweep.powers[s.peak_index];
        const auto ok = [&](std::size_t n) { return sweep.powers[n] >= level; };
        const std::size_t size = sweep.powers.size();
        const std::size_t lo = grow(s.peak_index, -1, size, max_gap, ok);
        const std::size_t hi = grow(s.peak_index, +1, size, max_gap, ok);
        for (std::size_t n = lo; n <= hi; ++n)
            if (ok(n))
                s.indices.push_back(n);

        // ceil of the index median: upper middle element for even counts
        s.median_index = s.indices[s.indices.size() / 2];
        if (s.indices.size() % 2 == 0)
        {
            const std::size_t a = s.indices[s.indices.size() / 2 - 1];
            const std::size_t b = s.indices[s.indices.size() / 2];
            s.median_index = (a + b + 1) / 2;
        }
        return s;
    }

    double estimate_angle(const SupportIndexSet &support, const Codebook &dft)
    {
        require(support.median_index < dft.size(), "estimate_angle: median index outside codebook");
        return dft[support.median_index].angle;
    }

    std::vector<std::size_t> middle_k_indices(std::size_t n_bar, std::size_t n_antennas, std::size_t k)
    {
        require(k >= 1 && k <= n_antennas, "middle_k_indices: need 1 <= K <= N");
        require(n_bar < n_antennas, "middle_k_indices: centre index outside the grid");
        std::vector<std::size_t> out{n_bar};
        for (std::size_t dist = 1; out.size() < k; ++dist)
        {
            if (n_bar >= dist)
                out.push_back(n_bar - dist);
            if (out.size() < k && n_bar + dist < n_antennas)
                out.push_back(n_bar + dist);
        }
        return out;
    }

    std::vector<double> middle_k_candidates(const SupportIndexSet &support, const Codebook &dft, std::size_t k)
    {
        std::vector<double> out;
        for (std::size_t n : middle_k_indices(support.median_index, dft.size(), k))
            out.push_back(dft[n].angle);
        return out;
    }

    AswRangeEstimate asw_je_range(const SweepResult &sweep, std::size_t c, const TrainingContext &ctx)
    {
        check_reference(sweep, c);
        const ArrayConfig &cfg = ctx.array();
        const Codebook &dft = ctx.dft();
        const MuGrid &grid = ctx.mu_grid();
        const std::size_t size = sweep.powers.size();
        const double thr = ctx.params().power_threshold;
        const auto ok = [&](std::size_t n) { return ratio_to(sweep, c, n) >= thr; };
        const auto offset = [&](std::size_t n) { return std::abs(dft[c].angle - dft[n].angle); };

        // Boundary candidates per side: the outermost member and the first index past it.
        // Right side first so that equal distances resolve toward the right.
        std::vector<std::size_t> boundary;
        std::vector<double> inside_offsets, outside_offsets;
        for (int dir : {+1, -1})
        {
            const std::size_t last = grow(c, dir, size, ctx.params().support_max_gap, ok);
            const std::ptrdiff_t next = std::ptrdiff_t(last) + dir;
            if (next >= 0 && next < std::ptrdiff_t(size))
            {
                boundary.push_back(std::size_t(next));
                outside_offsets.push_back(offset(std::size_t(next)));
            }
            if (last != c)
            {
                boundary.push_back(last);
                inside_offsets.push_back(offset(last));
            }
        }

        AswRangeEstimate est;
        if (outside_offsets.empty())
        {
            est.degenerate = true;
            est.boundary_index = c + 1 < size ? c + 1 : c - 1;
        }
        else
        {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t m : boundary)
            {
                const double dist = std::abs(ratio_to(sweep, c, m) - thr);
                if (dist < best)
                {
                    best = dist;
                    est.boundary_index = m;
                }
            }
        }
        est.eta = ratio_to(sweep, c, est.boundary_index);
        est.a = offset(est.boundary_index);

        // L(mu, a) is not monotone in mu, so several mu can reproduce eta. Prefer
        // those whose predicted support edge falls where the sweep saw it: members
        // stay above the threshold and the first outside index drops below it.
        const auto consistent = [&](std::size_t i) {
            for (double a : inside_offsets)
                if (grid.ratio(i, a) < thr)
                    return false;
            for (double a : outside_offsets)
                if (grid.ratio(i, a) >= thr)
                    return false;
            return true;
        };

        std::size_t pick = 0;
        double best_free = std::numeric_limits<double>::infinity();
        std::size_t pick_free = 0;
        double best_bracketed = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const double residual = std::abs(grid.ratio(i, est.a) - est.eta);
            if (residual < best_free)
            {
                best_free = residual;
                pick_free = i;
            }
            if (residual < best_bracketed && consistent(i))
            {
                best_bracketed = residual;
                pick = i;
            }
        }
        if (!std::isfinite(best_bracketed))
            pick = pick_free;

        est.residual = std::abs(grid.ratio(pick, est.a) - est.eta);
        est.range = clamp_range(cfg, range_from_mu(cfg, dft[c].angle, grid.values()[pick]));
        return est;
    }

    namespace
    {
        // ratios[i] = |b^H a_{indices[i]}|^2 / |b^H a_c|^2 for the beam b = b(theta_c, r)
        void fill_ratios(const TrainingContext &ctx, std::size_t c, double range,
                         const std::vector<std::size_t> &indices, std::vector<double> &ratios)
        {
            const Codebook &dft = ctx.dft();
            const BeamformingVector b = near_steering(ctx.array(), {dft[c].angle, range});
            const double ref = std::norm(kernels::dot_conj(b.weights(), dft[c].beam.weights()));
            if (!(ref >= 1e-30))
                throw NumericError("predicted power ratio: vanishing reference gain");
            ratios.resize(indices.size());
            for (std::size_t i = 0; i < indices.size(); ++i)
                ratios[i] = std::norm(kernels::dot_conj(b.weights(), dft[indices[i]].beam.weights())) / ref;
        }
    } // namespace

    std::vector<double> predicted_power_ratios(const TrainingContext &ctx, std::size_t c, double range,
                                               const std::vector<std::size_t> &indices)
    {
        require(c < ctx.dft().size(), "predicted_power_ratios: candidate index outside codebook");
        for (std::size_t n : indices)
            require(n < ctx.dft().size(), "predicted_power_ratios: index outside codebook");
        std::vector<double> out;
        fill_ratios(ctx, c, range, indices, out);
        return out;
    }

    std::vector<std::size_t> prmse_fit_indices(const SupportIndexSet &support, std::size_t c, std::size_t size)
    {
        const bool informative =
            std::any_of(support.indices.begin(), support.indices.end(), [&](std::size_t n) { return n != c; });
        if (informative)
            return support.indices;
        // A lone member carries no ratio information; use its grid neighbours.
        std::vector<std::size_t> out;
        if (c > 0)
            out.push_back(c - 1);
        out.push_back(c);
        if (c + 1 < size)
            out.push_back(c + 1);
        return out;
    }

    double prmse_objective(const SweepResult &sweep, const SupportIndexSet &support, std::size_t c, double range,
                           const TrainingContext &ctx)
    {
        check_reference(sweep, c);
        const std::vector<std::size_t> fit = prmse_fit_indices(support, c, sweep.powers.size());
        const std::vector<double> g = predicted_power_ratios(ctx, c, range, fit);
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            const double e = ratio_to(sweep, c, fit[i]) - g[i];
            sum += e * e;
        }
        return sum;
    }

    double prmse_je_range(const SweepResult &sweep, const SupportIndexSet &support, std::size_t c,
                          const TrainingContext &ctx)
    {
        check_reference(sweep, c);
        require(c < ctx.dft().size(), "prmse_je_range: candidate index outside codebook");
        for (std::size_t n : support.indices)
            require(n < ctx.dft().size(), "prmse_je_range: support index outside codebook");

        const std::vector<std::size_t> fit = prmse_fit_indices(support, c, sweep.powers.size());
        std::vector<double> eta(fit.size());
        for (std::size_t i = 0; i < eta.size(); ++i)
            eta[i] = ratio_to(sweep, c, fit[i]);

        std::vector<double> g;
        double best_r = ctx.range_grid().front();
        double best = std::numeric_limits<double>::infinity();
        for (double r : ctx.range_grid())
        {
            fill_ratios(ctx, c, r, fit, g);
            double sum = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
            {
                const double e = eta[i] - g[i];
                sum += e * e;
            }
            if (sum < best)
            {
                best = sum;
                best_r = r;
            }
        }
        return best_r;
    }

    namespace
    {
        // DFT sweep, middle-K candidates, a range per candidate, then one
        // verification symbol per candidate beam; the strongest one wins.
        template <typename RangeFn>
        EstimationReport run_joint(Scheme scheme, const ChannelRealization &channel, const TrainingContext &ctx,
                                   std::size_t k, double tx_power, double noise_power, Rng &rng,
                                   const RangeFn &estimate_range)
        {
            const ArrayConfig &cfg = ctx.array();
            const SweepResult sweep = beam_sweep(channel, ctx.dft(), tx_power, noise_power, rng);
            const SupportIndexSet support =
                extract_support(sweep, ctx.params().power_threshold, ctx.params().support_max_gap);

            EstimationReport rep;
            rep.scheme = scheme;
            std::size_t best = 0;
            std::vector<BeamformingVector> beams;
            for (std::size_t c : middle_k_indices(support.median_index, cfg.n_antennas(), k))
            {
                const double theta = ctx.dft()[c].angle;
                const double r = estimate_range(sweep, support, c, rep);
                beams.push_back(near_steering(cfg, {theta, r}));
                const double p = received_power(channel, beams.back(), tx_power, noise_power, rng);
                rep.candidates.push_back({theta, r, p});
                if (p > rep.candidates[best].power)
                    best = rep.candidates.size() - 1;
            }
            rep.theta_hat = rep.candidates[best].angle;
            rep.r_hat = rep.candidates[best].range;
            rep.beam = std::move(beams[best]);
            rep.n_training_symbols = training_overhead(scheme, cfg.n_antennas(), k, ctx.params().polar.n_ranges);
            return rep;
        }

        // Argmax over a set of polar codewords given as (angle index, range index) pairs
        EstimationReport pick_polar(Scheme scheme, const ChannelRealization &channel, const TrainingContext &ctx,
                                    const std::vector<std::size_t> &angle_indices, double tx_power,
                                    double noise_power, Rng &rng)
        {
            const Codebook &polar = ctx.polar();
            EstimationReport rep;
            rep.scheme = scheme;
            const CodebookEntry *winner = nullptr;
            double best = -1.0;
            for (std::size_t n : angle_indices)
                for (std::size_t s = 0; s < polar.n_ranges; ++s)
                {
                    const CodebookEntry &e = polar.polar(n, s);
                    const double p = received_power(channel, e.beam, tx_power, noise_power, rng);
                    rep.candidates.push_back({e.angle, e.range, p});
                    if (p > best)
                    {
                        best = p;
                        winner = &e;
                    }
                }
            rep.theta_hat = winner->angle;
            rep.r_hat = clamp_range(ctx.array(), *winner->range);
            rep.beam = winner->beam;
            return rep;
        }
    } // namespace

    EstimationReport run_scheme_asw(const ChannelRealization &channel, const TrainingContext &ctx, std::size_t k,
                                    double tx_power, double noise_power, Rng &rng)
    {
        return run_joint(Scheme::AswJe, channel, ctx, k, tx_power, noise_power, rng,
                         [&](const SweepResult &sweep, const SupportIndexSet &, std::size_t c, EstimationReport &rep) {
                             const AswRangeEstimate est = asw_je_range(sweep, c, ctx);
                             rep.degenerate_supports += est.degenerate ? 1 : 0;
                             return est.range;
                         });
    }

    EstimationReport run_scheme_prmse(const ChannelRealization &channel, const TrainingContext &ctx, std::size_t k,
                                      double tx_power, double noise_power, Rng &rng)
    {
        return run_joint(Scheme::PrmseJe, channel, ctx, k, tx_power, noise_power, rng,
                         [&](const SweepResult &sweep, const SupportIndexSet &support, std::size_t c,
                             EstimationReport &) { return prmse_je_range(sweep, support, c, ctx); });
    }

    EstimationReport run_scheme_twophase(const ChannelRealization &channel, const TrainingContext &ctx,
                                         std::size_t k, double tx_power, double noise_power, Rng &rng)
    {
        const ArrayConfig &cfg = ctx.array();
        const SweepResult sweep = beam_sweep(channel, ctx.dft(), tx_power, noise_power, rng);
        const SupportIndexSet support =
            extract_support(sweep, ctx.params().power_threshold, ctx.params().support_max_gap);
        EstimationReport rep = pick_polar(Scheme::TwoPhase, channel, ctx,
                                          middle_k_indices(support.median_index, cfg.n_antennas(), k), tx_power,
                                          noise_power, rng);
        rep.n_training_symbols = training_overhead(Scheme::TwoPhase, cfg.n_antennas(), k, ctx.params().polar.n_ranges);
        return rep;
    }

    EstimationReport run_scheme_exhaustive(const ChannelRealization &channel, const TrainingContext &ctx,
                                           double tx_power, double noise_power, Rng &rng)
    {
        const ArrayConfig &cfg = ctx.array();
        std::vector<std::size_t> all(cfg.n_antennas());
        for (std::size_t n = 0; n < all.size(); ++n)
            all[n] = n;
        EstimationReport rep = pick_polar(Scheme::Exhaustive, channel, ctx, all, tx_power, noise_power, rng);
        // keep only the winner; the full sweep is N*S entries long
        const auto win = std::max_element(rep.candidates.begin(), rep.candidates.end(),
                                          [](const Candidate &a, const Candidate &b) { return a.power < b.power; });
        rep.candidates = {*win};
        rep.n_training_symbols = training_overhead(Scheme::Exhaustive, cfg.n_antennas(), 1, ctx.params().polar.n_ranges);
        return rep;
    }

    EstimationReport run_scheme_farfield(const ChannelRealization &channel, const TrainingContext &ctx,
                                         double tx_power, double noise_power, Rng &rng)
    {
        const SweepResult sweep = beam_sweep(channel, ctx.dft(), tx_power, noise_power, rng);
        const std::size_t n = argmax(sweep.powers);
        EstimationReport rep;
        rep.scheme = Scheme::FarField;
        rep.theta_hat = ctx.dft()[n].angle;
        rep.beam = ctx.dft()[n].beam;
        rep.candidates.push_back({rep.theta_hat, std::nullopt, sweep.powers[n]});
        rep.n_training_symbols = training_overhead(Scheme::FarField, ctx.array().n_antennas(), 1, 1);
        return rep;
    }

    EstimationReport run_scheme_perfect(const ChannelRealization &channel, const TrainingContext &ctx)
    {
        EstimationReport rep;
        rep.scheme = Scheme::PerfectCsi;
        rep.theta_hat = channel.user.spatial_angle;
        rep.r_hat = channel.user.range;
        rep.beam = near_steering(ctx.array(), channel.user);
        rep.n_training_symbols = 0;
        return rep;
    }

    EstimationReport run_scheme(Scheme scheme, const ChannelRealization &channel, const TrainingContext &ctx,
                                std::size_t k, double tx_power, double noise_power, Rng &rng)
    {
        switch (scheme)
        {
        case Scheme::AswJe:
            return run_scheme_asw(channel, ctx, k, tx_power, noise_power, rng);
        case Scheme::PrmseJe:
            return run_scheme_prmse(channel, ctx, k, tx_power, noise_power, rng);
        case Scheme::Exhaustive:
            return run_scheme_exhaustive(channel, ctx, tx_power, noise_power, rng);
        case Scheme::TwoPhase:
            return run_scheme_twophase(channel, ctx, k, tx_power, noise_power, rng);
        case Scheme::FarField:
            return run_scheme_farfield(channel, ctx, tx_power, noise_power, rng);
        case Scheme::PerfectCsi:
            return run_scheme_perfect(channel, ctx);
        }
        throw InvalidArgument("run_scheme: unknown scheme");
    }
} // namespace nfbt
