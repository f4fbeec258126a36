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

#include "nfbt/beam_pattern.hpp"
#include "nfbt/fresnel.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace nfbt::cli
{
    namespace
    {
        std::ofstream open_output(const Invocation &inv, const std::string &name)
        {
            std::filesystem::create_directories(inv.out_dir);
            const std::filesystem::path path = std::filesystem::path(inv.out_dir) / name;
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f)
                throw ConfigError("cannot open '" + path.string() + "' for writing");
            return f;
        }

        nlohmann::json opt_json(const std::optional<double> &v)
        {
            return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
        }

        // same derivation as trial 0 of the first sweep point in an experiment
        Rng stream(std::uint64_t seed, std::uint32_t lane)
        {
            std::seed_seq seq{std::uint32_t(seed & 0xFFFFFFFFu), std::uint32_t(seed >> 32), 0u, 0u, lane};
            return Rng(seq);
        }
    } // namespace

    int cmd_pattern(const Invocation &inv, std::ostream &, std::ostream &err)
    {
        const CliConfig &c = inv.config;
        if (c.pattern_angles.empty() || c.pattern_ranges_m.empty())
            throw ConfigError("pattern needs non-empty pattern_angles and pattern_ranges_m");
        const ExperimentSpec spec = c.spec();
        const ArrayConfig cfg(spec.n_antennas, spec.carrier_freq_hz, spec.spacing_m);
        const double thr = spec.training.power_threshold;
        for (double r : c.pattern_ranges_m)
            if (r > cfg.rayleigh_dist() * (1.0 + 1e-12))
                throw ConfigError("pattern_ranges_m must not exceed the Rayleigh distance " +
                                  format_number(cfg.rayleigh_dist()) + " m");

        std::ofstream gains = open_output(inv, "pattern.csv");
        gains << "theta_u,r_u,omega,gain\n";
        std::ofstream widths = open_output(inv, "widths.csv");
        widths << "theta_u,r_u,support_width,surrogate_width,approx_width\n";

        for (double theta : c.pattern_angles)
            for (double r : c.pattern_ranges_m)
            {
                if (c.verbose)
                    err << "pattern: theta=" << format_number(theta) << " r=" << format_number(r) << '\n';
                for (const auto &[omega, g] : scan_pattern(cfg, {theta, r}, c.scan_step))
                    gains << format_number(theta) << ',' << format_number(r) << ',' << format_number(omega) << ','
                          << format_number(g) << '\n';

                const double plain = angular_support_continuous(cfg, {theta, r}, thr, c.scan_step).width();
                const double surrogate = surrogate_support_continuous(cfg, {theta, r}, thr, c.scan_step).width();
                std::string approx;
                try
                {
                    approx = format_number(2.0 * solve_a0(mu_from_range(cfg, theta, r), thr, cfg.n_antennas()));
                }
                catch (const NoCrossing &)
                {
                    // left empty: L never reaches the threshold on (0, 2]
                }
                widths << format_number(theta) << ',' << format_number(r) << ',' << format_number(plain) << ','
                       << format_number(surrogate) << ',' << approx << '\n';
            }
        return 0;
    }

    int cmd_estimate(const Invocation &inv, std::ostream &out, std::ostream &)
    {
        const CliConfig &c = inv.config;
        const ExperimentSpec spec = c.spec();
        if (spec.angle.uniform)
            throw ConfigError("estimate needs a fixed user_angle");
        if (spec.range.kind != RangeDistribution::Kind::Fixed)
            throw ConfigError("estimate needs a fixed user_range_m");
        const SchemeSpec scheme = parse_scheme_spec(c.estimate_scheme, spec.training.n_candidates);

        const ArrayConfig cfg(spec.n_antennas, spec.carrier_freq_hz, spec.spacing_m);
        const TrainingContext ctx(cfg, spec.training);
        const UserLocation user{spec.angle.value, spec.range.lo};
        user.validate();
        const double beta_db =
            spec.ref_gain_db ? *spec.ref_gain_db : 20.0 * std::log10(cfg.wavelength() / (4.0 * pi));
        const double tx = dbm_to_watt(spec.tx_power_dbm);
        double noise = dbm_to_watt(spec.noise_dbm);
        if (c.noiseless)
            noise = 0.0;
        else if (c.snr_db)
            noise = noise_for_reference_snr(db_to_linear(*c.snr_db), tx, db_to_linear(beta_db), cfg.n_antennas(),
                                            user.range);

        Rng channel_rng = stream(spec.master_seed, 0);
        Rng noise_rng = stream(spec.master_seed, 1);
        const ChannelRealization channel =
            synthesize_channel(cfg, user, spec.rician_db, beta_db, spec.n_nlos, channel_rng);
        const EstimationReport rep = run_scheme(scheme.scheme, channel, ctx, scheme.k, tx, noise, noise_rng);

        nlohmann::ordered_json j;
        j["scheme"] = scheme.label();
        j["seed"] = spec.master_seed;
        j["theta_true"] = user.spatial_angle;
        j["r_true"] = user.range;
        j["theta_hat"] = rep.theta_hat;
        j["r_hat"] = opt_json(rep.r_hat);
        j["candidates"] = nlohmann::ordered_json::array();
        for (const Candidate &cand : rep.candidates)
            j["candidates"].push_back({{"angle", cand.angle}, {"range", opt_json(cand.range)}, {"power", cand.power}});
        j["n_training_symbols"] = rep.n_training_symbols;
        j["degenerate_supports"] = rep.degenerate_supports;
        j["noise_power_w"] = noise;
        j["rate_bps_hz"] = noise > 0.0 ? nlohmann::json(achievable_rate(channel, rep.beam, tx, noise))
                                       : nlohmann::json(nullptr);
        out << j.dump(2) << '\n';
        return 0;
    }

    int cmd_mc(const Invocation &inv, std::ostream &, std::ostream &err)
    {
        const CliConfig &c = inv.config;
        RunOptions opts;
        opts.threads = c.threads;
        std::size_t last_decile = 0;
        opts.progress = [&](std::size_t done, std::size_t total) {
            const std::size_t decile = done * 10 / total;
            if (decile != last_decile || done == total)
            {
                last_decile = decile;
                err << "mc: " << done << '/' << total << " trials\n";
            }
        };
        const ExperimentResult res = run_experiment(c.spec(), opts);

        std::ofstream trials = open_output(inv, "trials.csv");
        write_trials_csv(trials, res.trials);
        std::ofstream summary = open_output(inv, "summary.csv");
        write_summary_csv(summary, res.summary);
        if (!trials || !summary)
            throw ConfigError("writing results under '" + inv.out_dir + "' failed");
        return 0;
    }

    int cmd_codebook_cache(const Invocation &inv, std::ostream &, std::ostream &err)
    {
        const ExperimentSpec spec = inv.config.spec();
        const ArrayConfig cfg(spec.n_antennas, spec.carrier_freq_hz, spec.spacing_m);
        const Codebook polar = build_polar_codebook(cfg, spec.training.polar);
        const Codebook dft = build_dft_codebook(cfg);

        std::filesystem::create_directories(inv.out_dir);
        const std::filesystem::path base = std::filesystem::path(inv.out_dir) / inv.config.codebook_cache;
        const std::string dft_path = base.string() + ".dft";
        const std::string polar_path = base.string() + ".polar";
        write_codebook_cache(dft_path, dft);
        write_codebook_cache(polar_path, polar);

        // read back so a broken file is caught at creation time
        if (encode_codebook(read_codebook_cache(dft_path)) != encode_codebook(dft) ||
            encode_codebook(read_codebook_cache(polar_path)) != encode_codebook(polar))
            throw NumericError("codebook cache read-back mismatch");
        if (inv.config.verbose)
            err << "codebook-cache: wrote " << dft.size() << " + " << polar.size() << " codewords\n";
        return 0;
    }
} // namespace nfbt::cli
