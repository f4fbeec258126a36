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

#include "nfbt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

namespace nfbt
{
    std::string_view sweep_variable_name(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::Snr:
            return "snr";
        case SweepVariable::Range:
            return "range";
        case SweepVariable::Rician:
            return "rician";
        case SweepVariable::NAntennas:
            return "n_antennas";
        }
        throw InvalidArgument("unknown sweep variable");
    }

    SweepVariable parse_sweep_variable(std::string_view name)
    {
        for (SweepVariable v : {SweepVariable::Snr, SweepVariable::Range, SweepVariable::Rician,
                                SweepVariable::NAntennas})
            if (sweep_variable_name(v) == name)
                return v;
        throw InvalidArgument("unknown sweep variable '" + std::string(name) + "'");
    }

    namespace
    {
        bool uses_candidates(Scheme s)
        {
            return s == Scheme::AswJe || s == Scheme::PrmseJe || s == Scheme::TwoPhase;
        }
    } // namespace

    std::string SchemeSpec::label() const
    {
        std::string out(scheme_name(scheme));
        if (uses_candidates(scheme))
            out += "-k" + std::to_string(k);
        return out;
    }

    SchemeSpec parse_scheme_spec(std::string_view token, std::size_t default_k)
    {
        SchemeSpec spec;
        spec.k = default_k;
        const auto at = token.find('@');
        spec.scheme = parse_scheme(token.substr(0, at));
        if (at != std::string_view::npos)
        {
            const std::string_view num = token.substr(at + 1);
            std::size_t k = 0;
            const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
            if (ec != std::errc() || ptr != num.data() + num.size() || k == 0)
                throw InvalidArgument("bad candidate count in scheme '" + std::string(token) + "'");
            if (!uses_candidates(spec.scheme))
                throw InvalidArgument("scheme '" + std::string(scheme_name(spec.scheme)) +
                                      "' takes no candidate count");
            spec.k = k;
        }
        return spec;
    }

    void ExperimentSpec::validate() const
    {
        require(n_antennas >= 2, "n_antennas must be >= 2");
        require(std::isfinite(carrier_freq_hz) && carrier_freq_hz > 0.0, "carrier frequency must be > 0");
        require(std::isfinite(spacing_m) && spacing_m >= 0.0, "spacing must be >= 0");
        require(!schemes.empty(), "at least one scheme is required");
        require(!sweep_values.empty(), "sweep_values must not be empty");
        require(n_trials >= 1, "n_trials must be >= 1");
        require(t_total >= 1, "t_total must be >= 1");
        require(std::isfinite(tx_power_dbm) && std::isfinite(noise_dbm), "powers must be finite");
        require(std::isfinite(rician_db), "rician_db must be finite");
        require(!ref_gain_db || std::isfinite(*ref_gain_db), "ref_gain_db must be finite");
        require(angle.uniform || (angle.value >= -1.0 && angle.value <= 1.0), "user angle must lie in [-1, 1]");
        if (range.kind != RangeDistribution::Kind::NearField)
            require(range.lo > 0.0 && range.hi >= range.lo, "user range needs 0 < lo <= hi");
        training.validate();
        for (const SchemeSpec &s : schemes)
            require(s.k >= 1, "candidate count must be >= 1");
        for (double v : sweep_values)
        {
            require(std::isfinite(v), "sweep values must be finite");
            if (sweep_variable == SweepVariable::Range)
                require(v > 0.0, "range sweep values must be > 0");
            if (sweep_variable == SweepVariable::NAntennas)
                require(v >= 2.0 && v == std::floor(v), "n_antennas sweep values must be integers >= 2");
        }
    }

    namespace
    {
        struct SweepPoint
        {
            std::shared_ptr<const TrainingContext> ctx;
            double rician_db;
            std::optional<double> fixed_range;
            std::optional<double> snr_db;
        };

        Rng stream(std::uint64_t master, std::size_t sweep, std::size_t trial, std::size_t lane)
        {
            std::seed_seq seq{std::uint32_t(master & 0xFFFFFFFFu), std::uint32_t(master >> 32), std::uint32_t(sweep),
                              std::uint32_t(trial), std::uint32_t(lane)};
            return Rng(seq);
        }

        double mean(const std::vector<double> &v)
        {
            double s = 0.0;
            for (double x : v)
                s += x;
            return s / double(v.size());
        }

        // 1.96 * sample standard deviation / sqrt(n); zero for a single sample
        double ci_half_width(const std::vector<double> &v)
        {
            if (v.size() < 2)
                return 0.0;
            const double m = mean(v);
            double ss = 0.0;
            for (double x : v)
                ss += (x - m) * (x - m);
            return 1.96 * std::sqrt(ss / double(v.size() - 1)) / std::sqrt(double(v.size()));
        }
    } // namespace

    ExperimentResult run_experiment(const ExperimentSpec &spec, const RunOptions &options)
    {
        spec.validate();

        std::vector<SweepPoint> points;
        for (double v : spec.sweep_values)
        {
            const std::size_t n = spec.sweep_variable == SweepVariable::NAntennas ? std::size_t(v) : spec.n_antennas;
            for (const SchemeSpec &s : spec.schemes)
            {
                const std::size_t t = training_overhead(s.scheme, n, s.k, spec.training.polar.n_ranges);
                if (t >= spec.t_total)
                    throw InfeasibleExperiment("scheme " + s.label() + " needs " + std::to_string(t) +
                                               " training symbols, frame has " + std::to_string(spec.t_total));
                require(s.k <= n, "candidate count exceeds the array size");
            }
            SweepPoint p;
            // contexts are rebuilt only when the array changes
            if (!points.empty() && spec.sweep_variable != SweepVariable::NAntennas)
                p.ctx = points.front().ctx;
            else
                p.ctx = std::make_shared<const TrainingContext>(ArrayConfig(n, spec.carrier_freq_hz, spec.spacing_m),
                                                          spec.training);
            p.rician_db = spec.sweep_variable == SweepVariable::Rician ? v : spec.rician_db;
            if (spec.sweep_variable == SweepVariable::Range)
                p.fixed_range = v;
            if (spec.sweep_variable == SweepVariable::Snr)
                p.snr_db = v;
            points.push_back(std::move(p));
        }

        const std::size_t n_schemes = spec.schemes.size();
        const std::size_t total = points.size() * spec.n_trials;
        std::vector<TrialRecord> records(total * n_schemes);

        const auto run_task = [&](std::size_t task) {
            const std::size_t i = task / spec.n_trials;
            const std::size_t t = task % spec.n_trials;
            const SweepPoint &pt = points[i];
            const ArrayConfig &cfg = pt.ctx->array();

            Rng rng = stream(spec.master_seed, i, t, 0);
            double theta = spec.angle.value;
            if (spec.angle.uniform)
                theta = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
            double r = spec.range.lo;
            if (pt.fixed_range)
                r = *pt.fixed_range;
            else if (spec.range.kind == RangeDistribution::Kind::Uniform)
                r = std::uniform_real_distribution<double>(spec.range.lo, spec.range.hi)(rng);
            else if (spec.range.kind == RangeDistribution::Kind::NearField)
                r = std::uniform_real_distribution<double>(cfg.fresnel_dist(), cfg.rayleigh_dist())(rng);

            const double beta_db =
                spec.ref_gain_db ? *spec.ref_gain_db : 20.0 * std::log10(cfg.wavelength() / (4.0 * pi));
            const double tx = dbm_to_watt(spec.tx_power_dbm);
            const double noise =
                pt.snr_db ? noise_for_reference_snr(db_to_linear(*pt.snr_db), tx, db_to_linear(beta_db),
                                                    cfg.n_antennas(), r)
                          : dbm_to_watt(spec.noise_dbm);
            const ChannelRealization channel =
                synthesize_channel(cfg, {theta, r}, pt.rician_db, beta_db, spec.n_nlos, rng);

            for (std::size_t j = 0; j < n_schemes; ++j)
            {
                const SchemeSpec &s = spec.schemes[j];
                Rng noise_rng = stream(spec.master_seed, i, t, j + 1);
                const EstimationReport rep = run_scheme(s.scheme, channel, *pt.ctx, s.k, tx, noise, noise_rng);
                TrialRecord &rec = records[task * n_schemes + j];
                rec.scheme = s.label();
                rec.sweep_variable = spec.sweep_variable;
                rec.sweep_value = spec.sweep_values[i];
                rec.trial = t;
                rec.theta_true = theta;
                rec.r_true = r;
                rec.theta_hat = rep.theta_hat;
                rec.r_hat = rep.r_hat;
                rec.rate = achievable_rate(channel, rep.beam, tx, noise);
                rec.n_train = rep.n_training_symbols;
                rec.eff_rate = (1.0 - double(rec.n_train) / double(spec.t_total)) * rec.rate;
            }
        };

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex lock;
        std::size_t done = 0;

        const auto worker = [&] {
            for (;;)
            {
                const std::size_t task = next.fetch_add(1);
                if (task >= total || failed.load())
                    return;
                try
                {
                    run_task(task);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> g(lock);
                    if (!error)
                        error = std::current_exception();
                    failed.store(true);
                    return;
                }
                if (options.progress)
                {
                    std::lock_guard<std::mutex> g(lock);
                    options.progress(++done, total);
                }
            }
        };

        const std::size_t n_threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(total, 1));
        if (n_threads == 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < n_threads; ++w)
                pool.emplace_back(worker);
            for (std::thread &th : pool)
                th.join();
        }
        if (error)
            std::rethrow_exception(error);

        ExperimentResult out;
        out.trials = std::move(records);
        out.summary = summarize(out.trials);
        return out;
    }

    std::vector<MetricRow> summarize(const std::vector<TrialRecord> &trials)
    {
        // group key: (sweep value bits, scheme) in first-appearance order
        std::vector<std::vector<const TrialRecord *>> groups;
        std::map<std::pair<std::string, std::string>, std::size_t> index;
        for (const TrialRecord &r : trials)
        {
            const auto key = std::make_pair(format_number(r.sweep_value), r.scheme);
            const auto [it, fresh] = index.emplace(key, groups.size());
            if (fresh)
                groups.emplace_back();
            groups[it->second].push_back(&r);
        }

        std::vector<MetricRow> rows;
        for (auto &g : groups)
        {
            std::stable_sort(g.begin(), g.end(),
                             [](const TrialRecord *a, const TrialRecord *b) { return a->trial < b->trial; });
            std::vector<double> e_theta, theta2, rate, eff, e_r, r2;
            bool has_range = true;
            for (const TrialRecord *r : g)
            {
                e_theta.push_back((r->theta_true - r->theta_hat) * (r->theta_true - r->theta_hat));
                theta2.push_back(r->theta_true * r->theta_true);
                rate.push_back(r->rate);
                eff.push_back(r->eff_rate);
                if (r->r_hat)
                {
                    e_r.push_back((r->r_true - *r->r_hat) * (r->r_true - *r->r_hat));
                    r2.push_back(r->r_true * r->r_true);
                }
                else
                    has_range = false;
            }

            MetricRow row;
            row.scheme = g.front()->scheme;
            row.sweep_variable = g.front()->sweep_variable;
            row.sweep_value = g.front()->sweep_value;
            row.n_trials = g.size();
            const double theta_den = mean(theta2);
            row.nmse_angle = mean(e_theta) / theta_den;
            row.nmse_angle_ci = ci_half_width(e_theta) / theta_den;
            if (has_range)
            {
                const double r_den = mean(r2);
                row.nmse_range = mean(e_r) / r_den;
                row.nmse_range_ci = ci_half_width(e_r) / r_den;
            }
            row.rate = mean(rate);
            row.rate_ci = ci_half_width(rate);
            row.eff_rate = mean(eff);
            row.eff_rate_ci = ci_half_width(eff);
            rows.push_back(std::move(row));
        }
        return rows;
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    namespace
    {
        std::string opt(const std::optional<double> &v)
        {
            return v ? format_number(*v) : std::string();
        }
    } // namespace

    void write_trials_csv(std::ostream &out, const std::vector<TrialRecord> &trials)
    {
        out << "scheme,sweep_variable,sweep_value,trial,theta_true,r_true,theta_hat,r_hat,rate_bps_hz,"
               "eff_rate_bps_hz,n_train\n";
        for (const TrialRecord &r : trials)
            out << r.scheme << ',' << sweep_variable_name(r.sweep_variable) << ',' << format_number(r.sweep_value)
                << ',' << r.trial << ',' << format_number(r.theta_true) << ',' << format_number(r.r_true) << ','
                << format_number(r.theta_hat) << ',' << opt(r.r_hat) << ',' << format_number(r.rate) << ','
                << format_number(r.eff_rate) << ',' << r.n_train << '\n';
    }

    void write_summary_csv(std::ostream &out, const std::vector<MetricRow> &rows)
    {
        out << "scheme,sweep_variable,sweep_value,n_trials,nmse_angle,nmse_angle_ci,nmse_range,nmse_range_ci,"
               "rate_bps_hz,rate_ci,eff_rate_bps_hz,eff_rate_ci\n";
        for (const MetricRow &r : rows)
            out << r.scheme << ',' << sweep_variable_name(r.sweep_variable) << ',' << format_number(r.sweep_value)
                << ',' << r.n_trials << ',' << format_number(r.nmse_angle) << ',' << format_number(r.nmse_angle_ci)
                << ',' << opt(r.nmse_range) << ',' << opt(r.nmse_range_ci) << ',' << format_number(r.rate) << ','
                << format_number(r.rate_ci) << ',' << format_number(r.eff_rate) << ','
                << format_number(r.eff_rate_ci) << '\n';
    }
} // namespace nfbt
