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

#include "nfbt/array_model.hpp"
#include "nfbt/kernels.hpp"

namespace nfbt
{
    ArrayConfig::ArrayConfig(std::size_t n_antennas, double carrier_freq_hz, double spacing_m)
        : n_(n_antennas), freq_(carrier_freq_hz)
    {
        require(n_antennas >= 2, "ArrayConfig: n_antennas must be >= 2");
        require(std::isfinite(carrier_freq_hz) && carrier_freq_hz > 0.0, "ArrayConfig: carrier frequency must be > 0");
        require(std::isfinite(spacing_m) && spacing_m >= 0.0, "ArrayConfig: spacing must be >= 0 (0 = half wavelength)");
        lambda_ = speed_of_light / carrier_freq_hz;
        spacing_ = spacing_m > 0.0 ? spacing_m : 0.5 * lambda_;
    }

    void UserLocation::validate() const
    {
        require(std::isfinite(spatial_angle) && std::isfinite(range), "UserLocation: non-finite angle or range");
        require(spatial_angle >= -1.0 && spatial_angle <= 1.0, "UserLocation: spatial angle outside [-1, 1]");
        require(range > 0.0, "UserLocation: range must be > 0");
    }

    BeamformingVector BeamformingVector::from_phases(std::span<const double> phases)
    {
        require(!phases.empty(), "BeamformingVector: empty phase list");
        const double amp = 1.0 / std::sqrt(double(phases.size()));
        std::vector<cdouble> w(phases.size());
        for (std::size_t n = 0; n < phases.size(); ++n)
            w[n] = cdouble(amp * std::cos(phases[n]), amp * std::sin(phases[n]));
        return BeamformingVector(std::move(w));
    }

    BeamformingVector BeamformingVector::from_weights(std::vector<cdouble> weights)
    {
        require(!weights.empty(), "BeamformingVector: empty weight list");
        const double amp = 1.0 / std::sqrt(double(weights.size()));
        for (const cdouble &w : weights)
            require(std::abs(std::abs(w) - amp) <= 1e-12, "BeamformingVector: element modulus is not 1/sqrt(N)");
        return BeamformingVector(std::move(weights));
    }

    cdouble BeamformingVector::inner(const BeamformingVector &other) const
    {
        require(size() == other.size(), "BeamformingVector::inner: size mismatch");
        return kernels::dot_conj(w_, other.w_);
    }

    double path_difference(const ArrayConfig &cfg, const UserLocation &loc, std::size_t n)
    {
        const double offset = cfg.element_offset(n) * cfg.spacing();
        const double r = loc.range;
        const double num = offset * offset - 2.0 * r * loc.spatial_angle * offset;
        const double rn = std::sqrt(r * r + num);
        return num / (rn + r);
    }

    BeamformingVector near_steering(const ArrayConfig &cfg, const UserLocation &loc)
    {
        loc.validate();
        const double k = 2.0 * pi / cfg.wavelength();
        std::vector<double> phases(cfg.n_antennas());
        for (std::size_t n = 0; n < phases.size(); ++n)
            phases[n] = k * path_difference(cfg, loc, n);
        return BeamformingVector::from_phases(phases);
    }

    BeamformingVector far_steering(const ArrayConfig &cfg, double angle)
    {
        require(std::isfinite(angle) && angle >= -1.0 && angle <= 1.0, "far_steering: angle outside [-1, 1]");
        std::vector<double> phases(cfg.n_antennas());
        for (std::size_t n = 0; n < phases.size(); ++n)
            phases[n] = -pi * double(n) * angle;
        return BeamformingVector::from_phases(phases);
    }

    ChannelRealization synthesize_channel(const ArrayConfig &cfg, const UserLocation &loc,
                                          double rician_db, double ref_gain_db, std::size_t n_nlos, Rng &rng)
    {
        loc.validate();
        require(std::isfinite(rician_db), "synthesize_channel: Rician factor must be finite");
        require(std::isfinite(ref_gain_db), "synthesize_channel: reference gain must be finite");

        const std::size_t N = cfg.n_antennas();
        const double kappa = db_to_linear(rician_db);
        const double beta = db_to_linear(ref_gain_db);
        const double los_fraction = kappa / (kappa + 1.0);
        const double nlos_fraction = 1.0 / (kappa + 1.0);

        ChannelRealization ch;
        ch.rician_factor_db = rician_db;
        ch.ref_gain_db = ref_gain_db;
        ch.user = loc;

        const double los_amp = std::sqrt(los_fraction) * std::sqrt(beta) / loc.range;
        const double los_phase = -2.0 * pi * std::fmod(loc.range / cfg.wavelength(), 1.0);
        ch.los_gain = std::polar(los_amp, los_phase);

        // h^H = sqrt(N) h_u b^H(theta_u, r_u) + sqrt(N/L) sum_l h_l b^H(theta_l, r_l)
        ch.vector.assign(N, cdouble(0.0, 0.0));
        const BeamformingVector b_los = near_steering(cfg, loc);
        const cdouble los_scale = std::sqrt(double(N)) * ch.los_gain;
        for (std::size_t n = 0; n < N; ++n)
            ch.vector[n] = los_scale * std::conj(b_los[n]);

        if (n_nlos > 0)
        {
            const double sigma = std::sqrt(nlos_fraction) * std::sqrt(beta) / loc.range;
            std::uniform_real_distribution<double> angle_dist(-1.0, 1.0);
            std::uniform_real_distribution<double> range_dist(cfg.fresnel_dist(), cfg.rayleigh_dist());
            std::normal_distribution<double> unit_normal(0.0, 1.0);
            const double path_scale = std::sqrt(double(N) / double(n_nlos));

            ch.nlos_paths.reserve(n_nlos);
            for (std::size_t l = 0; l < n_nlos; ++l)
            {
                NlosPath path;
                path.spatial_angle = angle_dist(rng);
                path.range = range_dist(rng);
                const double re = unit_normal(rng);
                const double im = unit_normal(rng);
                path.gain = cdouble(re, im) * (sigma / std::sqrt(2.0));
                ch.nlos_paths.push_back(path);

                const BeamformingVector b = near_steering(cfg, {path.spatial_angle, path.range});
                const cdouble scale = path_scale * path.gain;
                for (std::size_t n = 0; n < N; ++n)
                    ch.vector[n] += scale * std::conj(b[n]);
            }
        }
        return ch;
    }

    cdouble project(const ChannelRealization &channel, const BeamformingVector &beam)
    {
        require(channel.size() == beam.size(), "project: channel/beam size mismatch");
        return kernels::dot(channel.vector, beam.weights());
    }

    double received_power(const ChannelRealization &channel, const BeamformingVector &beam,
                          double tx_power, double noise_power, Rng &rng)
    {
        require(tx_power > 0.0, "received_power: tx_power must be > 0");
        require(noise_power >= 0.0, "received_power: noise_power must be >= 0");
        const cdouble amp = project(channel, beam);
        if (noise_power == 0.0)
            return tx_power * std::norm(amp);

        std::normal_distribution<double> unit_normal(0.0, 1.0);
        const double s = std::sqrt(0.5 * noise_power);
        const double zr = s * unit_normal(rng);
        const double zi = s * unit_normal(rng);
        const double sp = std::sqrt(tx_power);
        const double yr = sp * amp.real() + zr;
        const double yi = sp * amp.imag() + zi;
        return yr * yr + yi * yi;
    }

    double achievable_rate(const ChannelRealization &channel, const BeamformingVector &beam,
                           double tx_power, double noise_power)
    {
        require(tx_power > 0.0, "achievable_rate: tx_power must be > 0");
        require(noise_power > 0.0, "achievable_rate: noise_power must be > 0");
        return std::log2(1.0 + tx_power * std::norm(project(channel, beam)) / noise_power);
    }

    double reference_snr(double tx_power, double ref_gain, std::size_t n_antennas, double range, double noise_power)
    {
        return tx_power * ref_gain * double(n_antennas) / (range * range * noise_power);
    }

    double noise_for_reference_snr(double snr_linear, double tx_power, double ref_gain, std::size_t n_antennas,
                                   double range)
    {
        require(snr_linear > 0.0, "noise_for_reference_snr: SNR must be > 0");
        return tx_power * ref_gain * double(n_antennas) / (range * range * snr_linear);
    }
} // namespace nfbt
