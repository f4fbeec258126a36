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

#ifndef NFBT_ARRAY_MODEL_HPP
#define NFBT_ARRAY_MODEL_HPP

#include "nfbt/common.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nfbt
{
    // Uniform linear array centred at the origin along the y-axis.
    // Element n (0-based) sits at offset (n - (N-1)/2) * spacing.
    class ArrayConfig
    {
    public:
        // spacing_m <= 0 selects half-wavelength spacing
        ArrayConfig(std::size_t n_antennas, double carrier_freq_hz, double spacing_m = 0.0);

        std::size_t n_antennas() const { return n_; }
        double carrier_freq() const { return freq_; }
        double wavelength() const { return lambda_; }
        double spacing() const { return spacing_; }

        // Derived quantities are recomputed on each call, never cached
        double aperture() const { return double(n_ - 1) * spacing_; }
        double rayleigh_dist() const { return 2.0 * aperture() * aperture() / lambda_; }
        double fresnel_dist() const { return 0.5 * std::sqrt(aperture() * aperture() * aperture() / lambda_); }

        // Centred element offset delta_n in units of spacing
        double element_offset(std::size_t n) const { return double(n) - 0.5 * double(n_ - 1); }

    private:
        std::size_t n_;
        double freq_;
        double lambda_;
        double spacing_;
    };

    // User position in polar coordinates relative to the array centre
    struct UserLocation
    {
        double spatial_angle; // theta = cos(physical AoD), in [-1, 1]
        double range;         // m, > 0

        void validate() const;
    };

    // Analog beamformer: every element has modulus exactly 1/sqrt(N)
    class BeamformingVector
    {
    public:
        BeamformingVector() = default;

        // Builds the vector exp(j * phase_n) / sqrt(N)
        static BeamformingVector from_phases(std::span<const double> phases);

        // Adopts raw weights; throws unless every modulus is 1/sqrt(N) to 1e-12
        static BeamformingVector from_weights(std::vector<cdouble> weights);

        std::size_t size() const { return w_.size(); }
        std::span<const cdouble> weights() const { return w_; }
        const cdouble &operator[](std::size_t n) const { return w_[n]; }

        // Hermitian inner product  this^H * other
        cdouble inner(const BeamformingVector &other) const;

    private:
        explicit BeamformingVector(std::vector<cdouble> w) : w_(std::move(w)) {}
        std::vector<cdouble> w_;
    };

    // Near-field (spherical wavefront) steering vector b(theta, r).
    // This is the matched beamformer: the channel row is sqrt(N) h_u b^H.
    BeamformingVector near_steering(const ArrayConfig &cfg, const UserLocation &loc);

    // Far-field steering vector a(theta), element phase -pi * n * theta
    BeamformingVector far_steering(const ArrayConfig &cfg, double angle);

    // Exact distance difference r^(n) - r, evaluated without cancellation
    double path_difference(const ArrayConfig &cfg, const UserLocation &loc, std::size_t n);

    struct NlosPath
    {
        cdouble gain;
        double spatial_angle;
        double range;
    };

    struct ChannelRealization
    {
        std::vector<cdouble> vector; // channel row h^H, length N
        cdouble los_gain;            // h_u
        double rician_factor_db;
        double ref_gain_db;
        UserLocation user;
        std::vector<NlosPath> nlos_paths;

        std::size_t size() const { return vector.size(); }
    };

    // LoS path plus n_nlos scattered paths. NLoS angles are uniform on [-1, 1],
    // NLoS ranges uniform on [Z_Fre, Z_Rayl].
    ChannelRealization synthesize_channel(const ArrayConfig &cfg, const UserLocation &loc,
                                          double rician_db, double ref_gain_db, std::size_t n_nlos, Rng &rng);

    // Noise-free amplitude h^H w
    cdouble project(const ChannelRealization &channel, const BeamformingVector &beam);

    // |sqrt(P) h^H w + z|^2 with z ~ CN(0, noise_power)
    double received_power(const ChannelRealization &channel, const BeamformingVector &beam,
                          double tx_power, double noise_power, Rng &rng);

    // log2(1 + P |h^H v|^2 / sigma^2) in bps/Hz
    double achievable_rate(const ChannelRealization &channel, const BeamformingVector &beam,
                           double tx_power, double noise_power);

    // Matched-beam receive SNR  P beta N / (r^2 sigma^2), all linear
    double reference_snr(double tx_power, double ref_gain, std::size_t n_antennas, double range, double noise_power);

    // Noise power that yields the requested reference SNR
    double noise_for_reference_snr(double snr_linear, double tx_power, double ref_gain, std::size_t n_antennas,
                                   double range);
} // namespace nfbt

#endif
