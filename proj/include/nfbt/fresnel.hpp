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

#ifndef NFBT_FRESNEL_HPP
#define NFBT_FRESNEL_HPP

#include "nfbt/array_model.hpp"

#include <span>
#include <vector>

namespace nfbt
{
    struct FresnelPair
    {
        double c; // C(x) = int_0^x cos(pi t^2 / 2) dt
        double s; // S(x) = int_0^x sin(pi t^2 / 2) dt
    };

    // Both Fresnel integrals at once. Power series for |x| <= 1.5, continued
    // fraction of the complementary error function up to 1e8, two-term
    // asymptotic expansion beyond. Absolute error is below 1e-14 over the
    // tested range |x| <= 1e4.
    FresnelPair fresnel(double x);
    double fresnel_c(double x);
    double fresnel_s(double x);

    // Reduced coordinates of the beam power ratio:
    //   mu = sqrt(r / (d (1 - theta^2))),  a = theta - phi
    struct MuA
    {
        double mu;
        double a;
    };

    MuA to_mu_a(const ArrayConfig &cfg, const UserLocation &loc, double phi);
    double mu_from_range(const ArrayConfig &cfg, double angle, double range);
    double range_from_mu(const ArrayConfig &cfg, double angle, double mu);

    // G = |b^H(theta,r) a(phi)|^2 / |b^H(theta,r) a(theta)|^2 by direct summation.
    // Throws NumericError if the denominator falls below 1e-30.
    double beam_power_ratio_exact(const ArrayConfig &cfg, const UserLocation &loc, double phi);

    // Fresnel-integral approximation L(mu, a) of the beam power ratio
    //
    //   L = ( [C(a mu + N/2mu) - C(a mu - N/2mu)]^2 + [S(..) - S(..)]^2 )
    //       / ( 4 [C^2(N/2mu) + S^2(N/2mu)] )
    //
    // Valid for half-wavelength spacing.
    double beam_power_ratio_approx(MuA mu_a, std::size_t n_antennas);

    // Smallest a0 in (0, 2] with L(mu, a0) = threshold (to 1e-6).
    // Throws NoCrossing when L stays above the threshold on the whole interval.
    double solve_a0(double mu, double threshold, std::size_t n_antennas);

    // Uniform grid over mu with the L denominators precomputed for one array size.
    class MuGrid
    {
    public:
        MuGrid(double mu_min, double mu_max, double step, std::size_t n_antennas);

        // mu in [sqrt(Z_Fre/d), sqrt(Z_Rayl/d)], step chosen so the induced
        // range grid at theta = 0 has spacing <= range_step
        static MuGrid for_array(const ArrayConfig &cfg, double range_step = 0.05);

        std::span<const double> values() const { return mu_; }
        std::size_t n_antennas() const { return n_; }
        std::size_t size() const { return mu_.size(); }

        // L(mu_i, a) using the cached denominator
        double ratio(std::size_t i, double a) const;

    private:
        std::vector<double> mu_;
        std::vector<double> denom_;
        std::size_t n_;
    };

    struct Mu0Solution
    {
        double mu0;
        double residual; // |L(mu0, a) - threshold|
        std::size_t index;
    };

    // Grid point minimising |L(mu, a) - threshold|; ties go to the smaller mu.
    Mu0Solution solve_mu0(double a, double threshold, std::size_t n_antennas, const MuGrid &grid);
} // namespace nfbt

#endif
