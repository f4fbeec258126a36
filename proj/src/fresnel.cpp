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

#include "nfbt/fresnel.hpp"
#include "nfbt/kernels.hpp"

#include <limits>

namespace nfbt
{
    namespace
    {
        constexpr double series_limit = 1.5;
        constexpr double asymptotic_limit = 1e8;
        constexpr int max_iterations = 500;
        constexpr double eps = std::numeric_limits<double>::epsilon();

        // cos and sin of pi x^2 / 2 with x^2 reduced modulo 4 before scaling,
        // so the phase stays accurate for large |x|
        void half_pi_square_phase(double x, double &cos_out, double &sin_out)
        {
            const double hi = x * x;
            const double lo = std::fma(x, x, -hi);
            const double t = std::fmod(hi, 4.0) + lo;
            const double phase = 0.5 * pi * t;
            cos_out = std::cos(phase);
            sin_out = std::sin(phase);
        }

        FresnelPair fresnel_series(double ax)
        {
            // C = sum (-1)^k (pi/2)^{2k} x^{4k+1} / ((2k)! (4k+1))
            // S = sum (-1)^k (pi/2)^{2k+1} x^{4k+3} / ((2k+1)! (4k+3))
            // Both come from the single sequence term_k = (pi x^2 / 2)^k x / k!
            const double fact = 0.5 * pi * ax * ax;
            double sum_c = ax, sum_s = 0.0;
            double term = ax;
            double sign_c = 1.0, sign_s = 1.0;
            for (int k = 1; k < max_iterations; ++k)
            {
                term *= fact / double(k);
                const double contrib = term / double(2 * k + 1);
                if (k % 2 == 1)
                {
                    sum_s += sign_s * contrib;
                    sign_s = -sign_s;
                }
                else
                {
                    sign_c = -sign_c;
                    sum_c += sign_c * contrib;
                }
                if (term < eps * std::abs(sum_c) * 1e-2)
                    return {sum_c, sum_s};
            }
            throw NumericError("fresnel: power series did not converge");
        }

        FresnelPair fresnel_continued_fraction(double ax)
        {
            // Modified Lentz evaluation of the erfc continued fraction.
            const double pix2 = pi * ax * ax;
            const double tiny = 1e-300;
            cdouble b(1.0, -pix2);
            cdouble c(1.0 / tiny, 0.0);
            cdouble d = 1.0 / b;
            cdouble h = d;
            int n = -1;
            int k = 2;
            for (; k < max_iterations; ++k)
            {
                n += 2;
                const double a = -double(n) * double(n + 1);
                b += 4.0;
                d = 1.0 / (a * d + b);
                c = b + a / c;
                const cdouble del = c * d;
                h *= del;
                if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
                    break;
            }
            if (k >= max_iterations)
                throw NumericError("fresnel: continued fraction did not converge");
            h *= cdouble(ax, -ax);
            double cs = 0.0, sn = 0.0;
            half_pi_square_phase(ax, cs, sn);
            const cdouble v = cdouble(0.5, 0.5) * (1.0 - cdouble(cs, sn) * h);
            return {v.real(), v.imag()};
        }

        // C = 1/2 + f sin - g cos, S = 1/2 - f cos - g sin with the leading
        // terms of f and g; the dropped terms are below 1e-40 past the limit
        FresnelPair fresnel_asymptotic(double ax)
        {
            if (!std::isfinite(ax * ax))
                return {0.5, 0.5}; // oscillation amplitude under 1e-154
            double cs = 0.0, sn = 0.0;
            half_pi_square_phase(ax, cs, sn);
            const double f = 1.0 / (pi * ax);
            const double g = f / (pi * ax * ax);
            return {0.5 + f * sn - g * cs, 0.5 - f * cs - g * sn};
        }
    } // namespace

    FresnelPair fresnel(double x)
    {
        if (!std::isfinite(x))
            throw InvalidArgument("fresnel: non-finite argument");
        const double ax = std::abs(x);
        FresnelPair r;
        if (ax < 1e-154)
            r = {ax, 0.0};
        else if (ax <= series_limit)
            r = fresnel_series(ax);
        else if (ax <= asymptotic_limit)
            r = fresnel_continued_fraction(ax);
        else
            r = fresnel_asymptotic(ax);
        if (x < 0.0)
            r = {-r.c, -r.s};
        return r;
    }

    double fresnel_c(double x) { return fresnel(x).c; }
    double fresnel_s(double x) { return fresnel(x).s; }

    double mu_from_range(const ArrayConfig &cfg, double angle, double range)
    {
        require(range > 0.0, "mu_from_range: range must be > 0");
        require(std::abs(angle) < 1.0, "mu_from_range: |angle| must be < 1");
        return std::sqrt(range / (cfg.spacing() * (1.0 - angle * angle)));
    }

    double range_from_mu(const ArrayConfig &cfg, double angle, double mu)
    {
        return mu * mu * cfg.spacing() * (1.0 - angle * angle);
    }

    MuA to_mu_a(const ArrayConfig &cfg, const UserLocation &loc, double phi)
    {
        loc.validate();
        return {mu_from_range(cfg, loc.spatial_angle, loc.range), loc.spatial_angle - phi};
    }

    double beam_power_ratio_exact(const ArrayConfig &cfg, const UserLocation &loc, double phi)
    {
        const BeamformingVector b = near_steering(cfg, loc);
        const double num = std::norm(b.inner(far_steering(cfg, phi)));
        const double den = std::norm(b.inner(far_steering(cfg, loc.spatial_angle)));
        if (!(den >= 1e-30))
            throw NumericError("beam_power_ratio_exact: vanishing reference gain");
        return num / den;
    }

    namespace
    {
        double approx_numerator(double mu, double a, std::size_t n_antennas)
        {
            const double half = double(n_antennas) / (2.0 * mu);
            const FresnelPair plus = fresnel(a * mu + half);
            const FresnelPair minus = fresnel(a * mu - half);
            const double dc = plus.c - minus.c;
            const double ds = plus.s - minus.s;
            return dc * dc + ds * ds;
        }

        double approx_denominator(double mu, std::size_t n_antennas)
        {
            const FresnelPair f = fresnel(double(n_antennas) / (2.0 * mu));
            return 4.0 * (f.c * f.c + f.s * f.s);
        }
    } // namespace

    double beam_power_ratio_approx(MuA mu_a, std::size_t n_antennas)
    {
        require(mu_a.mu > 0.0, "beam_power_ratio_approx: mu must be > 0");
        return approx_numerator(mu_a.mu, mu_a.a, n_antennas) / approx_denominator(mu_a.mu, n_antennas);
    }

    double solve_a0(double mu, double threshold, std::size_t n_antennas)
    {
        require(mu > 0.0, "solve_a0: mu must be > 0");
        require(threshold > 0.0 && threshold < 1.0, "solve_a0: threshold must lie in (0, 1)");

        const double den = approx_denominator(mu, n_antennas);
        const auto excess = [&](double a) { return approx_numerator(mu, a, n_antennas) / den - threshold; };

        // Bracket the first downward crossing with a step well inside the
        // narrowest (far-field) main lobe, then bisect.
        const double a_max = 2.0;
        const double step = 0.125 / double(n_antennas);
        double lo = 0.0;
        double hi = -1.0;
        for (double a = step; a <= a_max + 0.5 * step; a += step)
        {
            const double at = std::min(a, a_max);
            if (excess(at) < 0.0)
            {
                hi = at;
                break;
            }
            lo = at;
        }
        if (hi < 0.0)
            throw NoCrossing("solve_a0: L(mu, a) never drops below the threshold on (0, 2]");

        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (excess(mid) >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
    }

    MuGrid::MuGrid(double mu_min, double mu_max, double step, std::size_t n_antennas) : n_(n_antennas)
    {
        require(mu_min > 0.0 && mu_max >= mu_min, "MuGrid: need 0 < mu_min <= mu_max");
        require(step > 0.0, "MuGrid: step must be > 0");
        const auto count = std::size_t(std::floor((mu_max - mu_min) / step + 1e-9)) + 1;
        mu_.reserve(count + 1);
        for (std::size_t i = 0; i < count; ++i)
            mu_.push_back(mu_min + double(i) * step);
        if (mu_max - mu_.back() > 1e-9 * step)
            mu_.push_back(mu_max);
        denom_.reserve(mu_.size());
        for (double mu : mu_)
            denom_.push_back(approx_denominator(mu, n_));
    }

    MuGrid MuGrid::for_array(const ArrayConfig &cfg, double range_step)
    {
        require(range_step > 0.0, "MuGrid::for_array: range step must be > 0");
        const double d = cfg.spacing();
        const double mu_min = std::sqrt(cfg.fresnel_dist() / d);
        const double mu_max = std::sqrt(cfg.rayleigh_dist() / d);
        // dr = 2 mu d dmu at theta = 0; bound it at the top of the grid
        const double step = range_step / (2.0 * mu_max * d);
        return MuGrid(mu_min, mu_max, step, cfg.n_antennas());
    }

    double MuGrid::ratio(std::size_t i, double a) const
    {
        return approx_numerator(mu_[i], a, n_) / denom_[i];
    }

    Mu0Solution solve_mu0(double a, double threshold, std::size_t n_antennas, const MuGrid &grid)
    {
        require(grid.size() > 0, "solve_mu0: empty mu grid");
        require(threshold > 0.0 && threshold < 1.0, "solve_mu0: threshold must lie in (0, 1)");
        require(grid.n_antennas() == n_antennas, "solve_mu0: grid built for a different array size");

        Mu0Solution best{grid.values()[0], std::numeric_limits<double>::infinity(), 0};
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const double residual = std::abs(grid.ratio(i, a) - threshold);
            if (residual < best.residual)
                best = {grid.values()[i], residual, i};
        }
        return best;
    }
} // namespace nfbt
