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

// Independent reference implementations used by the tests. Nothing here calls
// into the library beyond ArrayConfig accessors.

#ifndef NFBT_TESTS_ORACLES_HPP
#define NFBT_TESTS_ORACLES_HPP

#include "nfbt/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle
{
    using cd = std::complex<double>;
    inline constexpr double pi = 3.14159265358979323846;

    // Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n
    struct GaussLegendre
    {
        std::vector<double> x, w;

        explicit GaussLegendre(int n)
        {
            x.resize(n);
            w.resize(n);
            for (int i = 0; i < n; ++i)
            {
                double z = std::cos(pi * (i + 0.75) / (n + 0.5));
                double dp = 0.0;
                for (int it = 0; it < 100; ++it)
                {
                    double p0 = 1.0, p1 = z;
                    for (int k = 2; k <= n; ++k)
                    {
                        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (z * p1 - p0) / (z * z - 1.0);
                    const double dz = p1 / dp;
                    z -= dz;
                    if (std::abs(dz) < 1e-16)
                        break;
                }
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
            }
        }

        // integral of f over [a, b], split into panels no wider than h
        template <class F> cd integrate(F &&f, double a, double b, double h) const
        {
            const int panels = std::max(1, int(std::ceil(std::abs(b - a) / h)));
            const double pw = (b - a) / panels;
            cd sum = 0.0;
            for (int p = 0; p < panels; ++p)
            {
                const double mid = a + (p + 0.5) * pw;
                cd part = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                    part += w[i] * f(mid + 0.5 * pw * x[i]);
                sum += 0.5 * pw * part;
            }
            return sum;
        }
    };

    // distance from element n to the user, straight from the law of cosines
    inline double element_distance(const nfbt::ArrayConfig &cfg, double theta, double r, std::size_t n)
    {
        const double delta = (double(n) - 0.5 * double(cfg.n_antennas() - 1)) * cfg.spacing();
        return std::sqrt(r * r + delta * delta - 2.0 * r * delta * theta);
    }

    // near-field steering vector b(theta, r), unit norm
    inline std::vector<cd> steering(const nfbt::ArrayConfig &cfg, double theta, double r)
    {
        const std::size_t N = cfg.n_antennas();
        std::vector<cd> b(N);
        for (std::size_t n = 0; n < N; ++n)
        {
            const double phase = 2.0 * pi * (element_distance(cfg, theta, r, n) - r) / cfg.wavelength();
            b[n] = std::polar(1.0 / std::sqrt(double(N)), phase);
        }
        return b;
    }

    // far-field beam a(phi), unit norm
    inline std::vector<cd> dft_beam(std::size_t N, double phi)
    {
        std::vector<cd> a(N);
        for (std::size_t n = 0; n < N; ++n)
            a[n] = std::polar(1.0 / std::sqrt(double(N)), -pi * double(n) * phi);
        return a;
    }

    // |x^H y|^2
    inline double gain(const std::vector<cd> &x, const std::vector<cd> &y)
    {
        cd s = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n)
            s += std::conj(x[n]) * y[n];
        return std::norm(s);
    }

    // |b^H(theta, r) a(phi)|^2
    inline double pattern_gain(const nfbt::ArrayConfig &cfg, double theta, double r, double phi)
    {
        return gain(steering(cfg, theta, r), dft_beam(cfg.n_antennas(), phi));
    }
} // namespace oracle

#endif
