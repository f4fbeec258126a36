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

#include "oracles.hpp"

#include "nfbt/fresnel.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace nfbt;

namespace
{
    // Fresnel integrals at sorted points by marching quadrature from 0
    std::vector<oracle::cd> fresnel_march(const std::vector<double> &sorted_abs)
    {
        static const oracle::GaussLegendre gl(12);
        std::vector<oracle::cd> out;
        oracle::cd acc = 0.0;
        double at = 0.0;
        for (double x : sorted_abs)
        {
            acc += gl.integrate([](double t) { return std::polar(1.0, 0.5 * oracle::pi * t * t); }, at, x, 0.004);
            at = x;
            out.push_back(acc);
        }
        return out;
    }
} // namespace

TEST_CASE("Fresnel integrals against quadrature")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    std::vector<double> xs(1000);
    for (double &x : xs)
        x = dist(rng);
    std::vector<double> mags(xs.size());
    std::transform(xs.begin(), xs.end(), mags.begin(), [](double x) { return std::abs(x); });
    std::sort(mags.begin(), mags.end());
    const auto ref = fresnel_march(mags);

    double worst = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i)
    {
        const FresnelPair f = fresnel(mags[i]);
        worst = std::max({worst, std::abs(f.c - ref[i].real()), std::abs(f.s - ref[i].imag())});
    }
    CHECK(worst <= 1e-9);
    MESSAGE("max |error| over 1000 points: " << worst);

    // odd symmetry carries the check to the negative samples
    for (double x : xs)
    {
        const FresnelPair p = fresnel(x), q = fresnel(-x);
        CHECK(p.c == -q.c);
        CHECK(p.s == -q.s);
    }
}

TEST_CASE("Fresnel integrals near the series/continued-fraction switch")
{
    std::vector<double> xs;
    for (double x = 1.30; x <= 1.70; x += 0.01)
        xs.push_back(x);
    const auto ref = fresnel_march(xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        CHECK(std::abs(fresnel_c(xs[i]) - ref[i].real()) < 1e-12);
        CHECK(std::abs(fresnel_s(xs[i]) - ref[i].imag()) < 1e-12);
    }
}

TEST_CASE("Fresnel integral limits")
{
    CHECK(fresnel_c(0.0) == 0.0);
    CHECK(fresnel_s(0.0) == 0.0);
    // leading Taylor terms: C ~ x, S ~ pi x^3 / 6
    CHECK(fresnel_c(1e-4) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(fresnel_s(1e-4) == doctest::Approx(oracle::pi * 1e-12 / 6.0).epsilon(1e-10));
    // two leading asymptotic terms; the next one is O(x^-5)
    for (double x : {250.3, 1000.7, 9999.1})
    {
        const double arg = 0.5 * oracle::pi * x * x;
        const double f = 1.0 / (oracle::pi * x), g = 1.0 / (oracle::pi * oracle::pi * x * x * x);
        CHECK(std::abs(fresnel_c(x) - (0.5 + f * std::sin(arg) - g * std::cos(arg))) < 1e-11);
        CHECK(std::abs(fresnel_s(x) - (0.5 - f * std::cos(arg) - g * std::sin(arg))) < 1e-11);
    }
    // both sides of the switch to the asymptotic branch agree
    CHECK(std::abs(fresnel_c(1e8) - fresnel_c(std::nextafter(1e8, 2e8))) < 1e-8);
    CHECK(std::abs(fresnel_c(3e9) - 0.5) < 1.1e-10);
    CHECK(fresnel_c(1e300) == 0.5);
    CHECK(fresnel_s(-1e300) == -0.5);
    CHECK_THROWS_AS(fresnel(std::nan("")), InvalidArgument);
}

TEST_CASE("reduced coordinates")
{
    const ArrayConfig cfg(256, 30e9);
    const double d = cfg.spacing();
    const MuA m = to_mu_a(cfg, {0.6, 10.0}, 0.55);
    CHECK(m.mu == doctest::Approx(std::sqrt(10.0 / (d * (1.0 - 0.36)))).epsilon(1e-14));
    CHECK(m.a == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(range_from_mu(cfg, 0.6, mu_from_range(cfg, 0.6, 17.5)) == doctest::Approx(17.5).epsilon(1e-14));
}

namespace
{
    // max |G - L| over |a| <= a0 with G from the oracle
    double approx_error(const ArrayConfig &cfg, double theta, double r)
    {
        const double a0 = solve_a0(mu_from_range(cfg, theta, r), 0.5, 256);
        const double den = oracle::pattern_gain(cfg, theta, r, theta);
        double worst = 0.0;
        for (double a = -a0; a <= a0; a += a0 / 40)
        {
            const double phi = theta - a;
            const double exact = oracle::pattern_gain(cfg, theta, r, phi) / den;
            CHECK(beam_power_ratio_exact(cfg, {theta, r}, phi) == doctest::Approx(exact).epsilon(1e-9).scale(1e-9));
            worst = std::max(worst, std::abs(beam_power_ratio_approx(to_mu_a(cfg, {theta, r}, phi), 256) - exact));
        }
        return worst;
    }
} // namespace

TEST_CASE("power-ratio approximation tracks the exact ratio at broadside")
{
    const ArrayConfig cfg(256, 30e9);
    for (double r : {10.0, 20.0, 60.0})
    {
        CAPTURE(r);
        CHECK(approx_error(cfg, 0.0, r) < 0.05);
    }
}

TEST_CASE("off broadside the approximation error shrinks with range")
{
    // the neglected cubic phase term grows with theta (1 - theta^2) / r^2
    const ArrayConfig cfg(256, 30e9);
    for (double theta : {0.5, -0.5})
    {
        const double e10 = approx_error(cfg, theta, 10.0), e20 = approx_error(cfg, theta, 20.0),
                     e60 = approx_error(cfg, theta, 60.0);
        CHECK(e10 > e20);
        CHECK(e20 > e60);
        CHECK(e60 < 0.005);
    }
}

TEST_CASE("power-ratio approximation is even in a")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> mu(10.0, 260.0), a(0.0, 1.0);
    for (int i = 0; i < 1000; ++i)
    {
        const double m = mu(rng), x = a(rng);
        CHECK(std::abs(beam_power_ratio_approx({m, x}, 256) - beam_power_ratio_approx({m, -x}, 256)) <= 1e-10);
    }
    CHECK(beam_power_ratio_approx({50.0, 0.0}, 256) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("crossing point of the approximation")
{
    for (double mu : {40.0, 60.0, 120.0, 250.0})
    {
        const double a0 = solve_a0(mu, 0.5, 256);
        CHECK(a0 > 0.0);
        CHECK(beam_power_ratio_approx({mu, a0}, 256) == doctest::Approx(0.5).epsilon(1e-6));
        // smallest crossing: L stays above on a fine grid below a0
        for (double a = 0.0; a < a0; a += a0 / 200)
            CHECK(beam_power_ratio_approx({mu, a}, 256) >= 0.5 - 1e-9);
    }
    CHECK_THROWS_AS(solve_a0(50.0, 0.0, 256), InvalidArgument);
    CHECK_THROWS_AS(solve_a0(50.0, 1.0, 256), InvalidArgument);
}

TEST_CASE("mu grid")
{
    const ArrayConfig cfg(256, 30e9);
    const MuGrid g = MuGrid::for_array(cfg, 0.05);
    const double d = cfg.spacing();
    REQUIRE(g.size() > 100);
    CHECK(g.values().front() == doctest::Approx(std::sqrt(cfg.fresnel_dist() / d)));
    CHECK(g.values().back() == doctest::Approx(std::sqrt(cfg.rayleigh_dist() / d)));
    double worst_spacing = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i)
    {
        const double r0 = g.values()[i - 1] * g.values()[i - 1] * d, r1 = g.values()[i] * g.values()[i] * d;
        worst_spacing = std::max(worst_spacing, r1 - r0);
    }
    CHECK(worst_spacing <= 0.05 + 1e-12);
    for (std::size_t i : {std::size_t(0), g.size() / 2, g.size() - 1})
        for (double a : {0.0, 0.01, -0.04})
            CHECK(g.ratio(i, a) == doctest::Approx(beam_power_ratio_approx({g.values()[i], a}, 256)).epsilon(1e-13));
}

TEST_CASE("mu search matches brute force")
{
    const MuGrid g(20.0, 200.0, 0.5, 256);
    for (double a : {0.01, 0.03, 0.08})
    {
        std::size_t best = 0;
        double best_res = 1e300;
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            const double res = std::abs(beam_power_ratio_approx({g.values()[i], a}, 256) - 0.5);
            if (res < best_res)
                best_res = res, best = i;
        }
        const Mu0Solution s = solve_mu0(a, 0.5, 256, g);
        CHECK(s.index == best);
        CHECK(s.mu0 == g.values()[best]);
        CHECK(s.residual == doctest::Approx(best_res).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_mu0(0.01, 0.5, 128, g), InvalidArgument);
}
