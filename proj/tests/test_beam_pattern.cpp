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

#include "nfbt/beam_pattern.hpp"
#include "nfbt/fresnel.hpp"

#include <doctest.h>

using namespace nfbt;

namespace
{
    // [left, right] of {omega : g(omega) >= thr * ref} on a dense grid, as a hull
    std::pair<double, double> oracle_hull(const ArrayConfig &cfg, double theta, double r, double ref, double thr,
                                          double step)
    {
        // dense near the user angle; a coarse pass confirms nothing qualifies farther out
        constexpr double near = 0.25;
        double lo = 2.0, hi = -2.0;
        for (long i = 0;; ++i)
        {
            const double w = theta - near + double(i) * step;
            if (w > theta + near)
                break;
            if (w >= -1.0 && w <= 1.0 && oracle::pattern_gain(cfg, theta, r, w) >= thr * ref)
                lo = std::min(lo, w), hi = std::max(hi, w);
        }
        for (double w = -1.0; w <= 1.0; w += 1e-3)
            if (std::abs(w - theta) > near)
                CHECK(oracle::pattern_gain(cfg, theta, r, w) < thr * ref);
        return {lo, hi};
    }
} // namespace

TEST_CASE("beam pattern gain")
{
    const ArrayConfig cfg(256, 30e9);
    const BeamPattern bp(cfg, {-0.3, 7.5});
    for (double w = -1.0; w <= 1.0; w += 0.0137)
        CHECK(std::abs(bp.gain(w) - oracle::pattern_gain(cfg, -0.3, 7.5, w)) < 1e-12);
    CHECK(bp.gain(-0.3) <= 1.0);
    const BeamPattern far(cfg, {0.2, 1e7});
    CHECK(far.gain(0.2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("scan pattern covers [-1, 1]")
{
    const ArrayConfig cfg(64, 30e9);
    const auto s = scan_pattern(cfg, {0.0, 3.0}, 0.01);
    REQUIRE(s.size() == 201);
    CHECK(s.front().first == -1.0);
    CHECK(s.back().first == doctest::Approx(1.0));
    CHECK_THROWS_AS(scan_pattern(cfg, {0.0, 3.0}, 0.0), InvalidArgument);
}

TEST_CASE("angular support agrees with a dense-scan hull")
{
    const ArrayConfig cfg(256, 30e9);
    for (double theta : {0.0, 0.5, -0.7})
        for (double r : {9.0, 25.0})
        {
            const double step = 2e-5;
            const AngularSupport s = angular_support_continuous(cfg, {theta, r}, 0.5, 1e-4);
            const SurrogateSupport ss = surrogate_support_continuous(cfg, {theta, r}, 0.5, 1e-4);
            const double g_user = oracle::pattern_gain(cfg, theta, r, theta);
            CHECK(ss.reference_gain == doctest::Approx(g_user).epsilon(1e-10));
            CHECK(s.reference_gain >= g_user);

            const auto [lo, hi] = oracle_hull(cfg, theta, r, ss.reference_gain, 0.5, step);
            CAPTURE(theta);
            CAPTURE(r);
            CHECK(std::abs(ss.left - lo) <= step);
            CHECK(std::abs(ss.right - hi) <= step);
            const auto [plo, phi] = oracle_hull(cfg, theta, r, s.reference_gain, 0.5, step);
            CHECK(std::abs(s.left - plo) <= step);
            CHECK(std::abs(s.right - phi) <= step);

            // edges sit on the threshold crossing
            CHECK(oracle::pattern_gain(cfg, theta, r, ss.left) == doctest::Approx(0.5 * g_user).epsilon(1e-6));
            CHECK(oracle::pattern_gain(cfg, theta, r, ss.right) == doctest::Approx(0.5 * g_user).epsilon(1e-6));
        }
}

TEST_CASE("contiguous region never exceeds the hull")
{
    const ArrayConfig cfg(256, 30e9);
    for (double r : {10.0, 12.0, 16.0})
    {
        const auto hull = surrogate_support_continuous(cfg, {0.5, r}, 0.5, 1e-4);
        const auto piece = surrogate_support_continuous(cfg, {0.5, r}, 0.5, 1e-4, SupportRegion::Contiguous);
        CHECK(piece.left >= hull.left - 1e-12);
        CHECK(piece.right <= hull.right + 1e-12);
        CHECK(piece.left <= 0.5);
        CHECK(piece.right >= 0.5);
    }
}

TEST_CASE("support width is symmetric in the user angle")
{
    const ArrayConfig cfg(256, 30e9);
    for (double r : {8.0, 15.0, 40.0})
    {
        const double a = surrogate_support_continuous(cfg, {0.5, r}, 0.5, 1e-4).width();
        const double b = surrogate_support_continuous(cfg, {-0.5, r}, 0.5, 1e-4).width();
        CHECK(a == doctest::Approx(b).epsilon(1e-8));
    }
}

TEST_CASE("surrogate width follows the approximation crossing")
{
    const ArrayConfig cfg(256, 30e9);
    for (double r : {10.0, 20.0, 50.0})
    {
        const double w = surrogate_support_continuous(cfg, {0.0, r}, 0.5, 1e-4).width();
        const double a0 = solve_a0(mu_from_range(cfg, 0.0, r), 0.5, 256);
        CHECK(w == doctest::Approx(2.0 * a0).epsilon(0.01));
    }
}

TEST_CASE("width curve")
{
    const ArrayConfig cfg(256, 30e9);
    const std::vector<double> ranges{8.0, 12.0, 20.0, 40.0};
    const auto curve = support_width_curve(cfg, 0.0, ranges, 0.5, 1e-4);
    REQUIRE(curve.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(curve[i].range == ranges[i]);
        CHECK(curve[i].width == surrogate_support_continuous(cfg, {0.0, ranges[i]}, 0.5, 1e-4).width());
    }
    CHECK_THROWS_AS(support_width_curve(cfg, 0.0, {400.0}, 0.5, 1e-4), InvalidArgument);
}

TEST_CASE("flattest window")
{
    const std::vector<WidthPoint> curve{{1, 10}, {2, 8}, {3, 7}, {4, 6.9}, {5, 6.86}, {6, 6.8}, {7, 6.0}};
    CHECK(flattest_window(curve, 2.0) == 4.0);
    CHECK(flattest_window(curve, 6.0) == 1.0);
    CHECK(flattest_window(curve, 1.0) == 4.0);
    const std::vector<WidthPoint> flat{{1, 1}, {2, 1}, {3, 1}};
    CHECK(flattest_window(flat, 1.0) == 1.0);
    CHECK_THROWS_AS(flattest_window(curve, 100.0), InvalidArgument);
}
