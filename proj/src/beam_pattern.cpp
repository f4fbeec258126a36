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

#include "nfbt/beam_pattern.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace nfbt
{
    namespace
    {
        // The rotation recurrence drifts slowly; re-anchor it this often.
        constexpr std::size_t reseed_every = 32;

        // Endpoint bisection stops once the bracket is this narrow
        constexpr double endpoint_tol = 1e-9;

        std::vector<double> scan_grid(double step)
        {
            require(std::isfinite(step) && step > 0.0, "scan step must be > 0");
            const auto count = std::size_t(std::floor(2.0 / step + 1e-9)) + 1;
            std::vector<double> grid(count);
            for (std::size_t k = 0; k < count; ++k)
                grid[k] = -1.0 + double(k) * step;
            if (1.0 - grid.back() > 1e-12)
                grid.push_back(1.0);
            else
                grid.back() = 1.0;
            return grid;
        }

        void check_threshold(double threshold)
        {
            require(threshold > 0.0 && threshold < 1.0, "support threshold must lie in (0, 1)");
        }

        template <typename Gain>
        double refine_edge(const Gain &gain, double level, double inside, double outside)
        {
            while (std::abs(outside - inside) > endpoint_tol)
            {
                const double mid = 0.5 * (inside + outside);
                if (gain(mid) >= level)
                    inside = mid;
                else
                    outside = mid;
            }
            return 0.5 * (inside + outside);
        }

        // Walks from `start` in steps of `step` until the gain drops below level,
        // then bisects the last step. Returns the edge on the side given by dir.
        template <typename Gain>
        double walk_edge(const Gain &gain, double level, double start, double step, int dir)
        {
            const double limit = dir > 0 ? 1.0 : -1.0;
            double inside = start;
            for (std::size_t k = 1;; ++k)
            {
                double next = start + double(dir) * double(k) * step;
                if (dir > 0 ? next >= limit : next <= limit)
                    next = limit;
                if (gain(next) < level)
                    return refine_edge(gain, level, inside, next);
                if (next == limit)
                    return limit;
                inside = next;
            }
        }
    } // namespace

    BeamPattern::BeamPattern(const ArrayConfig &cfg, const UserLocation &loc) : loc_(loc)
    {
        const BeamformingVector b = near_steering(cfg, loc);
        const double amp = 1.0 / std::sqrt(double(cfg.n_antennas()));
        row_.resize(b.size());
        for (std::size_t n = 0; n < b.size(); ++n)
            row_[n] = std::conj(b[n]) * amp;
    }

    double BeamPattern::gain(double omega) const
    {
        // sum_n row_n exp(-j pi n omega), phasor advanced by multiplication
        const double step_re = std::cos(pi * omega);
        const double step_im = -std::sin(pi * omega);
        double acc_re = 0.0, acc_im = 0.0;
        double p_re = 1.0, p_im = 0.0;
        for (std::size_t n = 0; n < row_.size(); ++n)
        {
            if (n % reseed_every == 0 && n > 0)
            {
                const double ph = -pi * double(n) * omega;
                p_re = std::cos(ph);
                p_im = std::sin(ph);
            }
            const double a = row_[n].real(), b = row_[n].imag();
            acc_re += a * p_re - b * p_im;
            acc_im += a * p_im + b * p_re;
            const double t = p_re * step_re - p_im * step_im;
            p_im = p_re * step_im + p_im * step_re;
            p_re = t;
        }
        return acc_re * acc_re + acc_im * acc_im;
    }

    namespace
    {
        // Outermost samples at or above level; refined edges of their hull
        template <typename Gain>
        std::pair<double, double> hull_edges(const Gain &gain, const std::vector<double> &grid,
                                             const std::vector<double> &gains, double level)
        {
            std::size_t lo = 0;
            while (lo < grid.size() && gains[lo] < level)
                ++lo;
            if (lo == grid.size())
                throw NumericError("support: no scan sample reaches the threshold");
            std::size_t hi = grid.size() - 1;
            while (gains[hi] < level)
                --hi;
            const double left = lo == 0 ? grid.front() : refine_edge(gain, level, grid[lo], grid[lo - 1]);
            const double right = hi + 1 == grid.size() ? grid.back() : refine_edge(gain, level, grid[hi], grid[hi + 1]);
            return {left, right};
        }

        std::vector<double> sample(const BeamPattern &pattern, const std::vector<double> &grid)
        {
            std::vector<double> gains(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k)
                gains[k] = pattern.gain(grid[k]);
            return gains;
        }
    } // namespace

    AngularSupport angular_support_continuous(const ArrayConfig &cfg, const UserLocation &loc, double threshold,
                                              double scan_step, SupportRegion region)
    {
        check_threshold(threshold);
        const BeamPattern pattern(cfg, loc);
        const std::vector<double> grid = scan_grid(scan_step);
        const std::vector<double> gains = sample(pattern, grid);
        const auto peak = std::size_t(std::max_element(gains.begin(), gains.end()) - gains.begin());

        AngularSupport s;
        s.threshold = threshold;
        s.peak = grid[peak];
        s.reference_gain = gains[peak];
        const double level = threshold * s.reference_gain;
        const auto gain = [&](double w) { return pattern.gain(w); };

        if (region == SupportRegion::Hull)
        {
            std::tie(s.left, s.right) = hull_edges(gain, grid, gains, level);
            return s;
        }
        std::size_t lo = peak;
        while (lo > 0 && gains[lo - 1] >= level)
            --lo;
        std::size_t hi = peak;
        while (hi + 1 < grid.size() && gains[hi + 1] >= level)
            ++hi;
        s.left = lo == 0 ? grid.front() : refine_edge(gain, level, grid[lo], grid[lo - 1]);
        s.right = hi + 1 == grid.size() ? grid.back() : refine_edge(gain, level, grid[hi], grid[hi + 1]);
        return s;
    }

    SurrogateSupport surrogate_support_continuous(const ArrayConfig &cfg, const UserLocation &loc, double threshold,
                                                  double scan_step, SupportRegion region)
    {
        check_threshold(threshold);
        require(std::isfinite(scan_step) && scan_step > 0.0, "scan step must be > 0");
        const BeamPattern pattern(cfg, loc);
        const auto gain = [&](double w) { return pattern.gain(w); };

        SurrogateSupport s;
        s.threshold = threshold;
        s.peak = loc.spatial_angle;
        s.reference_gain = pattern.gain(loc.spatial_angle);
        if (!(s.reference_gain >= 1e-30))
            throw NumericError("surrogate support: vanishing reference gain");
        const double level = threshold * s.reference_gain;

        if (region == SupportRegion::Hull)
        {
            const std::vector<double> grid = scan_grid(scan_step);
            std::tie(s.left, s.right) = hull_edges(gain, grid, sample(pattern, grid), level);
            // theta_u itself always qualifies, even when it falls between samples
            s.left = std::min(s.left, s.peak);
            s.right = std::max(s.right, s.peak);
            return s;
        }
        s.left = walk_edge(gain, level, s.peak, scan_step, -1);
        s.right = walk_edge(gain, level, s.peak, scan_step, +1);
        return s;
    }

    std::vector<WidthPoint> support_width_curve(const ArrayConfig &cfg, double angle, const std::vector<double> &ranges,
                                                double threshold, double scan_step, SupportRegion region)
    {
        std::vector<WidthPoint> out;
        out.reserve(ranges.size());
        for (double r : ranges)
        {
            require(r > 0.0 && r <= cfg.rayleigh_dist() * (1.0 + 1e-12),
                    "support_width_curve: ranges must lie in (0, Z_Rayl]");
            out.push_back({r, surrogate_support_continuous(cfg, {angle, r}, threshold, scan_step, region).width()});
        }
        return out;
    }

    double flattest_window(const std::vector<WidthPoint> &curve, double span)
    {
        require(span > 0.0, "flattest_window: span must be > 0");
        require(std::is_sorted(curve.begin(), curve.end(),
                               [](const WidthPoint &a, const WidthPoint &b) { return a.range < b.range; }),
                "flattest_window: curve must be sorted by range");

        double best_start = std::numeric_limits<double>::quiet_NaN();
        double best_change = std::numeric_limits<double>::infinity();
        std::size_t j = 0;
        for (std::size_t i = 0; i < curve.size(); ++i)
        {
            const double end = curve[i].range + span;
            j = std::max(j, i);
            while (j + 1 < curve.size() && curve[j + 1].range <= end + 1e-9)
                ++j;
            if (curve[j].range < end - 1e-9)
                break; // window runs past the sampled curve
            const double change = std::abs(curve[j].width - curve[i].width);
            if (change < best_change)
            {
                best_change = change;
                best_start = curve[i].range;
            }
        }
        if (std::isnan(best_start))
            throw InvalidArgument("flattest_window: curve shorter than the window span");
        return best_start;
    }

    std::vector<std::pair<double, double>> scan_pattern(const ArrayConfig &cfg, const UserLocation &loc,
                                                        double scan_step)
    {
        const BeamPattern pattern(cfg, loc);
        std::vector<std::pair<double, double>> out;
        for (double w : scan_grid(scan_step))
            out.emplace_back(w, pattern.gain(w));
        return out;
    }
} // namespace nfbt
