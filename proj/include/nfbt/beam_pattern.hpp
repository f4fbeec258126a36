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

#ifndef NFBT_BEAM_PATTERN_HPP
#define NFBT_BEAM_PATTERN_HPP

#include "nfbt/array_model.hpp"

#include <utility>
#include <vector>

namespace nfbt
{
    // Normalized gain |b^H(theta_u, r_u) a(omega)|^2 of far-field beams seen by a
    // near-field user. Values lie in [0, 1].
    class BeamPattern
    {
    public:
        BeamPattern(const ArrayConfig &cfg, const UserLocation &loc);

        double gain(double omega) const;
        const UserLocation &user() const { return loc_; }

    private:
        UserLocation loc_;
        std::vector<cdouble> row_; // conj(b_n) / sqrt(N)
    };

    // Interval of spatial angles whose gain stays above threshold * reference
    struct AngularSupport
    {
        double left = 0.0;
        double right = 0.0;
        double peak = 0.0;           // angle the support was grown from
        double reference_gain = 0.0; // gain the threshold is relative to
        double threshold = 0.5;

        double width() const { return right - left; }
    };

    // Referenced to g(theta_u, r_u) rather than the scan maximum
    struct SurrogateSupport : AngularSupport
    {
    };

    // How a thresholded set with several disjoint pieces is reduced to one interval
    enum class SupportRegion
    {
        Hull,      // smallest to largest qualifying angle
        Contiguous // only the piece containing the reference angle
    };

    // Reference = maximum over the scan grid.
    AngularSupport angular_support_continuous(const ArrayConfig &cfg, const UserLocation &loc, double threshold,
                                              double scan_step, SupportRegion region = SupportRegion::Hull);

    // Reference = gain at theta_u.
    SurrogateSupport surrogate_support_continuous(const ArrayConfig &cfg, const UserLocation &loc, double threshold,
                                                  double scan_step,
                                                  SupportRegion region = SupportRegion::Hull);

    struct WidthPoint
    {
        double range;
        double width;
    };

    std::vector<WidthPoint> support_width_curve(const ArrayConfig &cfg, double angle, const std::vector<double> &ranges,
                                                double threshold, double scan_step,
                                                SupportRegion region = SupportRegion::Hull);

    // Start of the window [r0, r0 + span] over which the width changes least.
    // Candidates are the curve's own range samples; ties go to the smaller r0.
    double flattest_window(const std::vector<WidthPoint> &curve, double span);

    // (omega, gain) samples on -1, -1 + step, ..., 1
    std::vector<std::pair<double, double>> scan_pattern(const ArrayConfig &cfg, const UserLocation &loc,
                                                        double scan_step);
} // namespace nfbt

#endif
