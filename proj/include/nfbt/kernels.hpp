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

#ifndef NFBT_KERNELS_HPP
#define NFBT_KERNELS_HPP

#include "nfbt/common.hpp"

#include <cstddef>
#include <span>

// Complex inner products written on real/imag parts; std::complex operator*
// goes through the Annex G NaN-recovery path, which does not vectorise.
namespace nfbt::kernels
{
    // sum_n x_n * y_n
    inline cdouble dot(std::span<const cdouble> x, std::span<const cdouble> y)
    {
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n)
        {
            const double a = x[n].real(), b = x[n].imag();
            const double c = y[n].real(), d = y[n].imag();
            re += a * c - b * d;
            im += a * d + b * c;
        }
        return {re, im};
    }

    // sum_n conj(x_n) * y_n
    inline cdouble dot_conj(std::span<const cdouble> x, std::span<const cdouble> y)
    {
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n)
        {
            const double a = x[n].real(), b = x[n].imag();
            const double c = y[n].real(), d = y[n].imag();
            re += a * c + b * d;
            im += a * d - b * c;
        }
        return {re, im};
    }
} // namespace nfbt::kernels

#endif
