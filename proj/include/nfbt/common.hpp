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

#ifndef NFBT_COMMON_HPP
#define NFBT_COMMON_HPP

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace nfbt
{
    using cdouble = std::complex<double>;

    // Random stream type used everywhere; always passed explicitly.
    using Rng = std::mt19937_64;

    inline constexpr double pi = 3.14159265358979323846;

    // Propagation speed in m/s. Rounded so that 30 GHz maps to a 1 cm wavelength.
    inline constexpr double speed_of_light = 3.0e8;

    // Precondition or configuration violations (bad ranges, angles, sizes)
    class InvalidArgument : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Numerical failures: vanishing denominators, missing root brackets
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Root finder could not bracket a threshold crossing
    class NoCrossing : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

    inline void require(bool condition, const std::string &message)
    {
        if (!condition)
            throw InvalidArgument(message);
    }
} // namespace nfbt

#endif
