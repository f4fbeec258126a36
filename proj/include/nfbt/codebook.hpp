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

#ifndef NFBT_CODEBOOK_HPP
#define NFBT_CODEBOOK_HPP

#include "nfbt/array_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nfbt
{
    enum class CodebookKind : std::uint8_t
    {
        Dft = 0,
        Polar = 1
    };

    struct CodebookEntry
    {
        BeamformingVector beam;
        double angle;                // spatial-angle label
        std::optional<double> range; // m; empty for far-field codewords
    };

    // Ordered list of codewords.
    // DFT: N entries ascending in angle.
    // Polar: N*S entries, ascending in angle, then s = 1..S (descending range).
    struct Codebook
    {
        CodebookKind kind = CodebookKind::Dft;
        std::size_t n_antennas = 0;
        std::size_t n_ranges = 0; // S; 0 for DFT
        std::vector<CodebookEntry> entries;

        std::size_t size() const { return entries.size(); }
        const CodebookEntry &operator[](std::size_t i) const { return entries[i]; }

        // Polar entry for angle index n and range index s (0-based, s = 0 is the largest range)
        const CodebookEntry &polar(std::size_t n, std::size_t s) const { return entries[n * n_ranges + s]; }
    };

    // Polar-domain range sampling. alpha_delta = N^2 d^2 / (2 lambda beta_delta^2).
    struct PolarSamplingParams
    {
        double beta_delta = 1.4;
        std::size_t n_ranges = 5;

        double alpha_delta(const ArrayConfig &cfg) const;
        void validate() const;
    };

    // DFT grid angle theta_n = (2n - N + 1) / N, n = 0..N-1
    double dft_angle(std::size_t n_antennas, std::size_t n);

    // Range label r_{s,n} = alpha_delta (1 - theta_n^2) / s, s = 1..S
    double polar_range(const ArrayConfig &cfg, const PolarSamplingParams &params, double angle, std::size_t s);

    Codebook build_dft_codebook(const ArrayConfig &cfg);
    Codebook build_polar_codebook(const ArrayConfig &cfg, const PolarSamplingParams &params);

    enum class Scheme
    {
        AswJe,
        PrmseJe,
        Exhaustive,
        TwoPhase,
        FarField,
        PerfectCsi
    };

    std::string_view scheme_name(Scheme scheme);
    Scheme parse_scheme(std::string_view name); // throws InvalidArgument on unknown names

    // Training symbols spent by a scheme:
    // exhaustive N*S, two-phase N+K*S, ASW-JE / prMSE-JE N+K, far-field N, perfect CSI 0
    std::size_t training_overhead(Scheme scheme, std::size_t n_antennas, std::size_t n_candidates,
                                  std::size_t n_ranges);

    // Little-endian cache file:
    //   "NFCB" | u32 version | u8 kind | u32 N | u32 S
    //   per entry: f64 angle | f64 range (NaN if none) | N x (f64 re, f64 im)
    inline constexpr std::uint32_t codebook_cache_version = 1;

    std::vector<std::uint8_t> encode_codebook(const Codebook &cb);
    Codebook decode_codebook(std::span<const std::uint8_t> bytes);

    void write_codebook_cache(const std::string &path, const Codebook &cb);
    Codebook read_codebook_cache(const std::string &path);
} // namespace nfbt

#endif
