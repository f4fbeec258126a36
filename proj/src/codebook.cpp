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

#include "nfbt/codebook.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace nfbt
{
    double PolarSamplingParams::alpha_delta(const ArrayConfig &cfg) const
    {
        const double N = double(cfg.n_antennas());
        const double d = cfg.spacing();
        return N * N * d * d / (2.0 * cfg.wavelength() * beta_delta * beta_delta);
    }

    void PolarSamplingParams::validate() const
    {
        require(std::isfinite(beta_delta) && beta_delta > 0.0, "PolarSamplingParams: beta_delta must be > 0");
        require(n_ranges >= 1, "PolarSamplingParams: n_ranges must be >= 1");
    }

    double dft_angle(std::size_t n_antennas, std::size_t n)
    {
        const double N = double(n_antennas);
        return (2.0 * double(n) - N + 1.0) / N;
    }

    double polar_range(const ArrayConfig &cfg, const PolarSamplingParams &params, double angle, std::size_t s)
    {
        require(s >= 1, "polar_range: s is 1-based");
        return params.alpha_delta(cfg) * (1.0 - angle * angle) / double(s);
    }

    Codebook build_dft_codebook(const ArrayConfig &cfg)
    {
        Codebook cb;
        cb.kind = CodebookKind::Dft;
        cb.n_antennas = cfg.n_antennas();
        cb.n_ranges = 0;
        cb.entries.reserve(cfg.n_antennas());
        for (std::size_t n = 0; n < cfg.n_antennas(); ++n)
        {
            const double theta = dft_angle(cfg.n_antennas(), n);
            cb.entries.push_back({far_steering(cfg, theta), theta, std::nullopt});
        }
        return cb;
    }

    Codebook build_polar_codebook(const ArrayConfig &cfg, const PolarSamplingParams &params)
    {
        params.validate();
        Codebook cb;
        cb.kind = CodebookKind::Polar;
        cb.n_antennas = cfg.n_antennas();
        cb.n_ranges = params.n_ranges;
        cb.entries.reserve(cfg.n_antennas() * params.n_ranges);
        for (std::size_t n = 0; n < cfg.n_antennas(); ++n)
        {
            const double theta = dft_angle(cfg.n_antennas(), n);
            for (std::size_t s = 1; s <= params.n_ranges; ++s)
            {
                const double r = polar_range(cfg, params, theta, s);
                cb.entries.push_back({near_steering(cfg, {theta, r}), theta, r});
            }
        }
        return cb;
    }

    std::string_view scheme_name(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::AswJe:
            return "asw";
        case Scheme::PrmseJe:
            return "prmse";
        case Scheme::Exhaustive:
            return "exhaustive";
        case Scheme::TwoPhase:
            return "twophase";
        case Scheme::FarField:
            return "farfield";
        case Scheme::PerfectCsi:
            return "perfect";
        }
        throw InvalidArgument("scheme_name: unknown scheme");
    }

    Scheme parse_scheme(std::string_view name)
    {
        for (Scheme s : {Scheme::AswJe, Scheme::PrmseJe, Scheme::Exhaustive, Scheme::TwoPhase, Scheme::FarField,
                         Scheme::PerfectCsi})
            if (scheme_name(s) == name)
                return s;
        throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
    }

    std::size_t training_overhead(Scheme scheme, std::size_t n_antennas, std::size_t n_candidates,
                                  std::size_t n_ranges)
    {
        require(n_antennas >= 1 && n_candidates >= 1 && n_ranges >= 1, "training_overhead: N, K, S must be >= 1");
        switch (scheme)
        {
        case Scheme::Exhaustive:
            return n_antennas * n_ranges;
        case Scheme::TwoPhase:
            return n_antennas + n_candidates * n_ranges;
        case Scheme::AswJe:
        case Scheme::PrmseJe:
            return n_antennas + n_candidates;
        case Scheme::FarField:
            return n_antennas;
        case Scheme::PerfectCsi:
            return 0;
        }
        throw InvalidArgument("training_overhead: unknown scheme");
    }

    // ---- cache file ----

    namespace
    {
        constexpr char magic[4] = {'N', 'F', 'C', 'B'};

        template <typename T>
        void put_le(std::vector<std::uint8_t> &out, T value)
        {
            using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                         std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
            const U bits = std::bit_cast<U>(value);
            for (std::size_t i = 0; i < sizeof(U); ++i)
                out.push_back(std::uint8_t((bits >> (8 * i)) & 0xFFu));
        }

        class Reader
        {
        public:
            explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

            template <typename T>
            T get()
            {
                using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                             std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
                if (pos_ + sizeof(U) > bytes_.size())
                    throw InvalidArgument("codebook cache: truncated file");
                U bits = 0;
                for (std::size_t i = 0; i < sizeof(U); ++i)
                    bits |= U(bytes_[pos_ + i]) << (8 * i);
                pos_ += sizeof(U);
                return std::bit_cast<T>(bits);
            }

            bool exhausted() const { return pos_ == bytes_.size(); }

        private:
            std::span<const std::uint8_t> bytes_;
            std::size_t pos_ = 0;
        };
    } // namespace

    std::vector<std::uint8_t> encode_codebook(const Codebook &cb)
    {
        std::vector<std::uint8_t> out;
        out.reserve(17 + cb.size() * (16 + 16 * cb.n_antennas));
        out.insert(out.end(), std::begin(magic), std::end(magic));
        put_le(out, codebook_cache_version);
        put_le(out, std::uint8_t(cb.kind));
        put_le(out, std::uint32_t(cb.n_antennas));
        put_le(out, std::uint32_t(cb.n_ranges));
        for (const CodebookEntry &e : cb.entries)
        {
            require(e.beam.size() == cb.n_antennas, "encode_codebook: entry size mismatch");
            put_le(out, e.angle);
            put_le(out, e.range ? *e.range : std::numeric_limits<double>::quiet_NaN());
            for (const cdouble &w : e.beam.weights())
            {
                put_le(out, w.real());
                put_le(out, w.imag());
            }
        }
        return out;
    }

    Codebook decode_codebook(std::span<const std::uint8_t> bytes)
    {
        if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0)
            throw InvalidArgument("codebook cache: bad magic");
        Reader in(bytes.subspan(4));
        const auto version = in.get<std::uint32_t>();
        if (version != codebook_cache_version)
            throw InvalidArgument("codebook cache: unsupported version " + std::to_string(version));
        const auto kind = in.get<std::uint8_t>();
        if (kind > std::uint8_t(CodebookKind::Polar))
            throw InvalidArgument("codebook cache: unknown kind");

        Codebook cb;
        cb.kind = CodebookKind(kind);
        cb.n_antennas = in.get<std::uint32_t>();
        cb.n_ranges = in.get<std::uint32_t>();
        const std::size_t count = cb.kind == CodebookKind::Dft ? cb.n_antennas : cb.n_antennas * cb.n_ranges;
        require(cb.n_antennas >= 1, "codebook cache: empty codebook");

        cb.entries.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            const double angle = in.get<double>();
            const double range = in.get<double>();
            std::vector<cdouble> w(cb.n_antennas);
            for (cdouble &x : w)
            {
                const double re = in.get<double>();
                const double im = in.get<double>();
                x = cdouble(re, im);
            }
            cb.entries.push_back({BeamformingVector::from_weights(std::move(w)), angle,
                                  std::isnan(range) ? std::nullopt : std::optional<double>(range)});
        }
        if (!in.exhausted())
            throw InvalidArgument("codebook cache: trailing bytes");
        return cb;
    }

    void write_codebook_cache(const std::string &path, const Codebook &cb)
    {
        const std::vector<std::uint8_t> bytes = encode_codebook(cb);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw InvalidArgument("cannot open '" + path + "' for writing");
        f.write(reinterpret_cast<const char *>(bytes.data()), std::streamsize(bytes.size()));
        if (!f)
            throw InvalidArgument("write to '" + path + "' failed");
    }

    Codebook read_codebook_cache(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw InvalidArgument("cannot open '" + path + "'");
        const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        return decode_codebook(bytes);
    }
} // namespace nfbt
