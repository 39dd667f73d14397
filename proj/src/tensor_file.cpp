// SPDX-License-Identifier: Apache-2.0
//
// blocktensor - dynamic human-blockage channel tensors: simulation and analysis
// Copyright (C) 2026 The blocktensor authors
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

#include "blocktensor/tensor_file.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <unistd.h>

namespace blocktensor
{
    namespace
    {
        constexpr char magic[4] = {'B', 'M', 'T', '1'};
        constexpr std::uint32_t flag_canonical = 1u;

        template <class T>
        T to_le(T v)
        {
            if constexpr (std::endian::native == std::endian::little)
                return v;
            else
            {
                auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
                std::reverse(bytes.begin(), bytes.end());
                return std::bit_cast<T>(bytes);
            }
        }

        class Writer
        {
        public:
            template <class T>
            void put(T v)
            {
                v = to_le(v);
                const auto *p = reinterpret_cast<const char *>(&v);
                buf_.insert(buf_.end(), p, p + sizeof(T));
            }
            std::vector<char> &bytes() { return buf_; }

        private:
            std::vector<char> buf_;
        };

        class Reader
        {
        public:
            Reader(const char *data, std::size_t size) : data_(data), size_(size) {}

            template <class T>
            T get()
            {
                if (size_ - pos_ < sizeof(T))
                    throw TensorFileError(TensorFileErrc::truncated, "tensor file: header is truncated");
                T v;
                std::memcpy(&v, data_ + pos_, sizeof(T));
                pos_ += sizeof(T);
                return to_le(v);
            }
            std::size_t pos() const { return pos_; }

        private:
            const char *data_;
            std::size_t size_;
            std::size_t pos_ = 0;
        };

        std::vector<char> header_bytes(const std::vector<std::uint64_t> &sizes, const ScanConfig &cfg, double start,
                                       std::size_t n_tx, std::size_t n_rx)
        {
            Writer w;
            for (auto s : sizes)
                w.put<std::uint64_t>(s);
            w.put<double>(cfg.scan_period_s);
            w.put<double>(cfg.tap_spacing_ns);
            w.put<double>(cfg.carrier_ghz);
            w.put<double>(start);
            w.put<std::uint32_t>(static_cast<std::uint32_t>(n_tx));
            w.put<std::uint32_t>(static_cast<std::uint32_t>(n_rx));
            return std::move(w.bytes());
        }

        void write_file(const std::string &path, std::uint32_t modes, ValueKind kind,
                        const std::vector<char> &header, const std::vector<float> &payload)
        {
            Writer pre;
            for (char c : magic)
                pre.put<char>(c);
            pre.put<std::uint32_t>(modes);
            pre.put<std::uint32_t>(static_cast<std::uint32_t>(kind));
            pre.put<std::uint32_t>(flag_canonical);
            pre.put<std::uint64_t>(header.size());

            namespace fs = std::filesystem;
            const fs::path target(path);
            fs::path tmp = target;
            tmp += ".tmp." + std::to_string(::getpid());
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw TensorFileError(TensorFileErrc::io, "tensor file: cannot open '" + tmp.string() + "' for writing");
                out.write(pre.bytes().data(), static_cast<std::streamsize>(pre.bytes().size()));
                out.write(header.data(), static_cast<std::streamsize>(header.size()));
                if constexpr (std::endian::native == std::endian::little)
                    out.write(reinterpret_cast<const char *>(payload.data()),
                              static_cast<std::streamsize>(payload.size() * sizeof(float)));
                else
                    for (float f : payload)
                    {
                        const float le = to_le(f);
                        out.write(reinterpret_cast<const char *>(&le), sizeof(float));
                    }
                out.flush();
                if (!out)
                {
                    std::error_code ec;
                    fs::remove(tmp, ec);
                    throw TensorFileError(TensorFileErrc::io, "tensor file: write to '" + tmp.string() + "' failed");
                }
            }
            std::error_code ec;
            fs::rename(tmp, target, ec);
            if (ec)
            {
                fs::remove(tmp, ec);
                throw TensorFileError(TensorFileErrc::io, "tensor file: cannot rename into '" + path + "'");
            }
        }

        std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
        {
            std::uint64_t r = 0;
            if (__builtin_mul_overflow(a, b, &r))
                throw TensorFileError(TensorFileErrc::size_overflow, "tensor file: sizes overflow 64 bits");
            return r;
        }

        struct Loaded
        {
            TensorFileInfo info;
            std::vector<float> payload;
        };

        TensorFileInfo parse_info(std::ifstream &in, const std::string &path, std::uint64_t file_size)
        {
            char pre[preamble_bytes];
            in.read(pre, preamble_bytes);
            if (in.gcount() >= 4 && std::memcmp(pre, magic, 4) != 0)
                throw TensorFileError(TensorFileErrc::bad_magic, "tensor file: '" + path + "' does not start with BMT1");
            if (in.gcount() != static_cast<std::streamsize>(preamble_bytes))
                throw TensorFileError(TensorFileErrc::truncated, "tensor file: '" + path + "' is shorter than the preamble");

            Reader r(pre + 4, preamble_bytes - 4);
            TensorFileInfo info;
            info.modes = r.get<std::uint32_t>();
            const auto kind = r.get<std::uint32_t>();
            const auto flags = r.get<std::uint32_t>();
            info.header_bytes = r.get<std::uint64_t>();
            if (info.modes != 3 && info.modes != 4)
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: mode count must be 3 or 4");
            if (kind > 1)
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: unknown value kind");
            info.kind = static_cast<ValueKind>(kind);
            info.canonical_map = (flags & flag_canonical) != 0;
            const std::uint64_t expected_header = 8ull * info.modes + 4 * 8 + 2 * 4;
            if (info.header_bytes != expected_header)
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: unexpected header length");
            if (file_size < preamble_bytes + info.header_bytes)
                throw TensorFileError(TensorFileErrc::truncated, "tensor file: header is truncated");

            std::vector<char> hdr(info.header_bytes);
            in.read(hdr.data(), static_cast<std::streamsize>(hdr.size()));
            Reader h(hdr.data(), hdr.size());
            std::uint64_t count = 1;
            for (std::uint32_t m = 0; m < info.modes; ++m)
            {
                const auto s = h.get<std::uint64_t>();
                if (s == 0)
                    throw TensorFileError(TensorFileErrc::bad_header, "tensor file: mode sizes must be positive");
                info.sizes.push_back(s);
                count = checked_mul(count, s);
            }
            info.scan_period_s = h.get<double>();
            info.tap_spacing_ns = h.get<double>();
            info.carrier_ghz = h.get<double>();
            info.start_time_s = h.get<double>();
            info.n_tx = h.get<std::uint32_t>();
            info.n_rx = h.get<std::uint32_t>();

            const std::uint64_t width = info.kind == ValueKind::complex_pair ? 8 : 4;
            info.payload_bytes = checked_mul(count, width);
            if (info.payload_bytes > std::numeric_limits<std::uint64_t>::max() - preamble_bytes - info.header_bytes ||
                info.payload_bytes > static_cast<std::uint64_t>(std::numeric_limits<std::ptrdiff_t>::max()))
                throw TensorFileError(TensorFileErrc::size_overflow, "tensor file: payload size overflows");

            const std::uint64_t pairs = info.modes == 4 ? info.sizes[1] * info.sizes[2] : info.sizes[1];
            if (static_cast<std::uint64_t>(info.n_tx) * info.n_rx != pairs)
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: n_tx * n_rx does not match the beam modes");
            if (info.modes == 4 && (info.sizes[1] != info.n_rx || info.sizes[2] != info.n_tx))
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: beam mode sizes disagree with n_tx / n_rx");
            if (!(info.scan_period_s > 0.0) || !(info.tap_spacing_ns > 0.0) || !(info.carrier_ghz > 0.0) ||
                !std::isfinite(info.start_time_s))
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: invalid scan metadata");

            const std::uint64_t total = preamble_bytes + info.header_bytes + info.payload_bytes;
            if (file_size < total)
                throw TensorFileError(TensorFileErrc::truncated, "tensor file: '" + path + "' payload is truncated");
            if (file_size > total)
                throw TensorFileError(TensorFileErrc::bad_header, "tensor file: '" + path + "' has trailing bytes");
            return info;
        }

        Loaded load(const std::string &path, std::uint32_t modes, ValueKind kind)
        {
            std::error_code ec;
            const auto file_size = std::filesystem::file_size(path, ec);
            if (ec)
                throw TensorFileError(TensorFileErrc::io, "tensor file: cannot stat '" + path + "'");
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw TensorFileError(TensorFileErrc::io, "tensor file: cannot open '" + path + "'");
            Loaded l;
            l.info = parse_info(in, path, file_size);
            if (l.info.modes != modes || l.info.kind != kind)
                throw TensorFileError(TensorFileErrc::bad_header,
                                      "tensor file: '" + path + "' holds a " + std::to_string(l.info.modes) +
                                          "-way " + (l.info.kind == ValueKind::complex_pair ? "complex" : "power") +
                                          " tensor");
            l.payload.resize(l.info.payload_bytes / sizeof(float));
            in.read(reinterpret_cast<char *>(l.payload.data()), static_cast<std::streamsize>(l.info.payload_bytes));
            if (static_cast<std::uint64_t>(in.gcount()) != l.info.payload_bytes)
                throw TensorFileError(TensorFileErrc::truncated, "tensor file: '" + path + "' payload is truncated");
            if constexpr (std::endian::native != std::endian::little)
                for (float &f : l.payload)
                    f = to_le(f);
            return l;
        }

        ScanConfig config_from(const TensorFileInfo &info)
        {
            ScanConfig c;
            c.n_delay_taps = static_cast<std::size_t>(info.sizes[0]);
            c.scan_period_s = info.scan_period_s;
            c.tap_spacing_ns = info.tap_spacing_ns;
            c.carrier_ghz = info.carrier_ghz;
            c.duration_s = static_cast<double>(info.sizes.back()) * info.scan_period_s;
            return c;
        }

        std::vector<double> timestamps_from(const TensorFileInfo &info)
        {
            std::vector<double> ts = scan_timestamps(static_cast<std::size_t>(info.sizes.back()), info.scan_period_s);
            for (double &t : ts)
                t += info.start_time_s;
            return ts;
        }

        double start_of(const std::vector<double> &ts) { return ts.empty() ? 0.0 : ts.front(); }
    }

    void write_tensor(const std::string &path, const MeasurementTensor &t4)
    {
        const std::size_t n = t4.n_delay * t4.n_rx * t4.n_tx * t4.n_scans;
        if (n == 0 || t4.data.size() != n)
            throw std::invalid_argument("write_tensor: tensor dimensions are empty or inconsistent");
        std::vector<float> payload(2 * n);
        for (std::size_t i = 0; i < n; ++i)
        {
            payload[2 * i] = static_cast<float>(t4.data[i].real());
            payload[2 * i + 1] = static_cast<float>(t4.data[i].imag());
        }
        const auto hdr = header_bytes({t4.n_delay, t4.n_rx, t4.n_tx, t4.n_scans}, t4.config, start_of(t4.timestamps),
                                      t4.n_tx, t4.n_rx);
        write_file(path, 4, ValueKind::complex_pair, hdr, payload);
    }

    void write_tensor(const std::string &path, const PowerTensor3 &t3)
    {
        const std::size_t n = t3.values.size();
        if (n == 0 || n != t3.n_delay() * t3.n_pairs() * t3.n_scans())
            throw std::invalid_argument("write_tensor: tensor dimensions are empty or inconsistent");
        if (t3.map.pairs() != t3.n_pairs())
            throw std::invalid_argument("write_tensor: beam-pair map does not match the pair mode");
        std::vector<float> payload(n);
        for (std::size_t i = 0; i < n; ++i)
            payload[i] = static_cast<float>(t3.values.data[i]);
        const auto hdr = header_bytes({t3.n_delay(), t3.n_pairs(), t3.n_scans()}, t3.config,
                                      start_of(t3.timestamps), t3.map.n_tx, t3.map.n_rx);
        write_file(path, 3, ValueKind::real_power, hdr, payload);
    }

    TensorFileInfo read_tensor_info(const std::string &path)
    {
        std::error_code ec;
        const auto file_size = std::filesystem::file_size(path, ec);
        if (ec)
            throw TensorFileError(TensorFileErrc::io, "tensor file: cannot stat '" + path + "'");
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw TensorFileError(TensorFileErrc::io, "tensor file: cannot open '" + path + "'");
        return parse_info(in, path, file_size);
    }

    MeasurementTensor read_measurement(const std::string &path)
    {
        const Loaded l = load(path, 4, ValueKind::complex_pair);
        const auto &s = l.info.sizes;
        MeasurementTensor t(static_cast<std::size_t>(s[0]), static_cast<std::size_t>(s[1]),
                            static_cast<std::size_t>(s[2]), static_cast<std::size_t>(s[3]));
        for (std::size_t i = 0; i < t.data.size(); ++i)
            t.data[i] = {static_cast<double>(l.payload[2 * i]), static_cast<double>(l.payload[2 * i + 1])};
        t.config = config_from(l.info);
        t.timestamps = timestamps_from(l.info);
        return t;
    }

    PowerTensor3 read_power(const std::string &path)
    {
        const Loaded l = load(path, 3, ValueKind::real_power);
        const auto &s = l.info.sizes;
        PowerTensor3 t;
        t.values = Tensor3(static_cast<std::size_t>(s[0]), static_cast<std::size_t>(s[1]), static_cast<std::size_t>(s[2]));
        for (std::size_t i = 0; i < t.values.data.size(); ++i)
            t.values.data[i] = static_cast<double>(l.payload[i]);
        t.map = {l.info.n_tx, l.info.n_rx};
        t.config = config_from(l.info);
        t.timestamps = timestamps_from(l.info);
        return t;
    }
}
