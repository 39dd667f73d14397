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

#ifndef BLOCKTENSOR_TENSOR_FILE_HPP
#define BLOCKTENSOR_TENSOR_FILE_HPP

#include "blocktensor/tensor.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// BMT1 container, all fields little-endian:
//
//   preamble (24 bytes)
//     char[4]  "BMT1"
//     u32      mode count (3 or 4)
//     u32      value kind (0 = complex f32 pair, 1 = real f32 power)
//     u32      flags (bit 0: canonical beam-pair map j = tx * n_rx + rx)
//     u64      header bytes
//   header
//     u64[modes]  sizes, delay first; 4-way [delay, rx, tx, scan], 3-way [delay, pair, scan]
//     f64         scan period (s), tap spacing (ns), carrier (GHz), first timestamp (s)
//     u32         n_tx, n_rx
//   payload
//     f32 values, delay fastest
namespace blocktensor
{
    enum class TensorFileErrc
    {
        bad_magic,
        truncated,
        size_overflow,
        bad_header,
        io
    };

    class TensorFileError : public std::runtime_error
    {
    public:
        TensorFileError(TensorFileErrc code, const std::string &what) : std::runtime_error(what), code_(code) {}
        TensorFileErrc code() const { return code_; }

    private:
        TensorFileErrc code_;
    };

    enum class ValueKind : std::uint32_t
    {
        complex_pair = 0,
        real_power = 1
    };

    struct TensorFileInfo
    {
        std::uint32_t modes = 0;
        ValueKind kind = ValueKind::complex_pair;
        bool canonical_map = true;
        std::vector<std::uint64_t> sizes;
        double scan_period_s = 0.0, tap_spacing_ns = 0.0, carrier_ghz = 0.0, start_time_s = 0.0;
        std::uint32_t n_tx = 0, n_rx = 0;
        std::uint64_t header_bytes = 0;
        std::uint64_t payload_bytes = 0;
    };

    inline constexpr std::size_t preamble_bytes = 24;

    // Writes go to a temporary sibling file that is renamed into place.
    void write_tensor(const std::string &path, const MeasurementTensor &t4);
    void write_tensor(const std::string &path, const PowerTensor3 &t3);

    TensorFileInfo read_tensor_info(const std::string &path);
    MeasurementTensor read_measurement(const std::string &path);
    PowerTensor3 read_power(const std::string &path);
}

#endif
