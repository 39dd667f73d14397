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

#ifndef BLOCKTENSOR_TENSOR_HPP
#define BLOCKTENSOR_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace blocktensor
{
    inline constexpr double speed_of_light = 299792458.0;

    struct ScanConfig
    {
        std::size_t n_delay_taps = 64;
        double tap_spacing_ns = 1.0;
        double scan_period_s = 0.003;
        double duration_s = 5.0;
        double carrier_ghz = 60.48;
        double snr_db = 30.0; // unblocked LOS peak tap over per-tap noise power
        bool noise = true;
        std::uint64_t seed = 1;

        double wavelength_m() const { return speed_of_light / (carrier_ghz * 1e9); }

        // floor(duration / period), tolerant to representation error in the ratio.
        std::size_t scan_count() const;

        // Throws std::invalid_argument on violated invariants.
        void validate() const;
    };

    // timestamps[k] = k * scan_period_s
    std::vector<double> scan_timestamps(std::size_t n_scans, double scan_period_s);

    // Complex CIR samples indexed [delay i, rx beam r, tx beam x, scan k]; delay
    // fastest, linear index ((k * n_tx + x) * n_rx + r) * n_delay + i.
    struct MeasurementTensor
    {
        std::size_t n_delay = 0, n_rx = 0, n_tx = 0, n_scans = 0;
        std::vector<std::complex<double>> data;
        std::vector<double> timestamps;
        ScanConfig config;
        std::size_t dropped_paths = 0; // path arrivals beyond the tap window

        MeasurementTensor() = default;
        MeasurementTensor(std::size_t delays, std::size_t rx, std::size_t tx, std::size_t scans)
            : n_delay(delays), n_rx(rx), n_tx(tx), n_scans(scans), data(delays * rx * tx * scans)
        {
        }

        std::size_t index(std::size_t i, std::size_t r, std::size_t x, std::size_t k) const
        {
            return ((k * n_tx + x) * n_rx + r) * n_delay + i;
        }
        std::complex<double> &operator()(std::size_t i, std::size_t r, std::size_t x, std::size_t k)
        {
            return data[index(i, r, x, k)];
        }
        const std::complex<double> &operator()(std::size_t i, std::size_t r, std::size_t x, std::size_t k) const
        {
            return data[index(i, r, x, k)];
        }
    };

    // Dense real 3-way array, mode 0 fastest: linear index (k * n1 + j) * n0 + i.
    struct Tensor3
    {
        std::size_t n0 = 0, n1 = 0, n2 = 0;
        std::vector<double> data;

        Tensor3() = default;
        Tensor3(std::size_t a, std::size_t b, std::size_t c) : n0(a), n1(b), n2(c), data(a * b * c, 0.0) {}

        std::size_t size() const { return data.size(); }
        std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (k * n1 + j) * n0 + i; }
        double &operator()(std::size_t i, std::size_t j, std::size_t k) { return data[index(i, j, k)]; }
        double operator()(std::size_t i, std::size_t j, std::size_t k) const { return data[index(i, j, k)]; }
        const double *fiber(std::size_t j, std::size_t k) const { return data.data() + (k * n1 + j) * n0; }
    };

    // Beam pair j <-> (tx, rx) with j = tx * n_rx + rx (RX sweeps fastest, matching acquisition order).
    struct BeamPairMap
    {
        std::size_t n_tx = 12, n_rx = 12;
        std::size_t pairs() const { return n_tx * n_rx; }
        std::size_t pair(std::size_t tx, std::size_t rx) const { return tx * n_rx + rx; }
        std::size_t tx_of(std::size_t j) const { return j / n_rx; }
        std::size_t rx_of(std::size_t j) const { return j % n_rx; }
    };

    // Nonnegative power [delay i x beam pair j x scan k].
    struct PowerTensor3
    {
        Tensor3 values;
        BeamPairMap map;
        std::vector<double> timestamps;
        ScanConfig config;

        std::size_t n_delay() const { return values.n0; }
        std::size_t n_pairs() const { return values.n1; }
        std::size_t n_scans() const { return values.n2; }
        double operator()(std::size_t i, std::size_t j, std::size_t k) const { return values(i, j, k); }
    };

    // |h|^2 refolded to [delay, rx beam, tx beam, scan], same linear layout as MeasurementTensor.
    struct PowerTensor4
    {
        std::size_t n_delay = 0, n_rx = 0, n_tx = 0, n_scans = 0;
        std::vector<double> data;
        std::size_t index(std::size_t i, std::size_t r, std::size_t x, std::size_t k) const
        {
            return ((k * n_tx + x) * n_rx + r) * n_delay + i;
        }
    };

    // Power per [beam pair j x scan k], stored scan-major: data[k * n_pairs + j].
    struct PowerMatrix
    {
        std::size_t n_pairs = 0, n_scans = 0;
        BeamPairMap map;
        std::vector<double> data;
        std::vector<double> timestamps;

        double operator()(std::size_t j, std::size_t k) const { return data[k * n_pairs + j]; }
        double &operator()(std::size_t j, std::size_t k) { return data[k * n_pairs + j]; }
    };
}

#endif
