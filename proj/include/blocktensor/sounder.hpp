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

#ifndef BLOCKTENSOR_SOUNDER_HPP
#define BLOCKTENSOR_SOUNDER_HPP

#include "blocktensor/codebook.hpp"
#include "blocktensor/geometry.hpp"
#include "blocktensor/tensor.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace blocktensor
{
    struct Cir
    {
        std::vector<std::complex<double>> taps;
        std::size_t dropped_paths = 0;
    };

    // One scan over all beam pairs, [delay x rx beam x tx beam], delay fastest.
    struct ScanCube
    {
        std::size_t n_delay = 0, n_rx = 0, n_tx = 0;
        std::vector<std::complex<double>> data;
        std::size_t dropped_paths = 0;

        std::size_t index(std::size_t i, std::size_t r, std::size_t x) const { return (x * n_rx + r) * n_delay + i; }
        const std::complex<double> &operator()(std::size_t i, std::size_t r, std::size_t x) const
        {
            return data[index(i, r, x)];
        }
    };

    // Static part of the link for a scene: traced paths, per-beam gains, delay
    // bins and the noise level. Blocker motion is evaluated per instant.
    class Sounder
    {
    public:
        Sounder(Scene scene, Codebook tx_codebook, Codebook rx_codebook, ScanConfig config);

        const Scene &scene() const { return scene_; }
        const ScanConfig &config() const { return config_; }
        const std::vector<PropagationPath> &paths() const { return paths_; }
        const Codebook &tx_codebook() const { return tx_cb_; }
        const Codebook &rx_codebook() const { return rx_cb_; }

        // Per-tap complex noise variance (0 with noise disabled).
        double noise_variance() const { return noise_var_; }

        // Nearest delay bin of a path, or n_delay_taps when it falls outside the window.
        std::size_t delay_bin(std::size_t path) const { return bins_[path]; }

        // Unblocked complex amplitude of a path at a beam pair (free space, beams, reflection loss).
        std::complex<double> unblocked_amplitude(std::size_t path, std::size_t tx_beam, std::size_t rx_beam) const;

        // Blockage loss of every path at time t.
        std::vector<double> path_losses_db(double t) const;

        // Noise-free CIR for one beam pair.
        Cir cir(std::size_t tx_beam, std::size_t rx_beam, double t) const;

        // All beam pairs at a single instant; noise drawn from the stream of scan index k.
        ScanCube scan(double t, std::uint64_t k) const;

        MeasurementTensor measure() const;

    private:
        void add_noise(ScanCube &cube, std::uint64_t k) const;

        Scene scene_;
        Codebook tx_cb_, rx_cb_;
        ScanConfig config_;
        std::vector<PropagationPath> paths_;
        std::vector<std::size_t> bins_;
        std::vector<std::complex<double>> base_; // [path][tx][rx] unblocked amplitude
        double noise_var_ = 0.0;
    };

    // Single beam-pair CIR; noise (when enabled) drawn from the stream of the
    // scan whose timestamp is nearest t.
    Cir synthesize_cir(const Scene &scene, const std::vector<PropagationPath> &paths, const Codebook &tx_codebook,
                       const Codebook &rx_codebook, std::size_t tx_beam, std::size_t rx_beam, double t,
                       const ScanConfig &config);

    ScanCube run_scan(const Scene &scene, double t, const ScanConfig &config, const Codebook &tx_codebook,
                      const Codebook &rx_codebook);

    MeasurementTensor run_measurement(const Scene &scene, const ScanConfig &config, const Codebook &tx_codebook,
                                      const Codebook &rx_codebook);

    // Received power of one path over time, summed over the beam pairs where the
    // path is within 6 dB of its best pair and dominates its delay bin.
    std::vector<double> path_power_trace(const Sounder &sounder, const PowerTensor3 &power, std::size_t path);
}

#endif
