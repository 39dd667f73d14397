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

#ifndef BLOCKTENSOR_CODEBOOK_HPP
#define BLOCKTENSOR_CODEBOOK_HPP

#include <cstddef>
#include <vector>

namespace blocktensor
{
    struct Beam
    {
        double steering_az = 0.0;        // degrees relative to array boresight
        double peak_gain_dbi = 23.0;
        double hpbw_deg = 30.0;
        double sidelobe_floor_db = -20.0; // relative to peak, <= 0
    };

    struct CodebookParams
    {
        std::size_t n_beams = 12;
        double range_deg = 45.0;
        double peak_gain_dbi = 23.0;
        double hpbw_deg = 30.0;
        double sidelobe_floor_db = -20.0;
    };

    struct Codebook
    {
        std::vector<Beam> beams;
        std::size_t size() const { return beams.size(); }
    };

    // Beams uniformly spaced over [-range, +range] inclusive; a single beam sits at boresight.
    // Throws std::invalid_argument for n == 0, range <= 0, hpbw <= 0 or a positive floor.
    Codebook make_codebook(std::size_t n, double range_deg, double peak_gain_dbi, double hpbw_deg,
                           double sidelobe_floor_db);

    inline Codebook make_codebook(const CodebookParams &p)
    {
        return make_codebook(p.n_beams, p.range_deg, p.peak_gain_dbi, p.hpbw_deg, p.sidelobe_floor_db);
    }

    // Power gain in dBi: Gaussian mainlobe (-3 dB at hpbw/2) clamped to the sidelobe floor.
    double gain_db(const Codebook &codebook, std::size_t beam, double azimuth_deg);

    // Linear field amplitude 10^(gain_db / 20). Throws std::out_of_range for a bad beam index.
    double gain(const Codebook &codebook, std::size_t beam, double azimuth_deg);
}

#endif
