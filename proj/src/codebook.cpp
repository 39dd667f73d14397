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

#include "blocktensor/codebook.hpp"
#include "blocktensor/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blocktensor
{
    Codebook make_codebook(std::size_t n, double range_deg, double peak_gain_dbi, double hpbw_deg,
                           double sidelobe_floor_db)
    {
        if (n == 0)
            throw std::invalid_argument("codebook needs at least one beam");
        if (!(range_deg > 0.0) || !std::isfinite(range_deg))
            throw std::invalid_argument("codebook steering range must be > 0 degrees");
        if (!(hpbw_deg > 0.0) || !std::isfinite(hpbw_deg))
            throw std::invalid_argument("codebook half-power beamwidth must be > 0 degrees");
        if (!(sidelobe_floor_db <= 0.0))
            throw std::invalid_argument("codebook sidelobe floor must be <= 0 dB relative to peak");
        if (!std::isfinite(peak_gain_dbi))
            throw std::invalid_argument("codebook peak gain must be finite");

        Codebook cb;
        cb.beams.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            Beam &b = cb.beams[i];
            b.steering_az = n == 1 ? 0.0 : -range_deg + 2.0 * range_deg * static_cast<double>(i) / static_cast<double>(n - 1);
            b.peak_gain_dbi = peak_gain_dbi;
            b.hpbw_deg = hpbw_deg;
            b.sidelobe_floor_db = sidelobe_floor_db;
        }
        return cb;
    }

    double gain_db(const Codebook &codebook, std::size_t beam, double azimuth_deg)
    {
        if (beam >= codebook.beams.size())
            throw std::out_of_range("beam index " + std::to_string(beam) + " outside codebook of size " +
                                    std::to_string(codebook.beams.size()));
        const Beam &b = codebook.beams[beam];
        const double delta = wrap_deg(azimuth_deg - b.steering_az);
        const double x = 2.0 * delta / b.hpbw_deg;
        return b.peak_gain_dbi + std::max(-3.0 * x * x, b.sidelobe_floor_db);
    }

    double gain(const Codebook &codebook, std::size_t beam, double azimuth_deg)
    {
        return std::pow(10.0, gain_db(codebook, beam, azimuth_deg) / 20.0);
    }
}
