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

#ifndef BLOCKTENSOR_SCENE_FILE_HPP
#define BLOCKTENSOR_SCENE_FILE_HPP

#include "blocktensor/codebook.hpp"
#include "blocktensor/geometry.hpp"
#include "blocktensor/tensor.hpp"

#include <stdexcept>
#include <string>

// Scene JSON schema (unknown keys are rejected, positions are [x, y, z] in meters):
//
//   room      {min, max}                                        required
//   tx, rx    {position, boresight_az_deg}                      required
//   walls     [{name, point, normal, u_range, v_range, reflection_loss_db}]
//   blockers  [{width_m, height_m, waypoints: [{t, position}]}]
//   codebook  {beams, range_deg, peak_gain_dbi, hpbw_deg, sidelobe_floor_db}
//             or tx_codebook / rx_codebook with the same keys
//   scan      {n_delay_taps, tap_spacing_ns, scan_period_s, duration_s, carrier_ghz, snr_db, noise}
//   seed      unsigned integer
namespace blocktensor
{
    class SceneError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct SceneConfig
    {
        Scene scene;
        ScanConfig scan;
        CodebookParams tx_codebook;
        CodebookParams rx_codebook;
    };

    // Errors name the offending field, e.g. "blockers[1].waypoints[0].t: expected a number".
    SceneConfig parse_scene(const std::string &json_text);
    SceneConfig load_scene(const std::string &path);
}

#endif
