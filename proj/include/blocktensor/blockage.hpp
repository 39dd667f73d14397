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

#ifndef BLOCKTENSOR_BLOCKAGE_HPP
#define BLOCKTENSOR_BLOCKAGE_HPP

#include "blocktensor/geometry.hpp"

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace blocktensor
{
    // Thrown when an antenna lies on the screen plane inside the screen rectangle.
    class DegenerateGeometry : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    struct KedEdge
    {
        double d1 = 0.0; // edge -> TX, meters
        double d2 = 0.0; // edge -> RX, meters
        bool inside = false; // direct segment passes on the screen side of this edge
    };

    // Screen-edge geometry for the double knife-edge model. Width edges are
    // evaluated in the top view, height edges in the side view along the link.
    struct KedGeometry
    {
        std::array<KedEdge, 2> width_edges;
        std::array<KedEdge, 2> height_edges;
        double r_width = 0.0;  // horizontal TX-RX distance
        double r_height = 0.0; // TX-RX distance in the vertical link plane
        double wavelength = 0.0;

        double crossing = 0.0;       // fraction along TX->RX where the screen plane is crossed
        double miss_width = 0.0;     // lateral distance outside the screen span (0 when inside)
        double miss_height = 0.0;    // vertical distance outside the screen span (0 when inside)
        double fresnel_radius = 0.0; // first Fresnel zone radius at the crossing
    };

    // Screens further than this many first-Fresnel radii outside the direct path
    // (in either dimension) contribute exactly 0 dB.
    inline constexpr double ked_gate_fresnel_radii = 10.0;

    // Geometry of the screen relative to the TX->RX segment restricted to
    // crossings with fraction in [crossing_min, crossing_max]. std::nullopt when
    // the screen plane is not crossed within that range.
    std::optional<KedGeometry> ked_geometry(const Screen &screen, Point tx, Point rx, double wavelength_m,
                                            double crossing_min = 0.0, double crossing_max = 1.0);

    // Loss in dB from the per-edge terms, without the geometric gate.
    double ked_loss_from_geometry(const KedGeometry &g);

    double ked_loss(const Screen &screen, Point tx, Point rx, double wavelength_m);

    // Sum of per-blocker screen losses along a propagation path. Reflected paths
    // are unfolded across their reflecting plane.
    double path_blockage_loss(const PropagationPath &path, std::span<const Blocker> blockers, double t,
                              double wavelength_m);

    struct AttenuationSample
    {
        std::size_t path_id = 0;
        double t = 0.0;
        double loss_db = 0.0;
    };

    std::vector<AttenuationSample> attenuation_series(const PropagationPath &path, std::size_t path_id,
                                                      std::span<const Blocker> blockers,
                                                      std::span<const double> times, double wavelength_m);
}

#endif
