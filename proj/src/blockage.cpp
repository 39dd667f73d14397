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

#include "blocktensor/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace blocktensor
{
    namespace
    {
        constexpr double on_plane_eps = 1e-12;

        double edge_term(const KedEdge &e, double r, double wavelength)
        {
            const double extra = std::max(e.d1 + e.d2 - r, 0.0);
            const double arg = 0.5 * std::numbers::pi * std::sqrt(std::numbers::pi / wavelength * extra);
            return std::atan(e.inside ? arg : -arg) / std::numbers::pi;
        }

        double horizontal_distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

        double gated_loss(const Screen &screen, Point tx, Point rx, double wavelength, double s_min, double s_max)
        {
            const auto g = ked_geometry(screen, tx, rx, wavelength, s_min, s_max);
            if (!g)
                return 0.0;
            const double limit = ked_gate_fresnel_radii * g->fresnel_radius;
            if (g->miss_width > limit || g->miss_height > limit)
                return 0.0;
            return ked_loss_from_geometry(*g);
        }
    }

    std::optional<KedGeometry> ked_geometry(const Screen &screen, Point tx, Point rx, double wavelength_m,
                                            double crossing_min, double crossing_max)
    {
        if (!(wavelength_m > 0.0))
            throw std::invalid_argument("ked_geometry: wavelength must be > 0");

        const Vec3 n = screen.normal;
        const Vec3 u = screen.width_axis();
        const double r_h = dot(rx - tx, n); // horizontal link length along the screen normal
        if (!(std::abs(r_h) > 0.0))
            return std::nullopt;
        const double s = dot(screen.center - tx, n) / r_h;

        const Point q = tx + s * (rx - tx);
        const double lateral = dot(q - screen.center, u);
        const double half_w = 0.5 * screen.width_m;
        const bool within_w = std::abs(lateral) <= half_w;
        const bool within_h = q.z >= 0.0 && q.z <= screen.height_m;

        if (std::abs(s) < on_plane_eps || std::abs(1.0 - s) < on_plane_eps)
        {
            if (within_w && within_h)
                throw DegenerateGeometry("ked: antenna lies on the screen plane inside the screen");
            return std::nullopt;
        }
        if (s <= 0.0 || s >= 1.0 || s < crossing_min || s > crossing_max)
            return std::nullopt;

        KedGeometry g;
        g.wavelength = wavelength_m;
        g.crossing = s;
        g.miss_width = std::max(std::abs(lateral) - half_w, 0.0);
        g.miss_height = std::max({q.z - screen.height_m, -q.z, 0.0});
        const double r3 = distance(tx, rx);
        g.fresnel_radius = std::sqrt(wavelength_m * (s * r3) * ((1.0 - s) * r3) / r3);

        // Top view.
        g.r_width = horizontal_distance(tx, rx);
        for (int e = 0; e < 2; ++e)
        {
            const double side = e == 0 ? 1.0 : -1.0;
            const Point edge = screen.center + (side * half_w) * u;
            g.width_edges[e].d1 = horizontal_distance(edge, tx);
            g.width_edges[e].d2 = horizontal_distance(edge, rx);
            g.width_edges[e].inside = side * lateral < half_w;
        }

        // Side view: along-link horizontal coordinate vs height.
        const double along = s * r_h;
        g.r_height = std::hypot(r_h, rx.z - tx.z);
        const std::array<double, 2> edge_z{screen.height_m, 0.0};
        for (int e = 0; e < 2; ++e)
        {
            g.height_edges[e].d1 = std::hypot(along, edge_z[e] - tx.z);
            g.height_edges[e].d2 = std::hypot(r_h - along, edge_z[e] - rx.z);
            g.height_edges[e].inside = e == 0 ? q.z < screen.height_m : q.z > 0.0;
        }
        return g;
    }

    double ked_loss_from_geometry(const KedGeometry &g)
    {
        const double fw = edge_term(g.width_edges[0], g.r_width, g.wavelength) +
                          edge_term(g.width_edges[1], g.r_width, g.wavelength);
        const double fh = edge_term(g.height_edges[0], g.r_height, g.wavelength) +
                          edge_term(g.height_edges[1], g.r_height, g.wavelength);
        const double loss = -20.0 * std::log10(1.0 - fh * fw);
        return std::max(loss, 0.0);
    }

    double ked_loss(const Screen &screen, Point tx, Point rx, double wavelength_m)
    {
        if (!(wavelength_m > 0.0))
            throw std::invalid_argument("ked_loss: wavelength must be > 0");
        return gated_loss(screen, tx, rx, wavelength_m, 0.0, 1.0);
    }

    double path_blockage_loss(const PropagationPath &path, std::span<const Blocker> blockers, double t,
                              double wavelength_m)
    {
        if (path.vertices.size() < 2)
            throw std::invalid_argument("path_blockage_loss: path needs at least two vertices");
        const Point tx = path.vertices.front();
        const Point rx = path.vertices.back();
        double total = 0.0;

        if (path.kind == PathKind::los || path.vertices.size() == 2)
        {
            for (const Blocker &b : blockers)
                total += ked_loss(screen_at(b, t, tx, rx), tx, rx, wavelength_m);
            return total;
        }

        // Unfold the single bounce: the specular normal bisects the directions to TX and RX.
        const Point hit = path.vertices[1];
        const Vec3 to_tx = (1.0 / distance(tx, hit)) * (tx - hit);
        const Vec3 to_rx = (1.0 / distance(rx, hit)) * (rx - hit);
        Vec3 n = to_tx + to_rx;
        n.z = 0.0;
        n = (1.0 / norm(n)) * n;
        auto mirror = [&](Point p) { return p - 2.0 * dot(p - hit, n) * n; };

        const Point rx_image = mirror(rx);
        const double s_hit = distance(tx, hit) / distance(tx, rx_image);
        for (const Blocker &b : blockers)
        {
            const Point pos = position_at(b.trajectory, t);
            const Screen direct = screen_from_position(pos, b.width, b.height, tx, rx_image);
            total += gated_loss(direct, tx, rx_image, wavelength_m, 0.0, s_hit);
            const Screen mirrored = screen_from_position(mirror(pos), b.width, b.height, tx, rx_image);
            total += gated_loss(mirrored, tx, rx_image, wavelength_m, s_hit, 1.0);
        }
        return total;
    }

    std::vector<AttenuationSample> attenuation_series(const PropagationPath &path, std::size_t path_id,
                                                      std::span<const Blocker> blockers,
                                                      std::span<const double> times, double wavelength_m)
    {
        std::vector<AttenuationSample> out;
        out.reserve(times.size());
        for (double t : times)
            out.push_back({path_id, t, path_blockage_loss(path, blockers, t, wavelength_m)});
        return out;
    }
}
