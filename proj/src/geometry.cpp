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

#include "blocktensor/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace blocktensor
{
    namespace
    {
        constexpr double plane_eps = 1e-12;
    }

    double azimuth_deg(Vec3 direction)
    {
        return std::atan2(direction.y, direction.x) * 180.0 / std::numbers::pi;
    }

    double wrap_deg(double deg)
    {
        double w = std::fmod(deg + 180.0, 360.0);
        if (w < 0.0)
            w += 360.0;
        return w - 180.0;
    }

    Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints))
    {
        if (waypoints_.empty())
            throw std::invalid_argument("trajectory needs at least one waypoint");
        for (std::size_t i = 0; i < waypoints_.size(); ++i)
        {
            if (!std::isfinite(waypoints_[i].t) || !is_finite(waypoints_[i].position))
                throw std::invalid_argument("trajectory waypoint " + std::to_string(i) + " is not finite");
            if (i > 0 && !(waypoints_[i].t > waypoints_[i - 1].t))
                throw std::invalid_argument("trajectory waypoint times must be strictly increasing");
        }
    }

    double Trajectory::max_speed() const
    {
        double v = 0.0;
        for (std::size_t i = 1; i < waypoints_.size(); ++i)
            v = std::max(v, distance(waypoints_[i].position, waypoints_[i - 1].position) /
                                (waypoints_[i].t - waypoints_[i - 1].t));
        return v;
    }

    Point position_at(const Trajectory &trajectory, double t)
    {
        const auto &wp = trajectory.waypoints();
        if (wp.empty())
            throw std::invalid_argument("position_at on an empty trajectory");
        if (t <= wp.front().t)
            return wp.front().position;
        if (t >= wp.back().t)
            return wp.back().position;
        auto hi = std::upper_bound(wp.begin(), wp.end(), t, [](double v, const Waypoint &w) { return v < w.t; });
        auto lo = hi - 1;
        const double f = (t - lo->t) / (hi->t - lo->t);
        return lo->position + f * (hi->position - lo->position);
    }

    Vec3 Wall::u_axis() const
    {
        const Vec3 u{-normal.y, normal.x, 0.0};
        return (1.0 / norm(u)) * u;
    }

    bool Wall::contains(Point on_plane) const
    {
        const Vec3 d = on_plane - point;
        const double u = dot(d, u_axis());
        const double v = dot(d, v_axis());
        constexpr double tol = 1e-12;
        return u >= u_min - tol && u <= u_max + tol && v >= v_min - tol && v <= v_max + tol;
    }

    void validate(const Scene &scene)
    {
        auto fail = [](const std::string &what) { throw std::invalid_argument("invalid scene: " + what); };
        if (!is_finite(scene.tx))
            fail("tx position is not finite");
        if (!is_finite(scene.rx))
            fail("rx position is not finite");
        if (distance(scene.tx, scene.rx) <= 0.0)
            fail("tx and rx coincide");
        if (!scene.room.contains(scene.tx))
            fail("tx lies outside the room");
        if (!scene.room.contains(scene.rx))
            fail("rx lies outside the room");
        for (double az : {scene.tx_boresight_az, scene.rx_boresight_az})
            if (!(az >= -180.0 && az <= 180.0))
                fail("boresight azimuth outside [-180, 180] degrees");
        for (std::size_t i = 0; i < scene.walls.size(); ++i)
        {
            const Wall &w = scene.walls[i];
            const std::string id = "wall " + std::to_string(i);
            if (!is_finite(w.point) || !is_finite(w.normal))
                fail(id + " is not finite");
            if (std::abs(norm(w.normal) - 1.0) > 1e-9)
                fail(id + " normal is not unit length");
            if (std::abs(w.normal.z) > 1e-9)
                fail(id + " is not vertical");
            if (!(w.u_max > w.u_min) || !(w.v_max > w.v_min))
                fail(id + " extent is degenerate");
            if (!(w.reflection_loss_db >= 0.0))
                fail(id + " reflection loss must be >= 0 dB");
        }
        for (std::size_t i = 0; i < scene.blockers.size(); ++i)
        {
            const Blocker &b = scene.blockers[i];
            const std::string id = "blocker " + std::to_string(i);
            if (!(b.width > 0.0) || !(b.height > 0.0))
                fail(id + " width and height must be > 0");
            if (b.trajectory.waypoints().empty())
                fail(id + " has no waypoints");
        }
    }

    std::string PropagationPath::label() const
    {
        if (kind == PathKind::los)
            return "LOS";
        return "NLOS(wall " + std::to_string(wall.value_or(0)) + ")";
    }

    namespace
    {
        void set_angles(PropagationPath &p, const Scene &scene)
        {
            const Point &first_hop = p.vertices[1];
            const Point &last_hop = p.vertices[p.vertices.size() - 2];
            p.aod_az = wrap_deg(azimuth_deg(first_hop - scene.tx) - scene.tx_boresight_az);
            p.aoa_az = wrap_deg(azimuth_deg(last_hop - scene.rx) - scene.rx_boresight_az);
        }
    }

    std::vector<PropagationPath> trace_paths(const Scene &scene)
    {
        if (distance(scene.tx, scene.rx) <= 0.0)
            throw std::invalid_argument("trace_paths: degenerate scene, tx and rx coincide");

        std::vector<PropagationPath> paths;

        PropagationPath los;
        los.kind = PathKind::los;
        los.vertices = {scene.tx, scene.rx};
        los.length_m = distance(scene.tx, scene.rx);
        set_angles(los, scene);
        paths.push_back(los);

        for (std::size_t w = 0; w < scene.walls.size(); ++w)
        {
            const Wall &wall = scene.walls[w];
            const double d_tx = wall.signed_distance(scene.tx);
            const double d_rx = wall.signed_distance(scene.rx);
            if (d_tx <= plane_eps || d_rx <= plane_eps)
                continue; // an antenna sits on or behind the reflector
            const Point image = wall.mirror(scene.rx);
            const double s = d_tx / (d_tx + d_rx);
            const Point hit = scene.tx + s * (image - scene.tx);
            if (!wall.contains(hit))
                continue;

            PropagationPath p;
            p.kind = PathKind::reflected;
            p.wall = w;
            p.vertices = {scene.tx, hit, scene.rx};
            p.length_m = distance(scene.tx, hit) + distance(hit, scene.rx);
            p.reflection_loss_db = wall.reflection_loss_db;
            set_angles(p, scene);
            paths.push_back(p);
        }

        auto key = [](const PropagationPath &p) {
            return std::make_tuple(std::llround(p.length_m * 1e9), p.kind == PathKind::los ? 0 : 1,
                                   p.wall.value_or(0));
        };
        std::stable_sort(paths.begin(), paths.end(),
                         [&](const PropagationPath &a, const PropagationPath &b) { return key(a) < key(b); });
        if (paths.empty())
            throw std::runtime_error("trace_paths: no propagation path exists");
        return paths;
    }

    Screen screen_from_position(Point position, double width, double height, Point tx, Point rx)
    {
        const Vec3 link{rx.x - tx.x, rx.y - tx.y, 0.0};
        const double len = norm(link);
        if (!(len > 0.0))
            throw std::invalid_argument("screen orientation undefined: tx and rx share a horizontal position");
        Screen s;
        s.center = {position.x, position.y, 0.5 * height};
        s.width_m = width;
        s.height_m = height;
        s.normal = (1.0 / len) * link;
        return s;
    }

    Screen screen_at(const Blocker &blocker, double t, Point tx, Point rx)
    {
        return screen_from_position(position_at(blocker.trajectory, t), blocker.width, blocker.height, tx, rx);
    }
}
