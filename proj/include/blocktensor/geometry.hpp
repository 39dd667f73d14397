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

#ifndef BLOCKTENSOR_GEOMETRY_HPP
#define BLOCKTENSOR_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace blocktensor
{
    // Cartesian coordinates in meters. z is height above the floor.
    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
        friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
        friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
        friend Vec3 operator*(Vec3 a, double s) { return s * a; }
        friend bool operator==(const Vec3 &, const Vec3 &) = default;
    };

    using Point = Vec3;

    inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
    inline Vec3 cross(Vec3 a, Vec3 b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
    inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
    inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }
    inline bool is_finite(Vec3 a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

    // Azimuth of the horizontal projection of a direction, degrees in (-180, 180].
    double azimuth_deg(Vec3 direction);

    // Wraps an angle to [-180, 180).
    double wrap_deg(double deg);

    struct Waypoint
    {
        double t = 0.0; // seconds
        Point position;
    };

    // Piecewise-linear motion between waypoints with strictly increasing times.
    class Trajectory
    {
    public:
        Trajectory() = default;
        explicit Trajectory(std::vector<Waypoint> waypoints); // throws std::invalid_argument

        const std::vector<Waypoint> &waypoints() const { return waypoints_; }

        // Largest segment speed in m/s (0 for a single waypoint).
        double max_speed() const;

    private:
        std::vector<Waypoint> waypoints_;
    };

    // Linear interpolation between bracketing waypoints, clamped outside the time range.
    Point position_at(const Trajectory &trajectory, double t);

    struct Blocker
    {
        Trajectory trajectory;
        double width = 0.4;  // meters
        double height = 1.8; // meters
    };

    // Finite planar reflector. The extent is measured from `point` along the
    // in-plane axes u = normalize(z_hat x normal) (horizontal) and v = z_hat.
    struct Wall
    {
        std::string name;
        Point point;
        Vec3 normal{0.0, 1.0, 0.0}; // unit, horizontal, pointing into the room
        double u_min = 0.0, u_max = 0.0;
        double v_min = 0.0, v_max = 0.0;
        double reflection_loss_db = 10.0;

        Vec3 u_axis() const;
        Vec3 v_axis() const { return {0.0, 0.0, 1.0}; }
        double signed_distance(Point p) const { return dot(p - point, normal); }
        Point mirror(Point p) const { return p - 2.0 * signed_distance(p) * normal; }
        bool contains(Point on_plane) const;
    };

    struct Box
    {
        Point min, max;
        bool contains(Point p) const
        {
            return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
        }
    };

    struct Scene
    {
        Box room;
        Point tx, rx;
        double tx_boresight_az = 0.0;   // degrees
        double rx_boresight_az = 180.0; // degrees
        std::vector<Wall> walls;
        std::vector<Blocker> blockers;
    };

    // Throws std::invalid_argument naming the violated constraint.
    void validate(const Scene &scene);

    enum class PathKind
    {
        los,
        reflected
    };

    struct PropagationPath
    {
        PathKind kind = PathKind::los;
        std::optional<std::size_t> wall; // set for reflected paths
        std::vector<Point> vertices;     // TX, [reflection point], RX
        double length_m = 0.0;
        double aod_az = 0.0; // degrees relative to the TX boresight
        double aoa_az = 0.0; // degrees relative to the RX boresight
        double reflection_loss_db = 0.0;

        std::string label() const;
    };

    // LOS plus one first-order specular reflection per wall whose reflection
    // point falls inside the wall extent, sorted by length (ties: LOS first, then wall index).
    std::vector<PropagationPath> trace_paths(const Scene &scene);

    // Vertical rectangle standing on the floor, perpendicular to the horizontal TX->RX direction.
    struct Screen
    {
        Point center; // (x, y) of the blocker, z = height / 2
        double width_m = 0.0;
        double height_m = 0.0;
        Vec3 normal; // unit, horizontal

        // Unit horizontal axis spanning the screen width.
        Vec3 width_axis() const { return {-normal.y, normal.x, 0.0}; }
    };

    Screen screen_at(const Blocker &blocker, double t, Point tx, Point rx);

    // Screen from an explicit blocker position (used for mirrored blockers).
    Screen screen_from_position(Point position, double width, double height, Point tx, Point rx);
}

#endif
