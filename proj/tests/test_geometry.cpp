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

#include "catch_amalgamated.hpp"

#include <stdexcept>

using namespace blocktensor;
using Catch::Matchers::WithinAbs;

namespace
{
    Wall make_wall(std::string name, Point p, Vec3 n, double u0, double u1)
    {
        Wall w;
        w.name = std::move(name);
        w.point = p;
        w.normal = n;
        w.u_min = u0;
        w.u_max = u1;
        w.v_min = 0.0;
        w.v_max = 3.0;
        return w;
    }

    Scene room_scene()
    {
        Scene s;
        s.room = {{0, 0, 0}, {6, 5, 3}};
        s.tx = {1, 2, 1};
        s.rx = {5, 2, 1};
        s.tx_boresight_az = 0.0;
        s.rx_boresight_az = 180.0;
        s.walls = {make_wall("south", {0, 0, 0}, {0, 1, 0}, -6, 0), make_wall("north", {0, 5, 0}, {0, -1, 0}, 0, 6)};
        return s;
    }
}

TEST_CASE("angle helpers")
{
    CHECK(azimuth_deg({1, 0, 5}) == 0.0);
    CHECK_THAT(azimuth_deg({0, 1, 0}), WithinAbs(90.0, 1e-12));
    CHECK(azimuth_deg({-1, 0, 0}) == 180.0);
    CHECK(wrap_deg(190.0) == -170.0);
    CHECK(wrap_deg(-190.0) == 170.0);
    CHECK(wrap_deg(180.0) == -180.0);
    CHECK(wrap_deg(720.0 + 30.0) == 30.0);
}

TEST_CASE("trajectory interpolation clamps outside the waypoint range")
{
    const Trajectory tr({{0.0, {0, 0, 0}}, {2.0, {2, 4, 0}}, {3.0, {2, 4, 0}}});
    CHECK(position_at(tr, -1.0) == Point{0, 0, 0});
    CHECK(position_at(tr, 1.0) == Point{1, 2, 0});
    CHECK(position_at(tr, 2.5) == Point{2, 4, 0});
    CHECK(position_at(tr, 9.0) == Point{2, 4, 0});
    CHECK_THAT(tr.max_speed(), WithinAbs(std::sqrt(20.0) / 2.0, 1e-12));

    const Trajectory still(std::vector<Waypoint>{{1.0, {3, 3, 0}}});
    CHECK(position_at(still, 0.0) == Point{3, 3, 0});
    CHECK(still.max_speed() == 0.0);
}

TEST_CASE("trajectory rejects bad waypoints")
{
    CHECK_THROWS_AS(Trajectory(std::vector<Waypoint>{}), std::invalid_argument);
    CHECK_THROWS_AS(Trajectory(std::vector<Waypoint>{{1.0, {0, 0, 0}}, {1.0, {1, 0, 0}}}), std::invalid_argument);
    CHECK_THROWS_AS(Trajectory(std::vector<Waypoint>{{0.0, {NAN, 0, 0}}}), std::invalid_argument);
}

TEST_CASE("LOS and one reflection per wall, sorted by length")
{
    const auto paths = trace_paths(room_scene());
    REQUIRE(paths.size() == 3);
    CHECK(paths[0].kind == PathKind::los);
    CHECK(paths[0].length_m == 4.0);
    CHECK(paths[0].aod_az == 0.0);
    CHECK(paths[0].aoa_az == 0.0);
    CHECK(paths[0].label() == "LOS");

    // South wall at distance 2 from both antennas: 2 * sqrt(2^2 + 2^2).
    CHECK(paths[1].kind == PathKind::reflected);
    CHECK(*paths[1].wall == 0);
    CHECK_THAT(paths[1].length_m, WithinAbs(5.656854249492381, 1e-12));
    CHECK(paths[1].vertices[1] == Point{3, 0, 1});
    CHECK_THAT(paths[1].aod_az, WithinAbs(-45.0, 1e-12));
    CHECK_THAT(paths[1].aoa_az, WithinAbs(45.0, 1e-12));
    CHECK(paths[1].reflection_loss_db == 10.0);
    CHECK(paths[1].label() == "NLOS(wall 0)");

    // North wall at distance 3: 2 * sqrt(2^2 + 3^2).
    CHECK(*paths[2].wall == 1);
    CHECK_THAT(paths[2].length_m, WithinAbs(2.0 * std::sqrt(13.0), 1e-12));
}

TEST_CASE("reflection points outside the wall extent are dropped")
{
    auto s = room_scene();
    s.walls[0].u_min = -2.0; // south wall now spans x in [0, 2]; specular point is x = 3
    const auto paths = trace_paths(s);
    REQUIRE(paths.size() == 2);
    CHECK(*paths[1].wall == 1);
}

TEST_CASE("walls with an antenna behind them are skipped")
{
    auto s = room_scene();
    s.walls[0].point = {0, 3, 0}; // plane y = 3, TX and RX behind it
    const auto paths = trace_paths(s);
    CHECK(paths.size() == 2);
}

TEST_CASE("specular reflection satisfies equal angles")
{
    auto s = room_scene();
    s.rx = {4.2, 3.7, 1.6};
    for (const auto &p : trace_paths(s))
    {
        if (p.kind != PathKind::reflected)
            continue;
        const Wall &w = s.walls[*p.wall];
        const Vec3 a = s.tx - p.vertices[1], b = s.rx - p.vertices[1];
        CHECK_THAT(dot(a, w.normal) / norm(a), WithinAbs(dot(b, w.normal) / norm(b), 1e-12));
        CHECK_THAT(w.signed_distance(p.vertices[1]), WithinAbs(0.0, 1e-12));
        CHECK_THAT(p.length_m, WithinAbs(distance(s.tx, w.mirror(s.rx)), 1e-12));
    }
}

TEST_CASE("scene validation names the violated constraint")
{
    auto s = room_scene();
    CHECK_NOTHROW(validate(s));
    s.rx = s.tx;
    CHECK_THROWS_WITH(validate(s), Catch::Matchers::ContainsSubstring("coincide"));
    s = room_scene();
    s.tx = {9, 2, 1};
    CHECK_THROWS_WITH(validate(s), Catch::Matchers::ContainsSubstring("outside the room"));
    s = room_scene();
    s.walls[1].normal = {0, -2, 0};
    CHECK_THROWS_WITH(validate(s), Catch::Matchers::ContainsSubstring("unit length"));
    s = room_scene();
    Blocker b;
    b.width = 0.0;
    b.trajectory = Trajectory(std::vector<Waypoint>{{0.0, {3, 2, 0}}});
    s.blockers.push_back(b);
    CHECK_THROWS_WITH(validate(s), Catch::Matchers::ContainsSubstring("blocker 0"));
}

TEST_CASE("screens face the link and stand on the floor")
{
    Blocker b;
    b.trajectory = Trajectory(std::vector<Waypoint>{{0.0, {2, 1, 0}}, {1.0, {4, 1, 0}}});
    const Screen sc = screen_at(b, 0.5, {0, 0, 1}, {0, 5, 1});
    CHECK(sc.center == Point{3, 1, 0.9});
    CHECK(sc.normal == Vec3{0, 1, 0});
    CHECK(sc.width_axis() == Vec3{-1, 0, 0});
    CHECK_THROWS_AS(screen_from_position({0, 0, 0}, 0.4, 1.8, {1, 1, 0}, {1, 1, 2}), std::invalid_argument);
}
