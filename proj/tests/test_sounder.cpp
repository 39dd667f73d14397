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

#include "blocktensor/sounder.hpp"
#include "blocktensor/tensorops.hpp"

#include "catch_amalgamated.hpp"

#include <cstring>

using namespace blocktensor;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    constexpr double friis_4m = 9.861411126068417e-05; // tests/oracles/ked_friis_oracle.py
    constexpr double los_delay_ns = 13.342563807926082;

    Scene link_scene()
    {
        Scene s;
        s.room = {{-1, -3, 0}, {5, 3, 3}};
        s.tx = {0, 0, 1};
        s.rx = {4, 0, 1};
        s.tx_boresight_az = 0.0;
        s.rx_boresight_az = 180.0;
        return s;
    }

    Wall side_wall(double y, double ny)
    {
        Wall w;
        w.name = "side";
        w.point = {-1, y, 0};
        w.normal = {0, ny, 0};
        w.u_min = -10;
        w.u_max = 10;
        w.v_min = 0;
        w.v_max = 3;
        return w;
    }

    Blocker standing(Point at)
    {
        Blocker b;
        b.trajectory = Trajectory(std::vector<Waypoint>{{0.0, at}});
        return b;
    }

    ScanConfig quiet(double duration = 0.03)
    {
        ScanConfig c;
        c.noise = false;
        c.duration_s = duration;
        return c;
    }

    Codebook boresight() { return make_codebook(1, 45.0, 0.0, 30.0, -20.0); }
}

TEST_CASE("single LOS tap carries the Friis amplitude")
{
    const Sounder s(link_scene(), boresight(), boresight(), quiet());
    const auto cir = s.cir(0, 0, 0.0);
    const std::size_t bin = static_cast<std::size_t>(std::llround(los_delay_ns));
    REQUIRE(bin == 13);
    CHECK(s.delay_bin(0) == bin);
    for (std::size_t i = 0; i < cir.taps.size(); ++i)
    {
        if (i == bin)
            CHECK_THAT(std::abs(cir.taps[i]), WithinRel(friis_4m, 1e-12));
        else
            CHECK(cir.taps[i] == std::complex<double>{});
    }
    CHECK(cir.dropped_paths == 0);
}

TEST_CASE("beam gains scale the tap")
{
    const auto cb = make_codebook(12, 45.0, 23.0, 30.0, -20.0);
    const Sounder s(link_scene(), cb, cb, quiet());
    const auto cir = s.cir(4, 7, 0.0);
    const double expect = friis_4m * gain(cb, 4, 0.0) * gain(cb, 7, 0.0);
    CHECK_THAT(std::abs(cir.taps[13]), WithinRel(expect, 1e-12));
}

TEST_CASE("reflected tap includes the wall loss")
{
    auto scene = link_scene();
    scene.walls.push_back(side_wall(2.0, -1.0));
    const Sounder s(scene, boresight(), boresight(), quiet());
    REQUIRE(s.paths().size() == 2);
    const double len = 5.656854249492381;
    const double amp = s.config().wavelength_m() / (4.0 * std::numbers::pi * len) * gain(boresight(), 0, 45.0) *
                       gain(boresight(), 0, -45.0) * std::pow(10.0, -0.5);
    CHECK_THAT(std::abs(s.unblocked_amplitude(1, 0, 0)), WithinRel(amp, 1e-12));
    CHECK(s.delay_bin(1) == 19);
}

TEST_CASE("blockage attenuates the tap by exactly the screen loss")
{
    auto scene = link_scene();
    const Sounder clear(scene, boresight(), boresight(), quiet());
    scene.blockers.push_back(standing({2, 0, 0}));
    const Sounder blocked(scene, boresight(), boresight(), quiet());
    const double loss = blocked.path_losses_db(0.0)[0];
    CHECK(loss > 15.0);
    const double ratio_db = 20.0 * std::log10(std::abs(clear.cir(0, 0, 0.0).taps[13]) /
                                              std::abs(blocked.cir(0, 0, 0.0).taps[13]));
    CHECK_THAT(ratio_db, WithinAbs(loss, 1e-9));
}

TEST_CASE("inserting a blocker never increases a tap magnitude")
{
    auto scene = link_scene();
    scene.walls.push_back(side_wall(2.0, -1.0));
    scene.walls.push_back(side_wall(-2.5, 1.0));
    const auto cb = make_codebook(4, 45.0, 23.0, 30.0, -20.0);
    const Sounder clear(scene, cb, cb, quiet());
    scene.blockers.push_back(standing({1.0, 1.0, 0}));
    scene.blockers.push_back(standing({2.0, 0.1, 0}));
    const Sounder blocked(scene, cb, cb, quiet());
    const auto a = clear.scan(0.0, 0), b = blocked.scan(0.0, 0);
    for (std::size_t n = 0; n < a.data.size(); ++n)
        CHECK(std::abs(b.data[n]) <= std::abs(a.data[n]) * (1.0 + 1e-12));
}

TEST_CASE("paths beyond the tap window are dropped and counted")
{
    auto cfg = quiet();
    cfg.n_delay_taps = 10;
    const Sounder s(link_scene(), boresight(), boresight(), cfg);
    const auto cir = s.cir(0, 0, 0.0);
    CHECK(cir.dropped_paths == 1);
    for (auto v : cir.taps)
        CHECK(v == std::complex<double>{});
    CHECK(s.measure().dropped_paths == 1);
}

TEST_CASE("scan count and timestamps")
{
    ScanConfig c;
    CHECK(c.scan_count() == 1666);
    c.duration_s = c.scan_period_s;
    CHECK(c.scan_count() == 1);
    c.duration_s = 0.3;
    c.scan_period_s = 0.1;
    CHECK(c.scan_count() == 3);
    const auto ts = scan_timestamps(4, 0.003);
    CHECK(ts[3] == 3.0 * 0.003);
    c.scan_period_s = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("default scan cube shape and boresight maximum")
{
    const auto cb = make_codebook(CodebookParams{});
    const auto cube = run_scan(link_scene(), 0.0, quiet(), cb, cb);
    CHECK(cube.n_delay == 64);
    CHECK(cube.n_rx == 12);
    CHECK(cube.n_tx == 12);
    std::size_t best = 0;
    for (std::size_t n = 0; n < cube.data.size(); ++n)
        if (std::abs(cube.data[n]) > std::abs(cube.data[best]))
            best = n;
    const std::size_t x = best / (cube.n_delay * cube.n_rx), r = best / cube.n_delay % cube.n_rx;
    CHECK((x == 5 || x == 6));
    CHECK((r == 5 || r == 6));
}

TEST_CASE("mirrored scene permutes the beam indices")
{
    auto scene = link_scene();
    scene.walls.push_back(side_wall(1.5, -1.0));
    scene.blockers.push_back(standing({1.5, 0.2, 0}));
    auto mirrored = scene;
    mirrored.walls[0] = side_wall(-1.5, 1.0);
    mirrored.blockers[0] = standing({1.5, -0.2, 0});
    const auto cb = make_codebook(12, 45.0, 23.0, 30.0, -20.0);
    const auto a = run_scan(scene, 0.0, quiet(), cb, cb);
    const auto b = run_scan(mirrored, 0.0, quiet(), cb, cb);
    double peak = 0.0;
    for (auto v : a.data)
        peak = std::max(peak, std::abs(v));
    for (std::size_t x = 0; x < 12; ++x)
        for (std::size_t r = 0; r < 12; ++r)
            for (std::size_t i = 0; i < a.n_delay; ++i)
                CHECK(std::abs(a(i, r, x) - b(i, 11 - r, 11 - x)) <= 1e-9 * peak);
}

TEST_CASE("noise level and determinism")
{
    ScanConfig c;
    c.duration_s = 0.3;
    c.snr_db = 20.0;
    const auto cb = make_codebook(4, 45.0, 23.0, 30.0, -20.0);
    const Sounder s(link_scene(), cb, cb, c);
    double peak = 0.0;
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t r = 0; r < 4; ++r)
            peak = std::max(peak, std::norm(s.unblocked_amplitude(0, x, r)));
    CHECK_THAT(s.noise_variance(), WithinRel(peak / 100.0, 1e-12));

    const auto t1 = s.measure(), t2 = s.measure();
    CHECK(std::memcmp(t1.data.data(), t2.data.data(), t1.data.size() * sizeof(t1.data[0])) == 0);

    // Empty taps hold pure noise; its sample variance should match.
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < t1.n_scans; ++k)
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t i = 30; i < 64; ++i, ++n)
                    acc += std::norm(t1(i, r, x, k));
    CHECK_THAT(acc / static_cast<double>(n), WithinRel(s.noise_variance(), 0.03));

    c.seed = 2;
    const auto t3 = Sounder(link_scene(), cb, cb, c).measure();
    CHECK(t3.data != t1.data);
}

TEST_CASE("single-pair synthesis agrees with the scan cube")
{
    auto scene = link_scene();
    scene.blockers.push_back(standing({2, 0.1, 0}));
    const auto cb = make_codebook(3, 45.0, 23.0, 30.0, -20.0);
    ScanConfig c;
    const Sounder s(scene, cb, cb, c);
    const auto cube = s.scan(0.009, 3);
    const auto cir = synthesize_cir(scene, s.paths(), cb, cb, 2, 1, 0.009, c);
    for (std::size_t i = 0; i < cube.n_delay; ++i)
        CHECK(cir.taps[i] == cube(i, 1, 2));

    c.noise = false;
    const auto clean = synthesize_cir(scene, s.paths(), cb, cb, 2, 1, 0.009, c);
    const auto direct = Sounder(scene, cb, cb, c).cir(2, 1, 0.009);
    CHECK(clean.taps == direct.taps);
}

TEST_CASE("measurement tensor layout")
{
    const auto cb = make_codebook(3, 45.0, 23.0, 30.0, -20.0);
    auto cfg = quiet(0.012);
    const auto t4 = run_measurement(link_scene(), cfg, cb, cb);
    CHECK(t4.n_scans == 4);
    CHECK(t4.n_rx == 3);
    CHECK(t4.n_tx == 3);
    CHECK(t4.timestamps.size() == 4);
    const Sounder s(link_scene(), cb, cb, cfg);
    const auto cir = s.cir(2, 0, t4.timestamps[3]);
    for (std::size_t i = 0; i < t4.n_delay; ++i)
        CHECK(t4(i, 0, 2, 3) == cir.taps[i]);
}

TEST_CASE("path power trace follows the blocked path")
{
    auto scene = link_scene();
    scene.walls.push_back(side_wall(2.0, -1.0));
    Blocker walker;
    walker.trajectory = Trajectory(std::vector<Waypoint>{{0.0, {2, -2, 0}}, {0.3, {2, 2, 0}}});
    scene.blockers.push_back(walker);
    const auto cb = make_codebook(12, 45.0, 23.0, 30.0, -20.0);
    const Sounder s(scene, cb, cb, quiet(0.3));
    const auto t3 = partial_unfold(s.measure());
    const auto los = path_power_trace(s, t3, 0);
    REQUIRE(los.size() == 100);
    CHECK(los[50] < los[0] * 0.1);
    CHECK_THAT(los[99], WithinRel(los[0], 1e-12));
    CHECK_THROWS_AS(path_power_trace(s, t3, 5), std::out_of_range);
}
