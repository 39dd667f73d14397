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

#include "blocktensor/scene_file.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace blocktensor
{
    namespace
    {
        using nlohmann::json;

        [[noreturn]] void fail(const std::string &where, const std::string &what)
        {
            throw SceneError(where + ": " + what);
        }

        std::string join(const std::string &base, const std::string &key)
        {
            return base.empty() ? key : base + "." + key;
        }

        std::string at(const std::string &base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

        void expect_object(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
        {
            if (!j.is_object())
                fail(where.empty() ? "scene" : where, "expected an object");
            for (auto it = j.begin(); it != j.end(); ++it)
            {
                bool ok = false;
                for (const char *a : allowed)
                    ok = ok || it.key() == a;
                if (!ok)
                    fail(join(where, it.key()), "unknown field");
            }
        }

        const json &required(const json &j, const std::string &where, const char *key)
        {
            auto it = j.find(key);
            if (it == j.end())
                fail(join(where, key), "missing required field");
            return *it;
        }

        double number(const json &j, const std::string &where)
        {
            if (!j.is_number())
                fail(where, "expected a number");
            const double v = j.get<double>();
            if (!std::isfinite(v))
                fail(where, "expected a finite number");
            return v;
        }

        double number_or(const json &j, const std::string &where, const char *key, double fallback)
        {
            auto it = j.find(key);
            return it == j.end() ? fallback : number(*it, join(where, key));
        }

        std::uint64_t unsigned_or(const json &j, const std::string &where, const char *key, std::uint64_t fallback)
        {
            auto it = j.find(key);
            if (it == j.end())
                return fallback;
            if (!it->is_number_unsigned())
                fail(join(where, key), "expected a nonnegative integer");
            return it->get<std::uint64_t>();
        }

        Vec3 vec3(const json &j, const std::string &where)
        {
            if (!j.is_array() || j.size() != 3)
                fail(where, "expected an array of three numbers");
            return {number(j[0], at(where, 0)), number(j[1], at(where, 1)), number(j[2], at(where, 2))};
        }

        std::pair<double, double> range(const json &j, const std::string &where)
        {
            if (!j.is_array() || j.size() != 2)
                fail(where, "expected an array [min, max]");
            const double a = number(j[0], at(where, 0)), b = number(j[1], at(where, 1));
            if (!(a < b))
                fail(where, "min must be below max");
            return {a, b};
        }

        void terminal(const json &j, const std::string &where, Point &position, double &boresight)
        {
            expect_object(j, where, {"position", "boresight_az_deg"});
            position = vec3(required(j, where, "position"), join(where, "position"));
            boresight = number_or(j, where, "boresight_az_deg", boresight);
        }

        CodebookParams codebook(const json &j, const std::string &where)
        {
            expect_object(j, where, {"beams", "range_deg", "peak_gain_dbi", "hpbw_deg", "sidelobe_floor_db"});
            CodebookParams p;
            p.n_beams = static_cast<std::size_t>(unsigned_or(j, where, "beams", p.n_beams));
            p.range_deg = number_or(j, where, "range_deg", p.range_deg);
            p.peak_gain_dbi = number_or(j, where, "peak_gain_dbi", p.peak_gain_dbi);
            p.hpbw_deg = number_or(j, where, "hpbw_deg", p.hpbw_deg);
            p.sidelobe_floor_db = number_or(j, where, "sidelobe_floor_db", p.sidelobe_floor_db);
            try
            {
                (void)make_codebook(p);
            }
            catch (const std::invalid_argument &e)
            {
                fail(where, e.what());
            }
            return p;
        }

        Wall wall(const json &j, const std::string &where)
        {
            expect_object(j, where, {"name", "point", "normal", "u_range", "v_range", "reflection_loss_db"});
            Wall w;
            if (auto it = j.find("name"); it != j.end())
            {
                if (!it->is_string())
                    fail(join(where, "name"), "expected a string");
                w.name = it->get<std::string>();
            }
            w.point = vec3(required(j, where, "point"), join(where, "point"));
            w.normal = vec3(required(j, where, "normal"), join(where, "normal"));
            const auto u = range(required(j, where, "u_range"), join(where, "u_range"));
            const auto v = range(required(j, where, "v_range"), join(where, "v_range"));
            w.u_min = u.first;
            w.u_max = u.second;
            w.v_min = v.first;
            w.v_max = v.second;
            w.reflection_loss_db = number_or(j, where, "reflection_loss_db", w.reflection_loss_db);
            return w;
        }

        Blocker blocker(const json &j, const std::string &where)
        {
            expect_object(j, where, {"width_m", "height_m", "waypoints"});
            Blocker b;
            b.width = number_or(j, where, "width_m", b.width);
            b.height = number_or(j, where, "height_m", b.height);
            const json &wps = required(j, where, "waypoints");
            const std::string wpath = join(where, "waypoints");
            if (!wps.is_array() || wps.empty())
                fail(wpath, "expected a non-empty array");
            std::vector<Waypoint> pts;
            for (std::size_t i = 0; i < wps.size(); ++i)
            {
                const std::string p = at(wpath, i);
                expect_object(wps[i], p, {"t", "position"});
                pts.push_back({number(required(wps[i], p, "t"), join(p, "t")),
                               vec3(required(wps[i], p, "position"), join(p, "position"))});
            }
            try
            {
                b.trajectory = Trajectory(std::move(pts));
            }
            catch (const std::invalid_argument &e)
            {
                fail(wpath, e.what());
            }
            return b;
        }

        ScanConfig scan(const json &j, const std::string &where)
        {
            expect_object(j, where,
                          {"n_delay_taps", "tap_spacing_ns", "scan_period_s", "duration_s", "carrier_ghz", "snr_db",
                           "noise"});
            ScanConfig c;
            c.n_delay_taps = static_cast<std::size_t>(unsigned_or(j, where, "n_delay_taps", c.n_delay_taps));
            c.tap_spacing_ns = number_or(j, where, "tap_spacing_ns", c.tap_spacing_ns);
            c.scan_period_s = number_or(j, where, "scan_period_s", c.scan_period_s);
            c.duration_s = number_or(j, where, "duration_s", c.duration_s);
            c.carrier_ghz = number_or(j, where, "carrier_ghz", c.carrier_ghz);
            c.snr_db = number_or(j, where, "snr_db", c.snr_db);
            if (auto it = j.find("noise"); it != j.end())
            {
                if (!it->is_boolean())
                    fail(join(where, "noise"), "expected true or false");
                c.noise = it->get<bool>();
            }
            return c;
        }
    }

    SceneConfig parse_scene(const std::string &json_text)
    {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw SceneError(std::string("scene: malformed JSON: ") + e.what());
        }

        expect_object(doc, "", {"room", "tx", "rx", "walls", "blockers", "codebook", "tx_codebook", "rx_codebook",
                                "scan", "seed"});
        SceneConfig cfg;
        Scene &s = cfg.scene;

        const json &room = required(doc, "", "room");
        expect_object(room, "room", {"min", "max"});
        s.room.min = vec3(required(room, "room", "min"), "room.min");
        s.room.max = vec3(required(room, "room", "max"), "room.max");

        terminal(required(doc, "", "tx"), "tx", s.tx, s.tx_boresight_az);
        terminal(required(doc, "", "rx"), "rx", s.rx, s.rx_boresight_az);

        if (auto it = doc.find("walls"); it != doc.end())
        {
            if (!it->is_array())
                fail("walls", "expected an array");
            for (std::size_t i = 0; i < it->size(); ++i)
                s.walls.push_back(wall((*it)[i], at("walls", i)));
        }
        if (auto it = doc.find("blockers"); it != doc.end())
        {
            if (!it->is_array())
                fail("blockers", "expected an array");
            for (std::size_t i = 0; i < it->size(); ++i)
                s.blockers.push_back(blocker((*it)[i], at("blockers", i)));
        }

        const bool shared = doc.contains("codebook");
        if (shared && (doc.contains("tx_codebook") || doc.contains("rx_codebook")))
            fail("codebook", "use either codebook or tx_codebook/rx_codebook, not both");
        if (shared)
            cfg.tx_codebook = cfg.rx_codebook = codebook(doc["codebook"], "codebook");
        if (auto it = doc.find("tx_codebook"); it != doc.end())
            cfg.tx_codebook = codebook(*it, "tx_codebook");
        if (auto it = doc.find("rx_codebook"); it != doc.end())
            cfg.rx_codebook = codebook(*it, "rx_codebook");

        if (auto it = doc.find("scan"); it != doc.end())
            cfg.scan = scan(*it, "scan");
        cfg.scan.seed = unsigned_or(doc, "", "seed", cfg.scan.seed);

        try
        {
            cfg.scan.validate();
        }
        catch (const std::invalid_argument &e)
        {
            fail("scan", e.what());
        }
        try
        {
            validate(s);
        }
        catch (const std::invalid_argument &e)
        {
            fail("scene", e.what());
        }
        return cfg;
    }

    SceneConfig load_scene(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw SceneError("scene: cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scene(ss.str());
    }
}
