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

#include "blocktensor/export.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace blocktensor
{
    using nlohmann::json;

    namespace
    {
        std::string fmt(const char *f, double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, f, v);
            return buf;
        }

        std::string f3(double v) { return fmt("%.3f", v); }
        std::string f6(double v) { return fmt("%.6f", v); }

        std::string xml_escape(const std::string &s)
        {
            std::string o;
            for (char c : s)
                switch (c)
                {
                case '<': o += "&lt;"; break;
                case '>': o += "&gt;"; break;
                case '&': o += "&amp;"; break;
                case '"': o += "&quot;"; break;
                default: o += c;
                }
            return o;
        }

        std::string state_label(std::size_t s, std::size_t paths)
        {
            std::string l;
            for (std::size_t p = 0; p < paths; ++p)
                l += (s >> p) & 1u ? 'B' : 'U';
            return l;
        }

        json mat2(const Eigen::Matrix2d &m)
        {
            return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
        }

        json rows_of(const Eigen::MatrixXd &m)
        {
            json out = json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r)
            {
                json row = json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    row.push_back(m(r, c));
                out.push_back(std::move(row));
            }
            return out;
        }

        constexpr std::array<const char *, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

        struct Frame
        {
            double left = 70, right = 160, top = 40, bottom = 55;
            double width = 1000, height = 420;
            double pw() const { return width - left - right; }
            double ph() const { return height - top - bottom; }
        };

        // Round axis steps to 1, 2 or 5 times a power of ten.
        double nice_step(double span, int target)
        {
            if (!(span > 0.0))
                return 1.0;
            const double raw = span / target;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            const double n = raw / mag;
            return (n < 1.5 ? 1.0 : n < 3.5 ? 2.0 : n < 7.5 ? 5.0 : 10.0) * mag;
        }

        void axes(std::ostringstream &o, const Frame &f, double x0, double x1, double y0, double y1,
                  const PlotLabels &labels, bool y_ticks)
        {
            o << "<rect x=\"" << f3(f.left) << "\" y=\"" << f3(f.top) << "\" width=\"" << f3(f.pw())
              << "\" height=\"" << f3(f.ph()) << "\" fill=\"none\" stroke=\"#000\"/>\n";
            const double xs = nice_step(x1 - x0, 8);
            for (double v = std::ceil(x0 / xs) * xs; v <= x1 + 1e-9 * xs; v += xs)
            {
                const double px = f.left + (v - x0) / (x1 - x0) * f.pw();
                o << "<line x1=\"" << f3(px) << "\" y1=\"" << f3(f.top + f.ph()) << "\" x2=\"" << f3(px)
                  << "\" y2=\"" << f3(f.top + f.ph() + 5) << "\" stroke=\"#000\"/>\n"
                  << "<text x=\"" << f3(px) << "\" y=\"" << f3(f.top + f.ph() + 18)
                  << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt("%g", std::abs(v) < 1e-12 ? 0.0 : v)
                  << "</text>\n";
            }
            if (y_ticks)
            {
                const double ys = nice_step(y1 - y0, 6);
                for (double v = std::ceil(y0 / ys) * ys; v <= y1 + 1e-9 * ys; v += ys)
                {
                    const double py = f.top + f.ph() - (v - y0) / (y1 - y0) * f.ph();
                    o << "<line x1=\"" << f3(f.left - 5) << "\" y1=\"" << f3(py) << "\" x2=\"" << f3(f.left)
                      << "\" y2=\"" << f3(py) << "\" stroke=\"#000\"/>\n"
                      << "<text x=\"" << f3(f.left - 8) << "\" y=\"" << f3(py + 4)
                      << "\" font-size=\"11\" text-anchor=\"end\">" << fmt("%g", std::abs(v) < 1e-12 ? 0.0 : v)
                      << "</text>\n";
                }
            }
            o << "<text x=\"" << f3(f.left + f.pw() / 2) << "\" y=\"" << f3(f.height - 12)
              << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(labels.x_label) << "</text>\n";
            o << "<text x=\"16\" y=\"" << f3(f.top + f.ph() / 2) << "\" font-size=\"13\" text-anchor=\"middle\" "
              << "transform=\"rotate(-90 16 " << f3(f.top + f.ph() / 2) << ")\">" << xml_escape(labels.y_label)
              << "</text>\n";
            o << "<text x=\"" << f3(f.left + f.pw() / 2) << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">"
              << xml_escape(labels.title) << "</text>\n";
        }

        std::string hex_color(double u)
        {
            // dark blue -> teal -> yellow
            static constexpr double stops[3][3] = {{0.08, 0.06, 0.35}, {0.13, 0.57, 0.55}, {0.99, 0.91, 0.14}};
            u = std::clamp(u, 0.0, 1.0);
            const double s = u * 2.0;
            const int i = std::min(1, static_cast<int>(s));
            const double w = s - i;
            char buf[8];
            int c[3];
            for (int k = 0; k < 3; ++k)
                c[k] = static_cast<int>(std::lround(255.0 * ((1.0 - w) * stops[i][k] + w * stops[i + 1][k])));
            std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
            return buf;
        }

        std::vector<std::string> split(const std::string &line, char sep)
        {
            std::vector<std::string> out;
            std::string cur;
            std::istringstream ss(line);
            while (std::getline(ss, cur, sep))
                out.push_back(cur);
            if (!line.empty() && line.back() == sep)
                out.emplace_back();
            return out;
        }
    }

    json to_json(const Eigen::MatrixXd &m)
    {
        json data = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                data.push_back(m(r, c));
        return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
    }

    Eigen::MatrixXd matrix_from_json(const json &j, const std::string &where)
    {
        if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
            throw ExportError(where + ": expected {rows, cols, data}");
        if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned() || !j["data"].is_array())
            throw ExportError(where + ": malformed matrix");
        const auto rows = j["rows"].get<Eigen::Index>(), cols = j["cols"].get<Eigen::Index>();
        const json &d = j["data"];
        if (static_cast<Eigen::Index>(d.size()) != rows * cols)
            throw ExportError(where + ": data length does not match rows * cols");
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
            {
                const json &v = d[static_cast<std::size_t>(r * cols + c)];
                if (!v.is_number())
                    throw ExportError(where + ": non-numeric entry");
                m(r, c) = v.get<double>();
            }
        return m;
    }

    json to_json(const CPModel &m)
    {
        return {{"kind", "cp"},
                {"rank", m.rank},
                {"fit", m.fit},
                {"iterations", m.iterations},
                {"converged", m.converged},
                {"regularized", m.regularized},
                {"n_tx", m.map.n_tx},
                {"n_rx", m.map.n_rx},
                {"objective_history", m.objective_history},
                {"timestamps", m.timestamps},
                {"D", to_json(m.D)},
                {"S", to_json(m.S)},
                {"G", to_json(m.G)}};
    }

    CPModel cp_model_from_json(const json &j)
    {
        if (!j.is_object() || j.value("kind", "") != "cp")
            throw ExportError("model: not a CP model document");
        CPModel m;
        try
        {
            m.rank = j.at("rank").get<std::size_t>();
            m.fit = j.at("fit").get<double>();
            m.iterations = j.at("iterations").get<std::size_t>();
            m.converged = j.at("converged").get<bool>();
            m.regularized = j.at("regularized").get<bool>();
            m.map = {j.at("n_tx").get<std::size_t>(), j.at("n_rx").get<std::size_t>()};
            m.timestamps = j.at("timestamps").get<std::vector<double>>();
            if (j.contains("objective_history"))
                m.objective_history = j.at("objective_history").get<std::vector<double>>();
            m.D = matrix_from_json(j.at("D"), "model.D");
            m.S = matrix_from_json(j.at("S"), "model.S");
            m.G = matrix_from_json(j.at("G"), "model.G");
        }
        catch (const json::exception &e)
        {
            throw ExportError(std::string("model: ") + e.what());
        }
        const auto L = static_cast<Eigen::Index>(m.rank);
        if (m.D.cols() != L || m.S.cols() != L || m.G.cols() != L)
            throw ExportError("model: factor column counts differ from rank");
        if (!m.timestamps.empty() && m.timestamps.size() != static_cast<std::size_t>(m.G.rows()))
            throw ExportError("model: timestamp count differs from G rows");
        return m;
    }

    json to_json(const PCAModel &m)
    {
        json sv = json::array();
        for (Eigen::Index l = 0; l < m.singular_values.size(); ++l)
            sv.push_back(m.singular_values(l));
        return {{"kind", "pca"},
                {"rank", m.rank},
                {"total_energy", m.total_energy},
                {"singular_values", sv},
                {"timestamps", m.timestamps},
                {"loadings", to_json(m.loadings)},
                {"scores", to_json(m.scores)}};
    }

    json to_json(const AnalysisReport &r)
    {
        json traces = json::array();
        for (const auto &t : r.traces)
        {
            json segs = json::array();
            for (const auto &s : t.segments.segments)
                segs.push_back({{"start", s.start},
                                {"end", s.end},
                                {"slope_db_per_s", s.slope_db_per_s},
                                {"intercept_db", s.intercept_db},
                                {"rmse_db", s.rmse_db}});
            json evs = json::array();
            for (const auto &e : t.events)
                evs.push_back({{"first", e.first},
                               {"last", e.last},
                               {"t_fade_start", e.t_fade_start},
                               {"t_block_start", e.t_block_start},
                               {"t_block_end", e.t_block_end},
                               {"t_rise_end", e.t_rise_end},
                               {"depth_db", e.depth_db},
                               {"t_fading", e.t_fading},
                               {"t_blocked", e.t_blocked},
                               {"t_rising", e.t_rising}});
            std::size_t blocked = 0;
            for (auto s : t.states.states)
                blocked += s == State::blocked;
            traces.push_back({{"id", t.trace.id},
                              {"unblocked_ref_db", t.states.unblocked_ref_db},
                              {"blocked_fraction", t.states.states.empty()
                                                       ? 0.0
                                                       : static_cast<double>(blocked) /
                                                             static_cast<double>(t.states.states.size())},
                              {"segments", segs},
                              {"events", evs}});
        }

        json per_path = json::array();
        for (std::size_t p = 0; p < r.markov.per_path.size(); ++p)
            per_path.push_back({{"id", r.traces[p].trace.id},
                                {"transition", mat2(r.markov.per_path[p])},
                                {"counts", mat2(r.markov.per_path_counts[p])},
                                {"unvisited", {r.markov.per_path_unvisited[p][0], r.markov.per_path_unvisited[p][1]}}});
        json labels = json::array();
        for (std::size_t s = 0; s < r.markov.joint_unvisited.size(); ++s)
            labels.push_back(state_label(s, r.traces.size()));

        return {{"options",
                 {{"threshold_db", r.options.threshold_db},
                  {"hysteresis_db", r.options.hysteresis_db},
                  {"max_rmse_db", r.options.max_rmse_db},
                  {"label_segments", r.options.label_segments},
                  {"slot_duration_s", r.options.slot_duration}}},
                {"traces", traces},
                {"markov",
                 {{"slot_duration_s", r.markov.slot_duration},
                  {"states", {"U", "B"}},
                  {"per_path", per_path},
                  {"joint",
                   {{"state_labels", labels},
                    {"transition", rows_of(r.markov.joint)},
                    {"counts", rows_of(r.markov.joint_counts)},
                    {"unvisited", r.markov.joint_unvisited}}}}},
                {"outage",
                 {{"ever_all_blocked", r.outage.ever_all_blocked},
                  {"all_blocked_fraction", r.outage.all_blocked_fraction},
                  {"overlap", rows_of(r.outage.overlap)}}}};
    }

    void write_text(const std::string &path, const std::string &text)
    {
        namespace fs = std::filesystem;
        fs::path tmp(path);
        tmp += ".tmp." + std::to_string(::getpid());
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw ExportError("cannot open '" + tmp.string() + "' for writing");
            out << text;
            out.flush();
            if (!out)
            {
                std::error_code ec;
                fs::remove(tmp, ec);
                throw ExportError("write to '" + tmp.string() + "' failed");
            }
        }
        std::error_code ec;
        fs::rename(tmp, path, ec);
        if (ec)
        {
            fs::remove(tmp, ec);
            throw ExportError("cannot rename into '" + path + "'");
        }
    }

    std::string read_text(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ExportError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_json(const std::string &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

    json read_json(const std::string &path)
    {
        try
        {
            return json::parse(read_text(path));
        }
        catch (const json::parse_error &e)
        {
            throw ExportError("'" + path + "': malformed JSON: " + e.what());
        }
    }

    std::string traces_csv(const std::vector<GainTrace> &traces)
    {
        if (traces.empty())
            throw ExportError("traces_csv: no traces");
        std::ostringstream o;
        o << "time_s";
        for (const auto &t : traces)
        {
            if (t.timestamps != traces.front().timestamps || t.levels_db.size() != t.timestamps.size())
                throw ExportError("traces_csv: traces do not share timestamps");
            o << ',' << t.id;
        }
        o << '\n';
        for (std::size_t k = 0; k < traces.front().size(); ++k)
        {
            o << f6(traces.front().timestamps[k]);
            for (const auto &t : traces)
                o << ',' << f6(t.levels_db[k]);
            o << '\n';
        }
        return o.str();
    }

    std::vector<GainTrace> parse_traces_csv(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line))
            throw ExportError("traces csv: empty input");
        const auto header = split(line, ',');
        if (header.size() < 2 || header[0] != "time_s")
            throw ExportError("traces csv: header must start with time_s and name at least one series");
        std::vector<GainTrace> out(header.size() - 1);
        for (std::size_t c = 1; c < header.size(); ++c)
            out[c - 1].id = header[c];
        std::size_t row = 1;
        while (std::getline(in, line))
        {
            ++row;
            if (line.empty())
                continue;
            const auto cells = split(line, ',');
            if (cells.size() != header.size())
                throw ExportError("traces csv: row " + std::to_string(row) + " has the wrong column count");
            std::vector<double> v(cells.size());
            for (std::size_t c = 0; c < cells.size(); ++c)
            {
                char *end = nullptr;
                v[c] = std::strtod(cells[c].c_str(), &end);
                if (end == cells[c].c_str() || *end != '\0')
                    throw ExportError("traces csv: row " + std::to_string(row) + " has a non-numeric cell");
            }
            for (std::size_t c = 1; c < cells.size(); ++c)
            {
                out[c - 1].timestamps.push_back(v[0]);
                out[c - 1].levels_db.push_back(v[c]);
            }
        }
        return out;
    }

    std::string events_csv(const AnalysisReport &r)
    {
        std::ostringstream o;
        o << "trace,t_fade_start,t_block_start,t_block_end,t_rise_end,depth_db,t_fading,t_blocked,t_rising\n";
        for (const auto &t : r.traces)
            for (const auto &e : t.events)
                o << t.trace.id << ',' << f6(e.t_fade_start) << ',' << f6(e.t_block_start) << ','
                  << f6(e.t_block_end) << ',' << f6(e.t_rise_end) << ',' << f6(e.depth_db) << ','
                  << f6(e.t_fading) << ',' << f6(e.t_blocked) << ',' << f6(e.t_rising) << '\n';
        return o.str();
    }

    std::string states_csv(const AnalysisReport &r)
    {
        if (r.traces.empty())
            throw ExportError("states_csv: no traces");
        std::ostringstream o;
        o << "time_s";
        for (const auto &t : r.traces)
            o << ',' << t.trace.id;
        o << '\n';
        const auto &ts = r.traces.front().trace.timestamps;
        for (std::size_t k = 0; k < ts.size(); ++k)
        {
            o << f6(ts[k]);
            for (const auto &t : r.traces)
                o << ',' << (t.states.states[k] == State::blocked ? 1 : 0);
            o << '\n';
        }
        return o.str();
    }

    std::string matrix_csv(const Eigen::MatrixXd &m, const std::vector<std::string> &row_labels,
                           const std::vector<std::string> &col_labels)
    {
        if (row_labels.size() != static_cast<std::size_t>(m.rows()) ||
            col_labels.size() != static_cast<std::size_t>(m.cols()))
            throw ExportError("matrix_csv: label counts do not match the matrix");
        std::ostringstream o;
        o << "from";
        for (const auto &c : col_labels)
            o << ',' << c;
        o << '\n';
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            o << row_labels[static_cast<std::size_t>(r)];
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                o << ',' << fmt("%.12g", m(r, c));
            o << '\n';
        }
        return o.str();
    }

    std::string traces_svg(const std::vector<GainTrace> &traces, const PlotLabels &labels)
    {
        if (traces.empty() || traces.front().size() == 0)
            throw ExportError("traces_svg: nothing to plot");
        double x0 = traces.front().timestamps.front(), x1 = traces.front().timestamps.back();
        double y0 = traces.front().levels_db.front(), y1 = y0;
        for (const auto &t : traces)
        {
            if (t.timestamps.size() != t.levels_db.size() || t.size() == 0)
                throw ExportError("traces_svg: malformed trace '" + t.id + "'");
            x0 = std::min(x0, t.timestamps.front());
            x1 = std::max(x1, t.timestamps.back());
            for (double v : t.levels_db)
            {
                y0 = std::min(y0, v);
                y1 = std::max(y1, v);
            }
        }
        if (!(x1 > x0))
            x1 = x0 + 1.0;
        const double pad = std::max(1.0, 0.05 * (y1 - y0));
        y0 -= pad;
        y1 += pad;

        Frame f;
        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(f.width) << "\" height=\"" << f3(f.height)
          << "\" viewBox=\"0 0 " << f3(f.width) << ' ' << f3(f.height) << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
        axes(o, f, x0, x1, y0, y1, labels, true);
        for (std::size_t s = 0; s < traces.size(); ++s)
        {
            const auto &t = traces[s];
            const char *color = palette[s % palette.size()];
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t k = 0; k < t.size(); ++k)
            {
                const double px = f.left + (t.timestamps[k] - x0) / (x1 - x0) * f.pw();
                const double py = f.top + f.ph() - (t.levels_db[k] - y0) / (y1 - y0) * f.ph();
                o << (k ? " " : "") << f3(px) << ',' << f3(py);
            }
            o << "\"/>\n";
            const double ly = f.top + 14 + 18 * static_cast<double>(s);
            const double lx = f.left + f.pw() + 12;
            o << "<line x1=\"" << f3(lx) << "\" y1=\"" << f3(ly) << "\" x2=\"" << f3(lx + 22) << "\" y2=\""
              << f3(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
              << "<text x=\"" << f3(lx + 28) << "\" y=\"" << f3(ly + 4) << "\" font-size=\"12\">" << xml_escape(t.id)
              << "</text>\n";
        }
        o << "</svg>\n";
        return o.str();
    }

    std::string heatmap_svg(const Eigen::MatrixXd &values_db, const std::vector<double> &timestamps,
                            const PlotLabels &labels)
    {
        const Eigen::Index rows = values_db.rows(), cols = values_db.cols();
        if (rows == 0 || cols == 0)
            throw ExportError("heatmap_svg: nothing to plot");
        if (timestamps.size() != static_cast<std::size_t>(cols))
            throw ExportError("heatmap_svg: timestamp count differs from the column count");
        double lo = values_db(0, 0), hi = lo;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
            {
                lo = std::min(lo, values_db(r, c));
                hi = std::max(hi, values_db(r, c));
            }
        constexpr int levels = 48;
        auto level = [&](double v)
        { return hi > lo ? std::min(levels - 1, static_cast<int>((v - lo) / (hi - lo) * levels)) : 0; };

        Frame f;
        f.height = std::max(420.0, 2.0 * static_cast<double>(rows) + f.top + f.bottom);
        const double cw = f.pw() / static_cast<double>(cols), ch = f.ph() / static_cast<double>(rows);
        const double t0 = timestamps.front();
        const double t1 = cols > 1 ? timestamps.back() : t0 + 1.0;

        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(f.width) << "\" height=\"" << f3(f.height)
          << "\" viewBox=\"0 0 " << f3(f.width) << ' ' << f3(f.height) << "\" data-rows=\"" << rows
          << "\" data-cols=\"" << cols << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n<g shape-rendering=\"crispEdges\">\n";
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            // row 0 at the bottom
            const double y = f.top + f.ph() - static_cast<double>(r + 1) * ch;
            for (Eigen::Index c = 0; c < cols;)
            {
                const int lv = level(values_db(r, c));
                Eigen::Index e = c + 1;
                while (e < cols && level(values_db(r, e)) == lv)
                    ++e;
                o << "<rect x=\"" << f3(f.left + static_cast<double>(c) * cw) << "\" y=\"" << f3(y) << "\" width=\""
                  << f3(static_cast<double>(e - c) * cw) << "\" height=\"" << f3(ch) << "\" fill=\""
                  << hex_color((lv + 0.5) / levels) << "\" data-cells=\"" << (e - c) << "\"/>\n";
                c = e;
            }
        }
        o << "</g>\n";
        axes(o, f, t0, t1, 0.0, static_cast<double>(rows), labels, true);

        const double bx = f.left + f.pw() + 30, bw = 18;
        for (int i = 0; i < levels; ++i)
        {
            const double y = f.top + f.ph() - (i + 1) * f.ph() / levels;
            o << "<rect x=\"" << f3(bx) << "\" y=\"" << f3(y) << "\" width=\"" << f3(bw) << "\" height=\""
              << f3(f.ph() / levels + 0.5) << "\" fill=\"" << hex_color((i + 0.5) / levels) << "\"/>\n";
        }
        o << "<text x=\"" << f3(bx + bw + 4) << "\" y=\"" << f3(f.top + 10) << "\" font-size=\"11\">" << f3(hi)
          << " dB</text>\n"
          << "<text x=\"" << f3(bx + bw + 4) << "\" y=\"" << f3(f.top + f.ph()) << "\" font-size=\"11\">" << f3(lo)
          << " dB</text>\n"
          << "</svg>\n";
        return o.str();
    }

    Eigen::MatrixXd to_db(const Eigen::MatrixXd &linear, double floor_db)
    {
        Eigen::MatrixXd out(linear.rows(), linear.cols());
        for (Eigen::Index c = 0; c < linear.cols(); ++c)
            for (Eigen::Index r = 0; r < linear.rows(); ++r)
            {
                const double v = linear(r, c);
                out(r, c) = v > 0.0 ? std::max(10.0 * std::log10(v), floor_db) : floor_db;
            }
        return out;
    }
}
