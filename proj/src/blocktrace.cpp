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

#include "blocktensor/blocktrace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blocktensor
{
    namespace
    {
        constexpr double fade_margin_db = 3.0;

        double level_of(double g, double floor_db)
        {
            const double p = g * g;
            if (!(p > 0.0))
                return floor_db;
            return std::max(10.0 * std::log10(p), floor_db);
        }

        // Least-squares line over [a, b) from prefix sums.
        struct Prefix
        {
            std::vector<double> n, t, tt, y, yy, ty;

            explicit Prefix(const GainTrace &tr)
            {
                const std::size_t N = tr.size();
                for (auto *v : {&n, &t, &tt, &y, &yy, &ty})
                    v->assign(N + 1, 0.0);
                const double t0 = tr.timestamps.front();
                for (std::size_t i = 0; i < N; ++i)
                {
                    const double x = tr.timestamps[i] - t0, z = tr.levels_db[i];
                    n[i + 1] = n[i] + 1.0;
                    t[i + 1] = t[i] + x;
                    tt[i + 1] = tt[i] + x * x;
                    y[i + 1] = y[i] + z;
                    yy[i + 1] = yy[i] + z * z;
                    ty[i + 1] = ty[i] + x * z;
                }
            }

            Segment fit(std::size_t a, std::size_t b, const GainTrace &tr) const
            {
                const double c = n[b] - n[a];
                const double st = t[b] - t[a], stt = tt[b] - tt[a];
                const double sy = y[b] - y[a], syy = yy[b] - yy[a], sty = ty[b] - ty[a];
                const double vt = stt - st * st / c;
                const double cty = sty - st * sy / c;
                const double vy = syy - sy * sy / c;
                Segment s;
                s.start = a;
                s.end = b;
                const double slope = vt > 0.0 ? cty / vt : 0.0;
                const double mean_t = st / c, mean_y = sy / c;
                const double t0 = tr.timestamps[a] - tr.timestamps.front();
                s.slope_db_per_s = slope;
                s.intercept_db = mean_y + slope * (t0 - mean_t);
                const double sse = std::max(0.0, vt > 0.0 ? vy - cty * cty / vt : vy);
                s.rmse_db = std::sqrt(sse / c);
                return s;
            }
        };

        void check_trace(const GainTrace &tr, const char *who)
        {
            if (tr.timestamps.size() != tr.levels_db.size())
                throw std::invalid_argument(std::string(who) + ": timestamps and levels differ in length");
            for (std::size_t i = 1; i < tr.timestamps.size(); ++i)
                if (!(tr.timestamps[i] > tr.timestamps[i - 1]))
                    throw std::invalid_argument(std::string(who) + ": timestamps must be strictly increasing");
        }

        void check_sequences(const std::vector<StateSequence> &seqs, const char *who)
        {
            if (seqs.empty())
                throw std::invalid_argument(std::string(who) + ": no state sequences");
            for (const auto &s : seqs)
                if (s.states.size() != seqs.front().states.size())
                    throw std::invalid_argument(std::string(who) + ": state sequences differ in length");
        }
    }

    GainTrace make_trace(std::string id, std::vector<double> timestamps, const std::vector<double> &values,
                         double floor_db)
    {
        GainTrace tr;
        tr.id = std::move(id);
        tr.timestamps = std::move(timestamps);
        tr.levels_db.reserve(values.size());
        for (double v : values)
            tr.levels_db.push_back(level_of(v, floor_db));
        check_trace(tr, "make_trace");
        return tr;
    }

    std::vector<GainTrace> gain_trajectories(const CPModel &m, double floor_db)
    {
        const std::size_t K = m.n_scans();
        std::vector<double> ts = m.timestamps;
        if (ts.size() != K)
        {
            ts.resize(K);
            for (std::size_t k = 0; k < K; ++k)
                ts[k] = static_cast<double>(k);
        }
        std::vector<GainTrace> out;
        for (Eigen::Index l = 0; l < m.G.cols(); ++l)
        {
            // D and S columns are unit norm, so the component scale is 1.
            const double scale = m.D.col(l).norm() * m.S.col(l).norm();
            std::vector<double> g(K);
            for (std::size_t k = 0; k < K; ++k)
                g[k] = m.G(static_cast<Eigen::Index>(k), l) * scale;
            out.push_back(make_trace("component_" + std::to_string(l), ts, g, floor_db));
        }
        return out;
    }

    SegmentedTrace fit_piecewise(const GainTrace &trace, double max_rmse_db)
    {
        check_trace(trace, "fit_piecewise");
        const std::size_t N = trace.size();
        if (N < 2)
            throw std::invalid_argument("fit_piecewise: trace needs at least two samples");
        if (!(max_rmse_db >= 0.0))
            throw std::invalid_argument("fit_piecewise: max_rmse_db must be nonnegative");

        const Prefix px(trace);
        std::vector<std::size_t> bounds;
        for (std::size_t i = 0; i + 2 <= N; i += 2)
            bounds.push_back(i);
        bounds.push_back(N); // an odd tail joins the last pair

        // Merge cost of segments s and s + 1.
        auto merge_cost = [&](std::size_t s) { return px.fit(bounds[s], bounds[s + 2], trace).rmse_db; };

        std::vector<double> cost;
        for (std::size_t s = 0; s + 2 < bounds.size(); ++s)
            cost.push_back(merge_cost(s));
        while (!cost.empty())
        {
            std::size_t best = 0;
            for (std::size_t s = 1; s < cost.size(); ++s)
                if (cost[s] < cost[best])
                    best = s;
            if (!(cost[best] <= max_rmse_db))
                break;
            bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(best + 1));
            cost.erase(cost.begin() + static_cast<std::ptrdiff_t>(best));
            if (best < cost.size())
                cost[best] = merge_cost(best);
            if (best > 0)
                cost[best - 1] = merge_cost(best - 1);
        }

        SegmentedTrace out;
        for (std::size_t s = 0; s + 1 < bounds.size(); ++s)
            out.segments.push_back(px.fit(bounds[s], bounds[s + 1], trace));
        return out;
    }

    std::vector<double> piecewise_values(const GainTrace &trace, const SegmentedTrace &seg)
    {
        std::vector<double> v(trace.size(), 0.0);
        for (const auto &s : seg.segments)
        {
            if (s.end > trace.size() || s.start >= s.end)
                throw std::invalid_argument("piecewise_values: segment outside the trace");
            for (std::size_t i = s.start; i < s.end; ++i)
                v[i] = s.intercept_db + s.slope_db_per_s * (trace.timestamps[i] - trace.timestamps[s.start]);
        }
        return v;
    }

    StateSequence label_states(const GainTrace &trace, double threshold_db, double hysteresis_db)
    {
        check_trace(trace, "label_states");
        if (!(threshold_db > 0.0))
            throw std::invalid_argument("label_states: threshold_db must be positive");
        if (!(hysteresis_db >= 0.0 && hysteresis_db < threshold_db))
            throw std::invalid_argument("label_states: hysteresis_db must lie in [0, threshold_db)");

        StateSequence out;
        out.states.assign(trace.size(), State::unblocked);
        if (trace.size() == 0)
            return out;

        const double top = *std::max_element(trace.levels_db.begin(), trace.levels_db.end());
        std::vector<double> upper;
        for (double v : trace.levels_db)
            if (v >= top - fade_margin_db)
                upper.push_back(v);
        std::sort(upper.begin(), upper.end());
        const std::size_t h = upper.size() / 2;
        out.unblocked_ref_db = upper.size() % 2 == 1 ? upper[h] : 0.5 * (upper[h - 1] + upper[h]);

        const double enter = out.unblocked_ref_db - threshold_db;
        const double exit = enter + hysteresis_db;
        State s = State::unblocked;
        for (std::size_t k = 0; k < trace.size(); ++k)
        {
            const double v = trace.levels_db[k];
            if (s == State::unblocked && v < enter)
                s = State::blocked;
            else if (s == State::blocked && v > exit)
                s = State::unblocked;
            out.states[k] = s;
        }
        return out;
    }

    std::vector<BlockageEvent> detect_events(const GainTrace &trace, const StateSequence &states)
    {
        check_trace(trace, "detect_events");
        if (states.states.size() != trace.size())
            throw std::invalid_argument("detect_events: state sequence length differs from the trace");

        const auto &lv = trace.levels_db;
        const auto &ts = trace.timestamps;
        const std::size_t N = trace.size();
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        for (std::size_t k = 0; k < N;)
        {
            if (states.states[k] != State::blocked)
            {
                ++k;
                continue;
            }
            std::size_t e = k;
            while (e + 1 < N && states.states[e + 1] == State::blocked)
                ++e;
            runs.emplace_back(k, e);
            k = e + 1;
        }

        // Split point of each gap between consecutive runs: the sample of maximum level.
        std::vector<std::size_t> split(runs.size() + 1);
        split.front() = 0;
        split.back() = N;
        for (std::size_t r = 0; r + 1 < runs.size(); ++r)
        {
            std::size_t m = runs[r].second + 1;
            for (std::size_t k = m + 1; k < runs[r + 1].first; ++k)
                if (lv[k] > lv[m])
                    m = k;
            split[r + 1] = m;
        }

        const double fade_level = states.unblocked_ref_db - fade_margin_db;
        std::vector<BlockageEvent> events;
        for (std::size_t r = 0; r < runs.size(); ++r)
        {
            const auto [a, b] = runs[r];
            BlockageEvent ev;
            ev.first = a;
            ev.last = b;
            ev.t_block_start = ts[a];
            ev.t_block_end = ts[b];
            double lowest = lv[a];
            for (std::size_t k = a; k <= b; ++k)
                lowest = std::min(lowest, lv[k]);
            ev.depth_db = states.unblocked_ref_db - lowest;

            std::size_t c = a;
            const std::size_t lo = split[r];
            while (c > lo && lv[c - 1] < fade_level)
                --c;
            std::size_t d = b;
            const std::size_t hi = r + 1 < runs.size() ? split[r + 1] : N; // exclusive
            while (d + 1 < hi && lv[d + 1] < fade_level)
                ++d;

            ev.t_fade_start = ts[c];
            ev.t_rise_end = ts[d];
            ev.t_blocked = ev.t_block_end - ev.t_block_start;
            ev.t_fading = ev.t_block_start - ev.t_fade_start;
            ev.t_rising = ev.t_rise_end - ev.t_block_end;
            events.push_back(ev);
        }
        return events;
    }

    MarkovModel fit_markov(const std::vector<StateSequence> &sequences, double slot_duration)
    {
        check_sequences(sequences, "fit_markov");
        const std::size_t P = sequences.size();
        const std::size_t N = sequences.front().states.size();
        if (N < 2)
            throw std::invalid_argument("fit_markov: sequences need at least two slots");
        if (P > max_markov_paths)
            throw std::invalid_argument("fit_markov: too many paths for the joint model");
        if (!(slot_duration > 0.0))
            throw std::invalid_argument("fit_markov: slot_duration must be positive");

        MarkovModel m;
        m.slot_duration = slot_duration;
        const std::size_t S = std::size_t{1} << P;
        m.joint_counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));

        auto joint_state = [&](std::size_t k)
        {
            std::size_t s = 0;
            for (std::size_t p = 0; p < P; ++p)
                if (sequences[p].states[k] == State::blocked)
                    s |= std::size_t{1} << p;
            return static_cast<Eigen::Index>(s);
        };

        for (std::size_t p = 0; p < P; ++p)
        {
            Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
            const auto &st = sequences[p].states;
            for (std::size_t k = 0; k + 1 < N; ++k)
                c(static_cast<int>(st[k]), static_cast<int>(st[k + 1])) += 1.0;
            Eigen::Matrix2d t;
            std::array<bool, 2> unvisited{};
            for (int r = 0; r < 2; ++r)
            {
                const double total = c(r, 0) + c(r, 1);
                unvisited[static_cast<std::size_t>(r)] = total == 0.0;
                for (int q = 0; q < 2; ++q)
                    t(r, q) = total == 0.0 ? (r == q ? 1.0 : 0.0) : c(r, q) / total;
            }
            m.per_path.push_back(t);
            m.per_path_counts.push_back(c);
            m.per_path_unvisited.push_back(unvisited);
        }

        for (std::size_t k = 0; k + 1 < N; ++k)
            m.joint_counts(joint_state(k), joint_state(k + 1)) += 1.0;
        m.joint = Eigen::MatrixXd::Zero(m.joint_counts.rows(), m.joint_counts.cols());
        m.joint_unvisited.assign(S, false);
        for (Eigen::Index r = 0; r < m.joint.rows(); ++r)
        {
            const double total = m.joint_counts.row(r).sum();
            if (total == 0.0)
            {
                m.joint(r, r) = 1.0;
                m.joint_unvisited[static_cast<std::size_t>(r)] = true;
            }
            else
                m.joint.row(r) = m.joint_counts.row(r) / total;
        }
        return m;
    }

    JointOutage joint_outage(const std::vector<StateSequence> &sequences)
    {
        check_sequences(sequences, "joint_outage");
        const std::size_t P = sequences.size();
        const std::size_t N = sequences.front().states.size();
        JointOutage out;
        out.overlap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(P));
        if (N == 0)
            return out;
        std::size_t all = 0;
        for (std::size_t k = 0; k < N; ++k)
        {
            bool every = true;
            for (std::size_t p = 0; p < P; ++p)
            {
                const bool bp = sequences[p].states[k] == State::blocked;
                every = every && bp;
                if (!bp)
                    continue;
                for (std::size_t q = 0; q < P; ++q)
                    if (sequences[q].states[k] == State::blocked)
                        out.overlap(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += 1.0;
            }
            if (every)
                ++all;
        }
        out.overlap /= static_cast<double>(N);
        out.ever_all_blocked = all > 0;
        out.all_blocked_fraction = static_cast<double>(all) / static_cast<double>(N);
        return out;
    }

    AnalysisReport analyze(const std::vector<GainTrace> &traces, const AnalysisOptions &opts)
    {
        if (traces.empty())
            throw std::invalid_argument("analyze: no traces");
        for (const auto &t : traces)
            if (t.timestamps != traces.front().timestamps)
                throw std::invalid_argument("analyze: traces do not share timestamps");

        AnalysisReport rep;
        rep.options = opts;
        std::vector<StateSequence> seqs;
        for (const auto &t : traces)
        {
            TraceAnalysis ta;
            ta.trace = t;
            ta.segments = fit_piecewise(t, opts.max_rmse_db);
            if (opts.label_segments)
            {
                GainTrace fitted = t;
                fitted.levels_db = piecewise_values(t, ta.segments);
                ta.states = label_states(fitted, opts.threshold_db, opts.hysteresis_db);
            }
            else
                ta.states = label_states(t, opts.threshold_db, opts.hysteresis_db);
            ta.events = detect_events(t, ta.states);
            seqs.push_back(ta.states);
            rep.traces.push_back(std::move(ta));
        }

        double slot = opts.slot_duration;
        if (!(slot > 0.0))
        {
            const auto &ts = traces.front().timestamps;
            std::vector<double> dt;
            for (std::size_t k = 1; k < ts.size(); ++k)
                dt.push_back(ts[k] - ts[k - 1]);
            if (dt.empty())
                throw std::invalid_argument("analyze: traces need at least two samples");
            std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
            slot = dt[dt.size() / 2];
        }
        rep.options.slot_duration = slot;
        rep.markov = fit_markov(seqs, slot);
        rep.outage = joint_outage(seqs);
        return rep;
    }
}
