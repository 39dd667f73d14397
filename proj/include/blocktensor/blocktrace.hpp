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

#ifndef BLOCKTENSOR_BLOCKTRACE_HPP
#define BLOCKTENSOR_BLOCKTRACE_HPP

#include "blocktensor/parafac.hpp"

#include <Eigen/Dense>

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace blocktensor
{
    inline constexpr double default_floor_db = -120.0;

    struct GainTrace
    {
        std::string id;
        std::vector<double> timestamps; // seconds, strictly increasing
        std::vector<double> levels_db;

        std::size_t size() const { return levels_db.size(); }
    };

    // levels_db[k] = max(10 log10(g[k]^2), floor_db). Scans fall back to unit
    // spacing when the model carries no timestamps.
    std::vector<GainTrace> gain_trajectories(const CPModel &m, double floor_db = default_floor_db);

    // Same level convention for an arbitrary nonnegative series.
    GainTrace make_trace(std::string id, std::vector<double> timestamps, const std::vector<double> &values,
                         double floor_db = default_floor_db);

    // Half-open [start, end); level(t) ~ intercept_db + slope_db_per_s * (t - t[start]).
    struct Segment
    {
        std::size_t start = 0, end = 0;
        double slope_db_per_s = 0.0;
        double intercept_db = 0.0;
        double rmse_db = 0.0;
    };

    struct SegmentedTrace
    {
        std::vector<Segment> segments;
    };

    // Bottom-up merging from two-sample segments. The cheapest adjacent merge
    // (leftmost on ties) is applied while its RMSE stays within max_rmse_db.
    SegmentedTrace fit_piecewise(const GainTrace &trace, double max_rmse_db = 1.5);

    // The fitted line evaluated at every sample.
    std::vector<double> piecewise_values(const GainTrace &trace, const SegmentedTrace &seg);

    enum class State : unsigned char
    {
        unblocked = 0,
        blocked = 1
    };

    struct StateSequence
    {
        std::vector<State> states;
        double unblocked_ref_db = 0.0;
    };

    // ref = median of the levels within 3 dB of the maximum. Blocked is entered
    // below ref - threshold and left above ref - threshold + hysteresis.
    StateSequence label_states(const GainTrace &trace, double threshold_db = 10.0, double hysteresis_db = 0.0);

    struct BlockageEvent
    {
        std::size_t first = 0, last = 0; // inclusive Blocked run
        double t_fade_start = 0.0, t_block_start = 0.0, t_block_end = 0.0, t_rise_end = 0.0;
        double depth_db = 0.0;
        double t_blocked = 0.0, t_fading = 0.0, t_rising = 0.0;
    };

    // One event per maximal Blocked run. The fading (rising) window covers the
    // contiguous samples below ref - 3 dB before (after) the run, cut where the
    // gap to a neighbouring event peaks.
    std::vector<BlockageEvent> detect_events(const GainTrace &trace, const StateSequence &states);

    struct MarkovModel
    {
        double slot_duration = 0.0;
        std::vector<Eigen::Matrix2d> per_path;        // rows/cols {unblocked, blocked}
        std::vector<Eigen::Matrix2d> per_path_counts;
        std::vector<std::array<bool, 2>> per_path_unvisited;
        // Joint state index: bit p set when path p is blocked.
        Eigen::MatrixXd joint;
        Eigen::MatrixXd joint_counts;
        std::vector<bool> joint_unvisited;
    };

    inline constexpr std::size_t max_markov_paths = 12;

    MarkovModel fit_markov(const std::vector<StateSequence> &sequences, double slot_duration);

    struct JointOutage
    {
        bool ever_all_blocked = false;
        double all_blocked_fraction = 0.0;
        Eigen::MatrixXd overlap; // [p, q] fraction of slots with both blocked
    };

    JointOutage joint_outage(const std::vector<StateSequence> &sequences);

    struct AnalysisOptions
    {
        double threshold_db = 10.0;
        double hysteresis_db = 0.0;
        double max_rmse_db = 1.5;
        bool label_segments = false; // label the piecewise fit instead of the raw levels
        double slot_duration = 0.0;  // 0: median timestamp spacing
    };

    struct TraceAnalysis
    {
        GainTrace trace;
        SegmentedTrace segments;
        StateSequence states;
        std::vector<BlockageEvent> events;
    };

    struct AnalysisReport
    {
        AnalysisOptions options;
        std::vector<TraceAnalysis> traces;
        MarkovModel markov;
        JointOutage outage;
    };

    // Segmentation, labeling and events per trace, then the Markov and outage
    // statistics across traces. Traces must share their timestamps.
    AnalysisReport analyze(const std::vector<GainTrace> &traces, const AnalysisOptions &opts = {});
}

#endif
