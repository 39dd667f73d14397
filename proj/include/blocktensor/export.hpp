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

#ifndef BLOCKTENSOR_EXPORT_HPP
#define BLOCKTENSOR_EXPORT_HPP

#include "blocktensor/blocktrace.hpp"
#include "blocktensor/parafac.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace blocktensor
{
    class ExportError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Matrices are stored as {"rows", "cols", "data"} with row-major data.
    nlohmann::json to_json(const Eigen::MatrixXd &m);
    Eigen::MatrixXd matrix_from_json(const nlohmann::json &j, const std::string &where);

    nlohmann::json to_json(const CPModel &m);
    CPModel cp_model_from_json(const nlohmann::json &j);
    nlohmann::json to_json(const PCAModel &m);
    nlohmann::json to_json(const AnalysisReport &r);

    // Atomic text write (temporary sibling + rename).
    void write_text(const std::string &path, const std::string &text);
    std::string read_text(const std::string &path);

    void write_json(const std::string &path, const nlohmann::json &j);
    nlohmann::json read_json(const std::string &path);

    // time_s column followed by one dB column per trace, 6 decimals.
    std::string traces_csv(const std::vector<GainTrace> &traces);
    std::vector<GainTrace> parse_traces_csv(const std::string &text);

    std::string events_csv(const AnalysisReport &r);
    std::string states_csv(const AnalysisReport &r);
    std::string matrix_csv(const Eigen::MatrixXd &m, const std::vector<std::string> &row_labels,
                           const std::vector<std::string> &col_labels);

    struct PlotLabels
    {
        std::string title;
        std::string x_label = "time (s)";
        std::string y_label;
    };

    std::string traces_svg(const std::vector<GainTrace> &traces, const PlotLabels &labels);

    // values [rows x scans] in dB; one cell per entry, horizontal runs of
    // equal color are merged into a single rect.
    std::string heatmap_svg(const Eigen::MatrixXd &values_db, const std::vector<double> &timestamps,
                            const PlotLabels &labels);

    // 10 log10 of every entry, floored.
    Eigen::MatrixXd to_db(const Eigen::MatrixXd &linear, double floor_db = default_floor_db);
}

#endif
