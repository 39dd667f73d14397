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
#include "blocktensor/export.hpp"
#include "blocktensor/parafac.hpp"
#include "blocktensor/scene_file.hpp"
#include "blocktensor/sounder.hpp"
#include "blocktensor/tensor_file.hpp"
#include "blocktensor/tensorops.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

namespace bt = blocktensor;

namespace
{
    bt::PowerTensor3 load_power(const std::string &path)
    {
        const auto info = bt::read_tensor_info(path);
        if (info.modes == 4)
            return bt::partial_unfold(bt::read_measurement(path));
        return bt::read_power(path);
    }

    struct SimulateArgs
    {
        std::string scene, out;
        std::optional<std::uint64_t> seed;
    };

    void run_simulate(const SimulateArgs &a)
    {
        auto cfg = bt::load_scene(a.scene);
        if (a.seed)
            cfg.scan.seed = *a.seed;
        const bt::Sounder sounder(cfg.scene, bt::make_codebook(cfg.tx_codebook), bt::make_codebook(cfg.rx_codebook),
                                  cfg.scan);
        const auto t4 = sounder.measure();
        bt::write_tensor(a.out, t4);
        if (t4.dropped_paths > 0)
            std::fprintf(stderr, "blocktensor: warning: %zu path arrivals fell outside the delay window\n",
                         t4.dropped_paths);
    }

    struct DecomposeArgs
    {
        std::string in, out;
        std::size_t rank = 2;
        std::size_t max_iters = 500;
        double tol = 1e-8;
        std::string init = "svd";
        bool nonneg = false;
        std::uint64_t seed = 0;
    };

    void run_decompose(const DecomposeArgs &a)
    {
        bt::AlsOptions opts;
        opts.max_iters = a.max_iters;
        opts.tol = a.tol;
        opts.init = a.init == "random" ? bt::AlsOptions::Init::random : bt::AlsOptions::Init::svd;
        opts.nonneg = a.nonneg;
        opts.seed = a.seed;
        const auto m = bt::cp_als(load_power(a.in), a.rank, opts);
        bt::write_json(a.out, bt::to_json(m));
        if (!m.converged)
            std::fprintf(stderr, "blocktensor: warning: ALS stopped after %zu sweeps without meeting the tolerance\n",
                         m.iterations);
    }

    struct AnalyzeArgs
    {
        std::string model, out, csv;
        bt::AnalysisOptions opts;
        std::string label_mode = "raw";
        double floor_db = bt::default_floor_db;
    };

    void run_analyze(const AnalyzeArgs &a)
    {
        const auto m = bt::cp_model_from_json(bt::read_json(a.model));
        auto opts = a.opts;
        opts.label_segments = a.label_mode == "segments";
        const auto traces = bt::gain_trajectories(m, a.floor_db);
        const auto rep = bt::analyze(traces, opts);
        bt::write_json(a.out, bt::to_json(rep));
        if (!a.csv.empty())
        {
            bt::write_text(a.csv + "_traces.csv", bt::traces_csv(traces));
            bt::write_text(a.csv + "_events.csv", bt::events_csv(rep));
            bt::write_text(a.csv + "_states.csv", bt::states_csv(rep));
            std::vector<std::string> labels;
            for (std::size_t s = 0; s < static_cast<std::size_t>(rep.markov.joint.rows()); ++s)
            {
                std::string l;
                for (std::size_t p = 0; p < traces.size(); ++p)
                    l += (s >> p) & 1u ? 'B' : 'U';
                labels.push_back(l);
            }
            bt::write_text(a.csv + "_markov.csv", bt::matrix_csv(rep.markov.joint, labels, labels));
        }
    }

    struct PlotArgs
    {
        std::string csv, in, kind = "traces", out, title;
    };

    void run_plot(const PlotArgs &a)
    {
        if (a.kind == "traces")
        {
            if (a.csv.empty())
                throw std::invalid_argument("plot --kind traces needs --csv");
            const auto traces = bt::parse_traces_csv(bt::read_text(a.csv));
            bt::write_text(a.out, bt::traces_svg(traces, {a.title.empty() ? "Gain trajectories" : a.title,
                                                          "time (s)", "level (dB)"}));
            return;
        }
        if (a.in.empty())
            throw std::invalid_argument("plot --kind " + a.kind + " needs --in");
        const auto t3 = load_power(a.in);
        const auto pm = bt::delay_power(t3);
        if (a.kind == "heatmap")
        {
            Eigen::MatrixXd v(static_cast<Eigen::Index>(pm.n_pairs), static_cast<Eigen::Index>(pm.n_scans));
            for (std::size_t k = 0; k < pm.n_scans; ++k)
                for (std::size_t j = 0; j < pm.n_pairs; ++j)
                    v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = pm(j, k);
            bt::write_text(a.out, bt::heatmap_svg(bt::to_db(v), pm.timestamps,
                                                  {a.title.empty() ? "Received power per beam pair" : a.title,
                                                   "time (s)", "beam pair index"}));
        }
        else
            bt::write_text(a.out, bt::heatmap_svg(bt::to_db(bt::best_rx_per_tx(pm)), pm.timestamps,
                                                  {a.title.empty() ? "Received power per AoD index" : a.title,
                                                   "time (s)", "TX beam index"}));
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Simulate and analyze dynamic human-blockage channel tensors"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Run a scene and write the 4-way complex tensor");
    simulate->add_option("--scene", sim.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", sim.out, "Output tensor file (BMT1)")->required();
    simulate->add_option("--seed", sim.seed, "Override the scene's noise seed");

    std::string pre_in, pre_out;
    auto *preprocess = app.add_subcommand("preprocess", "Merge beam modes and take |h|^2; writes a 3-way power tensor");
    preprocess->add_option("--in", pre_in, "4-way tensor file")->required()->check(CLI::ExistingFile);
    preprocess->add_option("--out", pre_out, "3-way power tensor file")->required();

    DecomposeArgs dec;
    auto *decompose = app.add_subcommand("decompose", "Fit a rank-L CP model by alternating least squares");
    decompose->add_option("--in", dec.in, "3-way power tensor (a 4-way file is preprocessed first)")
        ->required()
        ->check(CLI::ExistingFile);
    decompose->add_option("--rank", dec.rank, "Number of components")->check(CLI::PositiveNumber)->capture_default_str();
    decompose->add_option("--max-iters", dec.max_iters, "Maximum ALS sweeps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    decompose->add_option("--tol", dec.tol, "Stop when the fit changes by less than this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    decompose->add_option("--init", dec.init, "Initialization")
        ->check(CLI::IsMember({"svd", "random"}))
        ->capture_default_str();
    decompose->add_flag("--nonneg", dec.nonneg, "Clamp factors to nonnegative values after every sweep");
    decompose->add_option("--seed", dec.seed, "Seed for random initialization")->capture_default_str();
    decompose->add_option("--out", dec.out, "Model JSON")->required();

    std::string pca_in, pca_out;
    std::size_t pca_rank = 2;
    auto *pca = app.add_subcommand("baseline-pca", "Truncated SVD of the fully unfolded power matrix");
    pca->add_option("--in", pca_in, "3-way power tensor")->required()->check(CLI::ExistingFile);
    pca->add_option("--rank", pca_rank, "Number of components")->check(CLI::PositiveNumber)->capture_default_str();
    pca->add_option("--out", pca_out, "PCA model JSON")->required();

    AnalyzeArgs ana;
    auto *analyze = app.add_subcommand("analyze", "Blockage events, states and Markov models from a CP model");
    analyze->add_option("--model", ana.model, "Model JSON from decompose")->required()->check(CLI::ExistingFile);
    analyze->add_option("--threshold-db", ana.opts.threshold_db, "Blocked when this far below the unblocked level")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze->add_option("--hysteresis-db", ana.opts.hysteresis_db, "Extra rise needed to leave Blocked")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    analyze->add_option("--max-rmse-db", ana.opts.max_rmse_db, "Piecewise-linear fit tolerance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    analyze->add_option("--label-mode", ana.label_mode, "Label raw levels or the piecewise fit")
        ->check(CLI::IsMember({"raw", "segments"}))
        ->capture_default_str();
    analyze->add_option("--floor-db", ana.floor_db, "Lower clamp for trace levels")->capture_default_str();
    analyze->add_option("--slot", ana.opts.slot_duration, "Markov slot duration in seconds (0: scan period)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    analyze->add_option("--out", ana.out, "Report JSON")->required();
    analyze->add_option("--csv", ana.csv, "Path prefix for traces/events/states/markov CSV files");

    PlotArgs plt;
    auto *plot = app.add_subcommand("plot", "Render an SVG");
    plot->add_option("--csv", plt.csv, "Traces CSV (kind traces)");
    plot->add_option("--in", plt.in, "Tensor file (kinds heatmap, aod)");
    plot->add_option("--kind", plt.kind, "traces, heatmap or aod")
        ->check(CLI::IsMember({"traces", "heatmap", "aod"}))
        ->capture_default_str();
    plot->add_option("--title", plt.title, "Plot title");
    plot->add_option("--out", plt.out, "Output SVG")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::fprintf(stderr, "blocktensor: error: %s\n", e.what());
        return 2;
    }

    try
    {
        if (*simulate)
            run_simulate(sim);
        else if (*preprocess)
            bt::write_tensor(pre_out, bt::partial_unfold(bt::read_measurement(pre_in)));
        else if (*decompose)
            run_decompose(dec);
        else if (*pca)
            bt::write_json(pca_out, bt::to_json(bt::pca_baseline(load_power(pca_in), pca_rank)));
        else if (*analyze)
            run_analyze(ana);
        else if (*plot)
            run_plot(plt);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "blocktensor: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
