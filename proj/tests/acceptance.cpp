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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "blocktensor/blocktrace.hpp"
#include "blocktensor/parafac.hpp"
#include "blocktensor/scene_file.hpp"
#include "blocktensor/sounder.hpp"
#include "blocktensor/tensorops.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

namespace bt = blocktensor;
namespace fs = std::filesystem;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string scene_path(const char *name) { return std::string(BT_SCENES_DIR) + "/" + name; }

    std::string fmt(const char *f, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    std::size_t path_index(const bt::Sounder &s, bt::PathKind kind, const std::string &wall_name = {})
    {
        for (std::size_t p = 0; p < s.paths().size(); ++p)
        {
            const auto &path = s.paths()[p];
            if (path.kind != kind)
                continue;
            if (kind == bt::PathKind::los || s.scene().walls[*path.wall].name == wall_name)
                return p;
        }
        throw std::runtime_error("path not found");
    }

    // Component whose unit delay signature is strongest at the given bin.
    std::size_t component_at_bin(const bt::CPModel &m, std::size_t bin)
    {
        std::size_t best = 0;
        for (std::size_t l = 1; l < m.rank; ++l)
            if (std::abs(m.D(static_cast<Eigen::Index>(bin), static_cast<Eigen::Index>(l))) >
                std::abs(m.D(static_cast<Eigen::Index>(bin), static_cast<Eigen::Index>(best))))
                best = l;
        return best;
    }

    std::vector<bool> blocked_mask(const bt::StateSequence &s)
    {
        std::vector<bool> v(s.states.size());
        for (std::size_t k = 0; k < v.size(); ++k)
            v[k] = s.states[k] == bt::State::blocked;
        return v;
    }

    std::vector<oracle::P2> horizontal(const bt::PropagationPath &p)
    {
        std::vector<oracle::P2> v;
        for (const auto &q : p.vertices)
            v.push_back({q.x, q.y});
        return v;
    }

    Outcome ac1_event_anatomy()
    {
        const auto t0 = Clock::now();
        const auto cfg = bt::load_scene(scene_path("living_room.json"));
        const bt::Sounder s(cfg.scene, bt::make_codebook(cfg.tx_codebook), bt::make_codebook(cfg.rx_codebook),
                            cfg.scan);
        const auto t3 = bt::partial_unfold(s.measure());
        const auto m = bt::cp_als(t3, 2);
        const auto rep = bt::analyze(bt::gain_trajectories(m));
        const double elapsed = seconds_since(t0);

        const std::size_t los = component_at_bin(m, s.delay_bin(path_index(s, bt::PathKind::los)));
        const auto &events = rep.traces[los].events;
        Outcome o;
        if (events.size() != 1)
        {
            o.detail = "expected one LOS event, found " + std::to_string(events.size());
            return o;
        }
        const auto &e = events.front();
        o.pass = e.depth_db >= 20.0 && e.t_blocked >= 0.1 && e.t_blocked <= 0.4 && elapsed < 60.0;
        o.detail = "events=1 depth=" + fmt("%.2f", e.depth_db) + " dB t_blocked=" + fmt("%.3f", e.t_blocked) +
                   " s (bounds [0.1, 0.4]) runtime=" + fmt("%.1f", elapsed) + " s";
        return o;
    }

    Outcome ac2_los_then_nlos()
    {
        const auto cfg = bt::load_scene(scene_path("wall_facing.json"));
        const bt::Sounder s(cfg.scene, bt::make_codebook(cfg.tx_codebook), bt::make_codebook(cfg.rx_codebook),
                            cfg.scan);
        const auto t3 = bt::partial_unfold(s.measure());
        const auto m = bt::cp_als(t3, 2);
        const auto rep = bt::analyze(bt::gain_trajectories(m));

        const std::size_t los_path = path_index(s, bt::PathKind::los);
        const std::size_t nlos_path = path_index(s, bt::PathKind::reflected, "south");
        const std::size_t lc = component_at_bin(m, s.delay_bin(los_path));
        const std::size_t nc = component_at_bin(m, s.delay_bin(nlos_path));
        Outcome o;
        if (lc == nc)
        {
            o.detail = "LOS and NLOS map to the same component";
            return o;
        }

        const auto truth_los = oracle::runs(oracle::geometric_blocked(horizontal(s.paths()[los_path]),
                                                                      cfg.scene.blockers, t3.timestamps));
        const auto truth_nlos = oracle::runs(oracle::geometric_blocked(horizontal(s.paths()[nlos_path]),
                                                                       cfg.scene.blockers, t3.timestamps));
        const auto got_los = oracle::runs(blocked_mask(rep.traces[lc].states));
        const auto got_nlos = oracle::runs(blocked_mask(rep.traces[nc].states));

        long worst = 0;
        bool shape_ok = truth_los.size() == got_los.size() && truth_nlos.size() == got_nlos.size() &&
                        !truth_los.empty() && !truth_nlos.empty();
        auto compare = [&](const auto &a, const auto &b)
        {
            for (std::size_t r = 0; r < std::min(a.size(), b.size()); ++r)
                worst = std::max({worst, std::labs(static_cast<long>(a[r].first) - static_cast<long>(b[r].first)),
                                  std::labs(static_cast<long>(a[r].second) - static_cast<long>(b[r].second))});
        };
        compare(truth_los, got_los);
        compare(truth_nlos, got_nlos);

        const bool order = shape_ok && got_los.front().first < got_nlos.front().first;
        bool truth_overlap = false;
        for (const auto &a : truth_los)
            for (const auto &b : truth_nlos)
                truth_overlap = truth_overlap || (a.first <= b.second && b.first <= a.second);
        const double overlap = rep.outage.overlap(static_cast<Eigen::Index>(lc), static_cast<Eigen::Index>(nc));
        const bool overlap_ok = truth_overlap && overlap > 0.0;

        o.pass = shape_ok && worst <= 2 && order && overlap_ok;
        auto span = [&](const auto &r)
        {
            return r.empty() ? std::string("none")
                             : "[" + fmt("%.3f", t3.timestamps[r.front().first]) + ", " +
                                   fmt("%.3f", t3.timestamps[r.front().second]) + "]";
        };
        o.detail = "LOS " + span(got_los) + " vs oracle " + span(truth_los) + ", NLOS " + span(got_nlos) +
                   " vs oracle " + span(truth_nlos) + ", worst boundary error " + std::to_string(worst) +
                   " scans, overlap fraction " + fmt("%.4f", overlap);
        return o;
    }

    Outcome ac3_cp_recovery()
    {
        Outcome o;
        o.pass = true;
        double worst_fit = 0.0, worst_cong = 1.0, worst_time = 0.0;
        std::size_t worst_iters = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            std::mt19937_64 rng(seed);
            const Eigen::MatrixXd d = oracle::uniform(16, 2, rng), s = oracle::uniform(36, 2, rng),
                                  g = oracle::uniform(200, 2, rng);
            const bt::Tensor3 x = oracle::build(d, s, g);
            const auto t0 = Clock::now();
            const auto m = bt::cp_als(x, 2);
            const double el = seconds_since(t0);
            const auto al = bt::align_factors(m, oracle::as_model(d, s, g));
            worst_fit = std::max(worst_fit, bt::fit(m, x));
            worst_iters = std::max(worst_iters, m.iterations);
            worst_time = std::max(worst_time, el);
            for (double c : al.congruence)
                worst_cong = std::min(worst_cong, c);
        }
        o.pass = worst_fit < 1e-6 && worst_iters <= 500 && worst_cong > 0.999 && worst_time < 10.0;
        o.detail = "5 tensors 16x36x200: worst fit=" + fmt("%.2e", worst_fit) + " sweeps=" +
                   std::to_string(worst_iters) + " congruence=" + fmt("%.6f", worst_cong) + " time=" +
                   fmt("%.3f", worst_time) + " s";
        return o;
    }

    Outcome ac4_monotonicity()
    {
        std::size_t violations = 0, sweeps = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed)
        {
            std::mt19937_64 rng(1000 + seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            bt::Tensor3 x(8, 16, 32);
            for (double &v : x.data)
                v = u(rng);
            double xn = 0.0;
            for (double v : x.data)
                xn += v * v;
            xn = std::sqrt(xn);
            bt::AlsOptions opts;
            opts.init = seed % 2 ? bt::AlsOptions::Init::svd : bt::AlsOptions::Init::random;
            opts.seed = seed;
            const auto m = bt::cp_als(x, 3, opts);
            const auto &h = m.objective_history;
            sweeps += h.size();
            for (std::size_t i = 1; i < h.size(); ++i)
                if (h[i] > h[i - 1] + 1e-12 * xn)
                    ++violations;
        }
        return {violations == 0, "100 tensors 8x16x32, rank 3, " + std::to_string(sweeps) + " sweeps, " +
                                     std::to_string(violations) + " violations"};
    }

    Outcome ac5_parafac_beats_pca()
    {
        int wins = 0;
        std::string per;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
        {
            const auto tc = oracle::two_component(seed, 16, 36, 200, 20.0);
            const auto m = bt::cp_als(tc.noisy, 2);
            const auto al = bt::align_factors(m, oracle::as_model(tc.D, tc.S, tc.G));
            double cp = 0.0;
            for (std::size_t l = 0; l < 2; ++l)
                cp += std::abs(oracle::pearson(m.G.col(static_cast<Eigen::Index>(al.match[l])),
                                               tc.G.col(static_cast<Eigen::Index>(l))));
            cp /= 2.0;

            bt::PowerTensor3 p3;
            p3.values = tc.noisy;
            p3.map = {6, 6};
            const auto pca = bt::pca_baseline(p3, 2);
            double c[2][2];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    c[a][b] = std::abs(oracle::pearson(pca.scores.col(a), tc.G.col(b)));
            const double pc = 0.5 * std::max(c[0][0] + c[1][1], c[0][1] + c[1][0]);
            wins += cp > pc;
            per += (per.empty() ? "" : " ") + fmt("%.3f", cp) + "/" + fmt("%.3f", pc);
        }
        return {wins >= 8, "cp beats pca in " + std::to_string(wins) + "/10 seeds (cp/pca mean |r|: " + per + ")"};
    }

    Outcome ac6_lossless_unfolding()
    {
        std::mt19937_64 rng(6);
        std::uniform_int_distribution<std::size_t> dim(1, 6);
        std::normal_distribution<double> n(0.0, 1.0);
        std::size_t mismatches = 0;
        double worst_rel = 0.0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            bt::MeasurementTensor t4(dim(rng) * 2, dim(rng), dim(rng), dim(rng));
            for (auto &v : t4.data)
                v = {n(rng), n(rng)};
            const auto t3 = bt::partial_unfold(t4);
            const auto p4 = bt::refold(t3);
            for (std::size_t i = 0; i < t4.data.size(); ++i)
            {
                const double re = t4.data[i].real(), im = t4.data[i].imag();
                const double expect = re * re + im * im;
                if (std::memcmp(&expect, &p4.data[i], sizeof(double)) != 0)
                    ++mismatches;
            }
            const auto pm = bt::delay_power(t3);
            long double total = 0.0L, agg = 0.0L;
            for (double v : t3.values.data)
                total += v;
            for (double v : pm.data)
                agg += v;
            worst_rel = std::max(worst_rel, static_cast<double>(std::abs(agg - total) / total));
        }
        return {mismatches == 0 && worst_rel <= 1e-12,
                "1000 tensors: " + std::to_string(mismatches) + " refold mismatches, worst power drift " +
                    fmt("%.2e", worst_rel)};
    }

    Outcome ac7_markov()
    {
        using S = bt::State;
        bt::StateSequence seq;
        seq.states = {S::unblocked, S::unblocked, S::blocked, S::blocked, S::blocked, S::unblocked};
        const auto mm = bt::fit_markov({seq}, 0.003);
        const auto &t = mm.per_path[0];
        const bool hand = t(0, 0) == 0.5 && t(0, 1) == 0.5 && t(1, 0) == 1.0 / 3.0 && t(1, 1) == 2.0 / 3.0;

        std::mt19937_64 rng(7);
        std::bernoulli_distribution coin(0.3);
        std::size_t bad = 0;
        for (int trial = 0; trial < 100; ++trial)
        {
            const std::size_t P = 2 + trial % 3;
            std::vector<bt::StateSequence> seqs(P);
            for (auto &s : seqs)
                for (int k = 0; k < 300; ++k)
                    s.states.push_back(coin(rng) ? S::blocked : S::unblocked);
            const auto m = bt::fit_markov(seqs, 0.003);
            for (std::size_t p = 0; p < P; ++p)
            {
                Eigen::Matrix2d marg = Eigen::Matrix2d::Zero();
                for (Eigen::Index a = 0; a < m.joint_counts.rows(); ++a)
                    for (Eigen::Index b = 0; b < m.joint_counts.cols(); ++b)
                        marg((a >> p) & 1, (b >> p) & 1) += m.joint_counts(a, b);
                if (marg != m.per_path_counts[p])
                    ++bad;
            }
        }
        return {hand && bad == 0, std::string("hand example ") + (hand ? "exact" : "MISMATCH") +
                                      ", marginalization mismatches " + std::to_string(bad) + "/100 sets"};
    }

    Outcome ac8_joint_outage()
    {
        const auto cfg = bt::load_scene(scene_path("three_blockers.json"));
        const bt::Sounder s(cfg.scene, bt::make_codebook(cfg.tx_codebook), bt::make_codebook(cfg.rx_codebook),
                            cfg.scan);
        const auto t3 = bt::partial_unfold(s.measure());
        const std::vector<std::size_t> ids = {path_index(s, bt::PathKind::los),
                                              path_index(s, bt::PathKind::reflected, "north"),
                                              path_index(s, bt::PathKind::reflected, "south")};
        std::vector<bt::StateSequence> seqs;
        std::vector<std::vector<bool>> truth;
        for (std::size_t p : ids)
        {
            const auto tr = bt::make_trace(s.paths()[p].label(), t3.timestamps, bt::path_power_trace(s, t3, p));
            seqs.push_back(bt::label_states(tr));
            truth.push_back(oracle::geometric_blocked(horizontal(s.paths()[p]), cfg.scene.blockers, t3.timestamps));
        }
        const auto out = bt::joint_outage(seqs);
        bool truth_all = false;
        for (std::size_t k = 0; k < t3.timestamps.size(); ++k)
            truth_all = truth_all || (truth[0][k] && truth[1][k] && truth[2][k]);
        std::string fr;
        for (std::size_t p = 0; p < 3; ++p)
            fr += (p ? "/" : "") + fmt("%.3f", out.overlap(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)));
        return {!out.ever_all_blocked && !truth_all,
                std::string("ever_all_blocked=") + (out.ever_all_blocked ? "true" : "false") +
                    " oracle=" + (truth_all ? "true" : "false") + ", blocked fractions LOS/north/south " + fr};
    }

    Outcome ac9_scan_protocol()
    {
        bt::ScanConfig c;
        c.duration_s = 5.0;
        c.scan_period_s = 0.003;
        const std::size_t K = c.scan_count();
        const auto ts = bt::scan_timestamps(K, c.scan_period_s);
        bool exact = K == 1666;
        for (std::size_t k = 0; k < ts.size(); ++k)
            exact = exact && ts[k] == static_cast<double>(k) * 0.003;

        auto cfg = bt::load_scene(scene_path("living_room.json"));
        cfg.scene.blockers.clear();
        cfg.scan.noise = false;
        const bt::Sounder st(cfg.scene, bt::make_codebook(cfg.tx_codebook), bt::make_codebook(cfg.rx_codebook),
                             cfg.scan);
        const auto t4 = st.measure();
        double peak = 0.0, dev = 0.0;
        const std::size_t slab = t4.n_delay * t4.n_rx * t4.n_tx;
        for (std::size_t i = 0; i < t4.data.size(); ++i)
        {
            peak = std::max(peak, std::abs(t4.data[i]));
            dev = std::max(dev, std::abs(t4.data[i] - t4.data[i % slab]));
        }
        const bool constant = dev <= 1e-12 * peak;

        // Every pair of one scan sees the blockers at the scan's single instant.
        auto moving = bt::load_scene(scene_path("living_room.json"));
        moving.scan.noise = false;
        const bt::Sounder sm(moving.scene, bt::make_codebook(moving.tx_codebook), bt::make_codebook(moving.rx_codebook),
                             moving.scan);
        const double t = 2.4;
        const auto cube = sm.scan(t, 800);
        bool instant = true;
        for (std::size_t x = 0; x < cube.n_tx; ++x)
            for (std::size_t r = 0; r < cube.n_rx; ++r)
            {
                const auto cir = sm.cir(x, r, t);
                for (std::size_t i = 0; i < cube.n_delay; ++i)
                    instant = instant && cube(i, r, x) == cir.taps[i];
            }
        return {exact && constant && instant,
                std::to_string(K) + " scans, timestamps " + (exact ? "exact" : "INEXACT") + ", static deviation " +
                    fmt("%.2e", dev / peak) + " of peak, single-instant scan " + (instant ? "ok" : "MISMATCH")};
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    Outcome ac10_determinism()
    {
        const fs::path root = fs::temp_directory_path() / ("bt_acceptance_" + std::to_string(::getpid()));
        const std::string cli = BT_CLI_PATH;
        const std::string scene = scene_path("wall_facing.json");
        const std::vector<std::string> files = {"m.bmt", "p.bmt", "model.json", "report.json"};
        Outcome o;
        for (const char *run : {"a", "b"})
        {
            const fs::path dir = root / run;
            fs::create_directories(dir);
            const std::string d = dir.string() + "/";
            const std::string cmd = "\"" + cli + "\" simulate --scene \"" + scene + "\" --seed 42 --out " + d +
                                    "m.bmt && \"" + cli + "\" preprocess --in " + d + "m.bmt --out " + d +
                                    "p.bmt && \"" + cli + "\" decompose --in " + d + "p.bmt --rank 2 --out " + d +
                                    "model.json && \"" + cli + "\" analyze --model " + d + "model.json --out " + d +
                                    "report.json";
            if (std::system(cmd.c_str()) != 0)
            {
                o.detail = "CLI pipeline failed";
                fs::remove_all(root);
                return o;
            }
        }
        std::size_t same = 0;
        std::size_t bytes = 0;
        for (const auto &f : files)
        {
            const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
            same += !a.empty() && a == b;
            bytes += a.size();
        }
        fs::remove_all(root);
        o.pass = same == files.size();
        o.detail = std::to_string(same) + "/" + std::to_string(files.size()) + " artifacts byte-identical (" +
                   std::to_string(bytes) + " bytes per run)";
        return o;
    }
}

int main()
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"AC1 blockage event anatomy", ac1_event_anatomy},
        {"AC2 LOS then NLOS trajectories", ac2_los_then_nlos},
        {"AC3 CP recovery", ac3_cp_recovery},
        {"AC4 ALS monotonicity", ac4_monotonicity},
        {"AC5 PARAFAC beats PCA", ac5_parafac_beats_pca},
        {"AC6 lossless unfolding", ac6_lossless_unfolding},
        {"AC7 Markov estimation", ac7_markov},
        {"AC8 joint outage", ac8_joint_outage},
        {"AC9 scan protocol", ac9_scan_protocol},
        {"AC10 CLI determinism", ac10_determinism},
    };
    int failed = 0;
    for (const auto &[name, fn] : criteria)
    {
        Outcome o;
        try
        {
            o = fn();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%-32s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
