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
#include "blocktensor/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace blocktensor
{
    std::size_t ScanConfig::scan_count() const
    {
        return static_cast<std::size_t>(std::floor(duration_s / scan_period_s * (1.0 + 1e-12)));
    }

    void ScanConfig::validate() const
    {
        if (n_delay_taps < 1)
            throw std::invalid_argument("scan config: n_delay_taps must be >= 1");
        if (!(tap_spacing_ns > 0.0))
            throw std::invalid_argument("scan config: tap_spacing_ns must be > 0");
        if (!(scan_period_s > 0.0))
            throw std::invalid_argument("scan config: scan_period_s must be > 0");
        if (!(duration_s >= scan_period_s))
            throw std::invalid_argument("scan config: duration_s must be >= scan_period_s");
        if (!(carrier_ghz > 0.0))
            throw std::invalid_argument("scan config: carrier_ghz must be > 0");
        if (!std::isfinite(snr_db))
            throw std::invalid_argument("scan config: snr_db must be finite");
    }

    std::vector<double> scan_timestamps(std::size_t n_scans, double scan_period_s)
    {
        std::vector<double> t(n_scans);
        for (std::size_t k = 0; k < n_scans; ++k)
            t[k] = static_cast<double>(k) * scan_period_s;
        return t;
    }

    Sounder::Sounder(Scene scene, Codebook tx_codebook, Codebook rx_codebook, ScanConfig config)
        : scene_(std::move(scene)), tx_cb_(std::move(tx_codebook)), rx_cb_(std::move(rx_codebook)),
          config_(config)
    {
        validate(scene_);
        config_.validate();
        if (tx_cb_.size() == 0 || rx_cb_.size() == 0)
            throw std::invalid_argument("sounder: empty codebook");

        paths_ = trace_paths(scene_);
        const double lambda = config_.wavelength_m();
        const std::size_t n_tx = tx_cb_.size(), n_rx = rx_cb_.size();

        bins_.resize(paths_.size());
        base_.resize(paths_.size() * n_tx * n_rx);
        for (std::size_t p = 0; p < paths_.size(); ++p)
        {
            const PropagationPath &path = paths_[p];
            const double delay_ns = path.length_m / speed_of_light * 1e9;
            const auto bin = static_cast<std::size_t>(std::llround(delay_ns / config_.tap_spacing_ns));
            bins_[p] = std::min(bin, config_.n_delay_taps);

            const double friis = lambda / (4.0 * std::numbers::pi * path.length_m);
            const double refl = std::pow(10.0, -path.reflection_loss_db / 20.0);
            // exp(-j 2 pi f tau) with f tau = length / lambda; reduce the cycle count first.
            const double cycles = path.length_m / lambda;
            const double phase = -2.0 * std::numbers::pi * (cycles - std::floor(cycles));
            const std::complex<double> rot = std::polar(1.0, phase);
            for (std::size_t x = 0; x < n_tx; ++x)
                for (std::size_t r = 0; r < n_rx; ++r)
                    base_[(p * n_tx + x) * n_rx + r] =
                        friis * gain(tx_cb_, x, path.aod_az) * gain(rx_cb_, r, path.aoa_az) * refl * rot;
        }

        if (config_.noise)
        {
            // Reference: the unblocked LOS tap at its best beam pair.
            std::size_t ref = 0;
            for (std::size_t p = 0; p < paths_.size(); ++p)
                if (paths_[p].kind == PathKind::los)
                {
                    ref = p;
                    break;
                }
            double peak = 0.0;
            for (std::size_t x = 0; x < n_tx; ++x)
                for (std::size_t r = 0; r < n_rx; ++r)
                    peak = std::max(peak, std::norm(unblocked_amplitude(ref, x, r)));
            noise_var_ = peak / std::pow(10.0, config_.snr_db / 10.0);
        }
    }

    std::complex<double> Sounder::unblocked_amplitude(std::size_t path, std::size_t tx_beam, std::size_t rx_beam) const
    {
        return base_[(path * tx_cb_.size() + tx_beam) * rx_cb_.size() + rx_beam];
    }

    std::vector<double> Sounder::path_losses_db(double t) const
    {
        std::vector<double> loss(paths_.size());
        const double lambda = config_.wavelength_m();
        for (std::size_t p = 0; p < paths_.size(); ++p)
            loss[p] = path_blockage_loss(paths_[p], scene_.blockers, t, lambda);
        return loss;
    }

    Cir Sounder::cir(std::size_t tx_beam, std::size_t rx_beam, double t) const
    {
        if (tx_beam >= tx_cb_.size() || rx_beam >= rx_cb_.size())
            throw std::out_of_range("sounder: beam index outside codebook");
        Cir out;
        out.taps.assign(config_.n_delay_taps, {0.0, 0.0});
        const auto loss = path_losses_db(t);
        for (std::size_t p = 0; p < paths_.size(); ++p)
        {
            if (bins_[p] >= config_.n_delay_taps)
            {
                ++out.dropped_paths;
                continue;
            }
            out.taps[bins_[p]] += unblocked_amplitude(p, tx_beam, rx_beam) * std::pow(10.0, -loss[p] / 20.0);
        }
        return out;
    }

    ScanCube Sounder::scan(double t, std::uint64_t k) const
    {
        const std::size_t n_tx = tx_cb_.size(), n_rx = rx_cb_.size(), n_delay = config_.n_delay_taps;
        ScanCube cube;
        cube.n_delay = n_delay;
        cube.n_rx = n_rx;
        cube.n_tx = n_tx;
        cube.data.assign(n_delay * n_rx * n_tx, {0.0, 0.0});

        // Every beam pair sees the same blockage state.
        const auto loss = path_losses_db(t);
        for (std::size_t p = 0; p < paths_.size(); ++p)
        {
            if (bins_[p] >= n_delay)
            {
                ++cube.dropped_paths;
                continue;
            }
            const double atten = std::pow(10.0, -loss[p] / 20.0);
            for (std::size_t x = 0; x < n_tx; ++x)
                for (std::size_t r = 0; r < n_rx; ++r)
                    cube.data[cube.index(bins_[p], r, x)] += unblocked_amplitude(p, x, r) * atten;
        }
        if (config_.noise)
            add_noise(cube, k);
        return cube;
    }

    void Sounder::add_noise(ScanCube &cube, std::uint64_t k) const
    {
        const std::uint64_t seed = config_.seed;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * noise_var_));
        for (auto &v : cube.data)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            v += std::complex<double>(re, im);
        }
    }

    MeasurementTensor Sounder::measure() const
    {
        const std::size_t n_scans = config_.scan_count();
        MeasurementTensor out(config_.n_delay_taps, rx_cb_.size(), tx_cb_.size(), n_scans);
        out.timestamps = scan_timestamps(n_scans, config_.scan_period_s);
        out.config = config_;
        const std::size_t slab = out.n_delay * out.n_rx * out.n_tx;
        for (std::size_t k = 0; k < n_scans; ++k)
        {
            const ScanCube cube = scan(out.timestamps[k], k);
            std::copy(cube.data.begin(), cube.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(k * slab));
            out.dropped_paths = cube.dropped_paths; // identical for every scan
        }
        return out;
    }

    Cir synthesize_cir(const Scene &scene, const std::vector<PropagationPath> &paths, const Codebook &tx_codebook,
                       const Codebook &rx_codebook, std::size_t tx_beam, std::size_t rx_beam, double t,
                       const ScanConfig &config)
    {
        Sounder sounder(scene, tx_codebook, rx_codebook, config);
        if (paths.size() != sounder.paths().size())
            throw std::invalid_argument("synthesize_cir: paths do not match the scene");
        if (!config.noise)
            return sounder.cir(tx_beam, rx_beam, t);
        const auto k = static_cast<std::uint64_t>(std::llround(t / config.scan_period_s));
        const ScanCube cube = sounder.scan(t, k);
        Cir out;
        out.dropped_paths = cube.dropped_paths;
        out.taps.resize(cube.n_delay);
        for (std::size_t i = 0; i < cube.n_delay; ++i)
            out.taps[i] = cube(i, rx_beam, tx_beam);
        return out;
    }

    ScanCube run_scan(const Scene &scene, double t, const ScanConfig &config, const Codebook &tx_codebook,
                      const Codebook &rx_codebook)
    {
        Sounder sounder(scene, tx_codebook, rx_codebook, config);
        const auto k = static_cast<std::uint64_t>(std::llround(t / config.scan_period_s));
        return sounder.scan(t, k);
    }

    MeasurementTensor run_measurement(const Scene &scene, const ScanConfig &config, const Codebook &tx_codebook,
                                      const Codebook &rx_codebook)
    {
        return Sounder(scene, tx_codebook, rx_codebook, config).measure();
    }

    std::vector<double> path_power_trace(const Sounder &sounder, const PowerTensor3 &power, std::size_t path)
    {
        const auto &paths = sounder.paths();
        if (path >= paths.size())
            throw std::out_of_range("path_power_trace: path index out of range");
        const std::size_t bin = sounder.delay_bin(path);
        if (bin >= power.n_delay())
            throw std::invalid_argument("path_power_trace: path arrives outside the tap window");
        const BeamPairMap &map = power.map;
        if (map.n_tx != sounder.tx_codebook().size() || map.n_rx != sounder.rx_codebook().size())
            throw std::invalid_argument("path_power_trace: tensor beam modes do not match the sounder");

        std::vector<double> own(map.pairs()), others(map.pairs(), 0.0);
        double best = 0.0;
        for (std::size_t j = 0; j < map.pairs(); ++j)
        {
            own[j] = std::norm(sounder.unblocked_amplitude(path, map.tx_of(j), map.rx_of(j)));
            best = std::max(best, own[j]);
            for (std::size_t q = 0; q < paths.size(); ++q)
                if (q != path && sounder.delay_bin(q) == bin)
                    others[j] += std::norm(sounder.unblocked_amplitude(q, map.tx_of(j), map.rx_of(j)));
        }
        std::vector<std::size_t> pairs;
        for (std::size_t j = 0; j < map.pairs(); ++j)
            if (own[j] >= best * std::pow(10.0, -0.6) && own[j] >= 10.0 * others[j])
                pairs.push_back(j);

        std::vector<double> trace(power.n_scans(), 0.0);
        for (std::size_t k = 0; k < power.n_scans(); ++k)
            for (std::size_t j : pairs)
                trace[k] += power(bin, j, k);
        return trace;
    }
}
