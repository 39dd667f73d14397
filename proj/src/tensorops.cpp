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

#include "blocktensor/tensorops.hpp"
#include "blocktensor/simd/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace blocktensor
{
    PowerTensor3 partial_unfold(const MeasurementTensor &t4)
    {
        const std::size_t expected = t4.n_delay * t4.n_rx * t4.n_tx * t4.n_scans;
        if (t4.data.size() != expected)
            throw std::invalid_argument("partial_unfold: data size does not match the tensor dimensions");

        PowerTensor3 out;
        out.map = {t4.n_tx, t4.n_rx};
        out.values = Tensor3(t4.n_delay, t4.n_tx * t4.n_rx, t4.n_scans);
        out.timestamps = t4.timestamps;
        out.config = t4.config;
        // Both layouts share the linear order ((k * n_tx + x) * n_rx + r) * n_delay + i,
        // so the unfolding is an elementwise |.|^2.
        static_assert(sizeof(std::complex<double>) == 2 * sizeof(double));
        simd::active().abs2(reinterpret_cast<const double *>(t4.data.data()), out.values.data.data(), expected);
        return out;
    }

    PowerTensor4 refold(const PowerTensor3 &t3)
    {
        if (t3.map.pairs() != t3.n_pairs())
            throw std::invalid_argument("refold: beam-pair map does not match the pair mode size");
        PowerTensor4 out;
        out.n_delay = t3.n_delay();
        out.n_rx = t3.map.n_rx;
        out.n_tx = t3.map.n_tx;
        out.n_scans = t3.n_scans();
        out.data.resize(t3.values.size());
        for (std::size_t k = 0; k < out.n_scans; ++k)
            for (std::size_t x = 0; x < out.n_tx; ++x)
                for (std::size_t r = 0; r < out.n_rx; ++r)
                {
                    const double *src = t3.values.fiber(t3.map.pair(x, r), k);
                    std::copy(src, src + out.n_delay, out.data.begin() + static_cast<std::ptrdiff_t>(out.index(0, r, x, k)));
                }
        return out;
    }

    PowerMatrix delay_power(const PowerTensor3 &t3)
    {
        const auto &kern = simd::active();
        PowerMatrix pm;
        pm.n_pairs = t3.n_pairs();
        pm.n_scans = t3.n_scans();
        pm.map = t3.map;
        pm.timestamps = t3.timestamps;
        pm.data.resize(pm.n_pairs * pm.n_scans);
        for (std::size_t k = 0; k < pm.n_scans; ++k)
            for (std::size_t j = 0; j < pm.n_pairs; ++j)
                pm(j, k) = kern.sum(t3.values.fiber(j, k), t3.n_delay());
        return pm;
    }

    Eigen::MatrixXd best_rx_per_tx(const PowerMatrix &pm)
    {
        if (pm.map.pairs() != pm.n_pairs)
            throw std::invalid_argument("best_rx_per_tx: beam-pair map does not match the matrix");
        Eigen::MatrixXd out(static_cast<Eigen::Index>(pm.map.n_tx), static_cast<Eigen::Index>(pm.n_scans));
        for (std::size_t k = 0; k < pm.n_scans; ++k)
            for (std::size_t x = 0; x < pm.map.n_tx; ++x)
            {
                double best = pm(pm.map.pair(x, 0), k);
                for (std::size_t r = 1; r < pm.map.n_rx; ++r)
                    best = std::max(best, pm(pm.map.pair(x, r), k));
                out(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k)) = best;
            }
        return out;
    }

    Eigen::MatrixXd full_unfold(const PowerTensor3 &t3)
    {
        const std::size_t I = t3.n_delay(), J = t3.n_pairs(), K = t3.n_scans();
        Eigen::MatrixXd out(static_cast<Eigen::Index>(I * J), static_cast<Eigen::Index>(K));
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < J; ++j)
            {
                const double *f = t3.values.fiber(j, k);
                for (std::size_t i = 0; i < I; ++i)
                    out(static_cast<Eigen::Index>(i * J + j), static_cast<Eigen::Index>(k)) = f[i];
            }
        return out;
    }

    Eigen::MatrixXd matricize(const Tensor3 &t, int mode)
    {
        using Idx = Eigen::Index;
        const std::size_t n0 = t.n0, n1 = t.n1, n2 = t.n2;
        Eigen::MatrixXd m;
        switch (mode)
        {
        case 0:
            m.resize(static_cast<Idx>(n0), static_cast<Idx>(n1 * n2));
            for (std::size_t k = 0; k < n2; ++k)
                for (std::size_t j = 0; j < n1; ++j)
                    for (std::size_t i = 0; i < n0; ++i)
                        m(static_cast<Idx>(i), static_cast<Idx>(j + n1 * k)) = t(i, j, k);
            break;
        case 1:
            m.resize(static_cast<Idx>(n1), static_cast<Idx>(n0 * n2));
            for (std::size_t k = 0; k < n2; ++k)
                for (std::size_t j = 0; j < n1; ++j)
                    for (std::size_t i = 0; i < n0; ++i)
                        m(static_cast<Idx>(j), static_cast<Idx>(i + n0 * k)) = t(i, j, k);
            break;
        case 2:
            m.resize(static_cast<Idx>(n2), static_cast<Idx>(n0 * n1));
            for (std::size_t k = 0; k < n2; ++k)
                for (std::size_t j = 0; j < n1; ++j)
                    for (std::size_t i = 0; i < n0; ++i)
                        m(static_cast<Idx>(k), static_cast<Idx>(i + n0 * j)) = t(i, j, k);
            break;
        default:
            throw std::invalid_argument("matricize: mode must be 0, 1 or 2");
        }
        return m;
    }

    Tensor3 fold(const Eigen::MatrixXd &m, int mode, std::size_t n0, std::size_t n1, std::size_t n2)
    {
        using Idx = Eigen::Index;
        const std::size_t rows[3] = {n0, n1, n2};
        if (mode < 0 || mode > 2)
            throw std::invalid_argument("fold: mode must be 0, 1 or 2");
        if (static_cast<std::size_t>(m.rows()) != rows[mode] ||
            static_cast<std::size_t>(m.cols()) * rows[mode] != n0 * n1 * n2)
            throw std::invalid_argument("fold: matrix shape does not match the tensor shape");
        Tensor3 t(n0, n1, n2);
        for (std::size_t k = 0; k < n2; ++k)
            for (std::size_t j = 0; j < n1; ++j)
                for (std::size_t i = 0; i < n0; ++i)
                {
                    double v = 0.0;
                    if (mode == 0)
                        v = m(static_cast<Idx>(i), static_cast<Idx>(j + n1 * k));
                    else if (mode == 1)
                        v = m(static_cast<Idx>(j), static_cast<Idx>(i + n0 * k));
                    else
                        v = m(static_cast<Idx>(k), static_cast<Idx>(i + n0 * j));
                    t(i, j, k) = v;
                }
        return t;
    }

    Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b)
    {
        if (a.cols() != b.cols())
            throw std::invalid_argument("khatri_rao: column counts differ");
        Eigen::MatrixXd out(a.rows() * b.rows(), a.cols());
        for (Eigen::Index l = 0; l < a.cols(); ++l)
            for (Eigen::Index r = 0; r < a.rows(); ++r)
                out.col(l).segment(r * b.rows(), b.rows()) = a(r, l) * b.col(l);
        return out;
    }

    double total_power(const Tensor3 &t)
    {
        return simd::active().sum(t.data.data(), t.data.size());
    }
}
