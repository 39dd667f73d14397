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

#ifndef BLOCKTENSOR_TENSOROPS_HPP
#define BLOCKTENSOR_TENSOROPS_HPP

#include "blocktensor/tensor.hpp"

#include <Eigen/Dense>

namespace blocktensor
{
    // Squared magnitudes with the rx/tx beam modes merged into one beam-pair
    // mode j = tx * n_rx + rx. A pure reindexing of |h|^2: nothing is discarded.
    PowerTensor3 partial_unfold(const MeasurementTensor &t4);

    // Splits the beam-pair mode back into [delay, rx, tx, scan].
    PowerTensor4 refold(const PowerTensor3 &t3);

    // Sums received power over the delay mode (compensated summation).
    PowerMatrix delay_power(const PowerTensor3 &t3);

    // [tx beam x scan]: for each TX beam, the best RX beam's power.
    Eigen::MatrixXd best_rx_per_tx(const PowerMatrix &pm);

    // [(delay * n_pairs) x scan], row = i * n_pairs + j.
    Eigen::MatrixXd full_unfold(const PowerTensor3 &t3);

    // Mode-n unfolding; remaining modes in ascending order with the lower one
    // varying fastest along the columns:
    //   mode 0: [n0 x n1*n2], column j + n1*k
    //   mode 1: [n1 x n0*n2], column i + n0*k
    //   mode 2: [n2 x n0*n1], column i + n0*j
    Eigen::MatrixXd matricize(const Tensor3 &t, int mode);

    // Inverse of matricize for the given shape.
    Tensor3 fold(const Eigen::MatrixXd &m, int mode, std::size_t n0, std::size_t n1, std::size_t n2);

    // Column-wise Kronecker product: row a * rows(B) + b holds A(a, l) * B(b, l).
    Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b);

    // Sum of every entry, compensated.
    double total_power(const Tensor3 &t);
}

#endif
