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

#ifndef BLOCKTENSOR_PARAFAC_HPP
#define BLOCKTENSOR_PARAFAC_HPP

#include "blocktensor/tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace blocktensor
{
    // Rank-L CP model x[i,j,k] ~ sum_l D(i,l) S(j,l) G(k,l).
    // Columns of D and S have unit norm, magnitude lives in G, and components are
    // ordered by descending norm of their G column.
    struct CPModel
    {
        std::size_t rank = 0;
        Eigen::MatrixXd D; // delay signatures [I x L]
        Eigen::MatrixXd S; // spatial signatures [J x L]
        Eigen::MatrixXd G; // gain trajectories [K x L]
        double fit = 1.0;  // ||x - x_hat|| / ||x||
        std::size_t iterations = 0;
        bool converged = false;
        bool regularized = false; // a normal system needed the Tikhonov fallback

        // ||x - x_hat|| after every sweep.
        std::vector<double> objective_history;

        BeamPairMap map;
        std::vector<double> timestamps;

        std::size_t n_delay() const { return static_cast<std::size_t>(D.rows()); }
        std::size_t n_pairs() const { return static_cast<std::size_t>(S.rows()); }
        std::size_t n_scans() const { return static_cast<std::size_t>(G.rows()); }
    };

    // Truncated SVD of the [(delay * pairs) x scan] unfolding: A ~ loadings * scores^T.
    struct PCAModel
    {
        std::size_t rank = 0;
        Eigen::MatrixXd loadings;       // [(I * J) x L], orthonormal columns
        Eigen::MatrixXd scores;         // [K x L], V * Sigma
        Eigen::VectorXd singular_values;
        double total_energy = 0.0;      // ||A||_F^2
        std::vector<double> timestamps;
    };

    struct AlsOptions
    {
        enum class Init
        {
            svd,
            random
        };

        std::size_t max_iters = 500;
        double tol = 1e-8; // stop when |fit change| between sweeps drops below this
        Init init = Init::svd;
        bool nonneg = false;
        std::uint64_t seed = 0;

        void validate() const;
    };

    CPModel cp_als(const PowerTensor3 &t3, std::size_t rank, const AlsOptions &opts = {});
    CPModel cp_als(const Tensor3 &x, std::size_t rank, const AlsOptions &opts = {});

    Tensor3 reconstruct(const CPModel &m);

    // ||x - x_hat||_F / ||x||_F; 0 when both are zero.
    double fit(const CPModel &m, const Tensor3 &x);
    double fit(const CPModel &m, const PowerTensor3 &t3);

    PCAModel pca_baseline(const PowerTensor3 &t3, std::size_t rank);

    // Product over the three modes of |<a, b>| / (||a|| ||b||).
    double congruence(const CPModel &a, std::size_t la, const CPModel &b, std::size_t lb);

    struct Alignment
    {
        // model component matched to each reference component
        std::vector<std::size_t> match;
        std::vector<double> congruence;
    };

    // Greedy maximum-congruence matching; ties go to the lowest indices.
    Alignment align_factors(const CPModel &model, const CPModel &reference);
}

#endif
