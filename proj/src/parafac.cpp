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

#include "blocktensor/parafac.hpp"
#include "blocktensor/simd/kernels.hpp"
#include "blocktensor/tensorops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace blocktensor
{
    namespace
    {
        using Mat = Eigen::MatrixXd;
        using Vec = Eigen::VectorXd;
        using Idx = Eigen::Index;

        constexpr double ill_conditioned_ratio = 1e-12;
        constexpr double tikhonov_scale = 1e-10;
        constexpr std::size_t max_gram_size = 4096;

        Idx ix(std::size_t v) { return static_cast<Idx>(v); }

        // F = M V^-1 for symmetric positive semidefinite V.
        Mat solve_normal(const Mat &m, Mat v, bool &regularized)
        {
            Eigen::SelfAdjointEigenSolver<Mat> es(v, Eigen::EigenvaluesOnly);
            const double hi = es.eigenvalues().maxCoeff();
            const double lo = es.eigenvalues().minCoeff();
            if (!(hi > 0.0) || !std::isfinite(hi))
            {
                regularized = true;
                return Mat::Zero(m.rows(), m.cols());
            }
            if (lo < ill_conditioned_ratio * hi)
            {
                v.diagonal().array() += tikhonov_scale * v.trace();
                regularized = true;
            }
            Eigen::LLT<Mat> llt(v);
            if (llt.info() != Eigen::Success)
            {
                regularized = true;
                return v.ldlt().solve(m.transpose()).transpose();
            }
            return llt.solve(m.transpose()).transpose();
        }

        // Mode-0 MTTKRP: X_(0) (G kr S).
        Mat mttkrp0(const Tensor3 &x, const Mat &s, const Mat &g)
        {
            const auto &kern = simd::active();
            const std::size_t L = static_cast<std::size_t>(s.cols());
            Mat out = Mat::Zero(ix(x.n0), ix(L));
            for (std::size_t k = 0; k < x.n2; ++k)
                for (std::size_t j = 0; j < x.n1; ++j)
                {
                    const double *f = x.fiber(j, k);
                    for (std::size_t l = 0; l < L; ++l)
                    {
                        const double w = s(ix(j), ix(l)) * g(ix(k), ix(l));
                        if (w != 0.0)
                            kern.axpy(w, f, out.col(ix(l)).data(), x.n0);
                    }
                }
            return out;
        }

        // P(l, k * J + j) = <x[:, j, k], D[:, l]>, shared by the mode-1 and mode-2 products.
        Mat fiber_dots(const Tensor3 &x, const Mat &d)
        {
            const auto &kern = simd::active();
            const std::size_t L = static_cast<std::size_t>(d.cols());
            Mat p(ix(L), ix(x.n1 * x.n2));
            for (std::size_t k = 0; k < x.n2; ++k)
                for (std::size_t j = 0; j < x.n1; ++j)
                    kern.multi_dot(x.fiber(j, k), d.data(), static_cast<std::size_t>(d.rows()), L, x.n0,
                                   p.col(ix(k * x.n1 + j)).data());
            return p;
        }

        Mat mttkrp1(const Mat &p, const Mat &g, std::size_t n1, std::size_t n2)
        {
            const Idx L = g.cols();
            Mat out = Mat::Zero(ix(n1), L);
            for (std::size_t k = 0; k < n2; ++k)
                for (std::size_t j = 0; j < n1; ++j)
                    for (Idx l = 0; l < L; ++l)
                        out(ix(j), l) += p(l, ix(k * n1 + j)) * g(ix(k), l);
            return out;
        }

        Mat mttkrp2(const Mat &p, const Mat &s, std::size_t n1, std::size_t n2)
        {
            const Idx L = s.cols();
            Mat out = Mat::Zero(ix(n2), L);
            for (std::size_t k = 0; k < n2; ++k)
                for (std::size_t j = 0; j < n1; ++j)
                    for (Idx l = 0; l < L; ++l)
                        out(ix(k), l) += p(l, ix(k * n1 + j)) * s(ix(j), l);
            return out;
        }

        double residual2(const Tensor3 &x, const Mat &d, const Mat &s, const Mat &g)
        {
            const Idx L = d.cols();
            Vec w(L), r(ix(x.n0));
            double acc = 0.0;
            for (std::size_t k = 0; k < x.n2; ++k)
                for (std::size_t j = 0; j < x.n1; ++j)
                {
                    for (Idx l = 0; l < L; ++l)
                        w(l) = s(ix(j), l) * g(ix(k), l);
                    r.noalias() = d * w;
                    r = Eigen::Map<const Vec>(x.fiber(j, k), ix(x.n0)) - r;
                    acc += r.squaredNorm();
                }
            return acc;
        }

        double squared_norm(const Tensor3 &x)
        {
            return simd::active().dot(x.data.data(), x.data.data(), x.data.size());
        }

        void normalize(Mat &d, Mat &s, Mat &g)
        {
            for (Idx l = 0; l < d.cols(); ++l)
            {
                const double nd = d.col(l).norm();
                if (nd > 0.0)
                {
                    d.col(l) /= nd;
                    g.col(l) *= nd;
                }
                const double ns = s.col(l).norm();
                if (ns > 0.0)
                {
                    s.col(l) /= ns;
                    g.col(l) *= ns;
                }
            }
        }

        // Leading eigenvectors of a Gram matrix, largest first.
        Mat leading_eigenvectors(const Mat &gram, std::size_t L)
        {
            Eigen::SelfAdjointEigenSolver<Mat> es(gram);
            const Idx n = gram.rows();
            Mat out(n, ix(L));
            for (std::size_t l = 0; l < L; ++l)
            {
                out.col(ix(l)) = es.eigenvectors().col(n - 1 - ix(l));
                if (out.col(ix(l)).sum() < 0.0)
                    out.col(ix(l)) *= -1.0;
            }
            return out;
        }

        Mat random_factor(std::size_t rows, std::size_t L, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            Mat m(ix(rows), ix(L));
            for (Idx c = 0; c < m.cols(); ++c)
                for (Idx r = 0; r < m.rows(); ++r)
                    m(r, c) = u(rng);
            return m;
        }

        void canonicalize(CPModel &m)
        {
            const Idx L = m.D.cols();
            for (Idx l = 0; l < L; ++l)
            {
                if (m.D.col(l).sum() < 0.0)
                {
                    m.D.col(l) *= -1.0;
                    m.G.col(l) *= -1.0;
                }
                if (m.S.col(l).sum() < 0.0)
                {
                    m.S.col(l) *= -1.0;
                    m.G.col(l) *= -1.0;
                }
            }
            std::vector<Idx> order(static_cast<std::size_t>(L));
            std::iota(order.begin(), order.end(), Idx{0});
            std::vector<double> gn(static_cast<std::size_t>(L));
            for (Idx l = 0; l < L; ++l)
                gn[static_cast<std::size_t>(l)] = m.G.col(l).norm();
            std::stable_sort(order.begin(), order.end(), [&](Idx a, Idx b)
                             { return gn[static_cast<std::size_t>(a)] > gn[static_cast<std::size_t>(b)]; });
            Mat d(m.D.rows(), L), s(m.S.rows(), L), g(m.G.rows(), L);
            for (Idx l = 0; l < L; ++l)
            {
                d.col(l) = m.D.col(order[static_cast<std::size_t>(l)]);
                s.col(l) = m.S.col(order[static_cast<std::size_t>(l)]);
                g.col(l) = m.G.col(order[static_cast<std::size_t>(l)]);
            }
            m.D = std::move(d);
            m.S = std::move(s);
            m.G = std::move(g);
        }

        double abs_cosine(const Eigen::Ref<const Vec> &a, const Eigen::Ref<const Vec> &b)
        {
            const double na = a.norm(), nb = b.norm();
            if (na == 0.0 || nb == 0.0)
                return 0.0;
            return std::min(1.0, std::abs(a.dot(b)) / (na * nb));
        }

        // Randomized range finder with power iterations; exact for the leading
        // directions when the spectrum decays.
        void truncated_svd(const Mat &a, std::size_t L, Mat &u, Vec &sv, Mat &v)
        {
            const Idx rows = a.rows(), cols = a.cols();
            const Idx small = std::min(rows, cols);
            if (small <= 512)
            {
                Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
                u = svd.matrixU().leftCols(ix(L));
                sv = svd.singularValues().head(ix(L));
                v = svd.matrixV().leftCols(ix(L));
                return;
            }
            const Idx p = std::min(small, ix(L) + 10);
            std::mt19937_64 rng(0x5eedULL);
            std::normal_distribution<double> nd(0.0, 1.0);
            Mat omega(cols, p);
            for (Idx c = 0; c < p; ++c)
                for (Idx r = 0; r < cols; ++r)
                    omega(r, c) = nd(rng);
            Mat q = Eigen::HouseholderQR<Mat>(a * omega).householderQ() * Mat::Identity(rows, p);
            for (int it = 0; it < 6; ++it)
            {
                Mat z = Eigen::HouseholderQR<Mat>(a.transpose() * q).householderQ() * Mat::Identity(cols, p);
                q = Eigen::HouseholderQR<Mat>(a * z).householderQ() * Mat::Identity(rows, p);
            }
            Mat b = q.transpose() * a;
            Eigen::BDCSVD<Mat> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
            u = q * svd.matrixU().leftCols(ix(L));
            sv = svd.singularValues().head(ix(L));
            v = svd.matrixV().leftCols(ix(L));
        }
    }

    void AlsOptions::validate() const
    {
        if (max_iters < 1)
            throw std::invalid_argument("AlsOptions: max_iters must be at least 1");
        if (!(tol > 0.0))
            throw std::invalid_argument("AlsOptions: tol must be positive");
    }

    CPModel cp_als(const Tensor3 &x, std::size_t rank, const AlsOptions &opts)
    {
        opts.validate();
        const std::size_t I = x.n0, J = x.n1, K = x.n2;
        if (x.data.size() != I * J * K)
            throw std::invalid_argument("cp_als: data size does not match the tensor dimensions");
        if (rank < 1 || rank > std::min({I, J, K}))
            throw std::invalid_argument("cp_als: rank must be between 1 and the smallest mode size");
        for (double v : x.data)
            if (!std::isfinite(v))
                throw std::invalid_argument("cp_als: tensor contains non-finite values");

        const double xnorm2 = squared_norm(x);
        const double xnorm = std::sqrt(xnorm2);
        CPModel m;
        m.rank = rank;

        std::mt19937_64 rng(opts.seed);
        Mat d, s, g;
        if (opts.init == AlsOptions::Init::svd && I <= max_gram_size)
        {
            Eigen::Map<const Mat> x0(x.data.data(), ix(I), ix(J * K));
            Mat gram0 = x0 * x0.transpose();
            d = leading_eigenvectors(gram0, rank);
        }
        else
            d = random_factor(I, rank, rng);
        if (opts.init == AlsOptions::Init::svd && J <= max_gram_size)
        {
            Mat gram1 = Mat::Zero(ix(J), ix(J));
            for (std::size_t k = 0; k < K; ++k)
            {
                Eigen::Map<const Mat> xk(x.data.data() + k * I * J, ix(I), ix(J));
                gram1.noalias() += xk.transpose() * xk;
            }
            s = leading_eigenvectors(gram1, rank);
        }
        else
            s = random_factor(J, rank, rng);
        if (opts.nonneg)
        {
            d = d.cwiseAbs();
            s = s.cwiseAbs();
        }
        auto project = [&](Mat &f)
        {
            if (opts.nonneg)
                f = f.cwiseMax(0.0);
        };
        {
            const Mat p = fiber_dots(x, d);
            const Mat v = (d.transpose() * d).cwiseProduct(s.transpose() * s);
            g = solve_normal(mttkrp2(p, s, J, K), v, m.regularized);
            project(g);
        }

        auto fit_of = [&](const Mat &dd, const Mat &ss, const Mat &gg)
        {
            const double r2 = residual2(x, dd, ss, gg);
            return xnorm > 0.0 ? std::sqrt(r2) / xnorm : (r2 > 0.0 ? 1.0 : 0.0);
        };

        double prev = fit_of(d, s, g);
        Mat best_d = d, best_s = s, best_g = g;
        double best_fit = prev;

        for (std::size_t it = 1; it <= opts.max_iters; ++it)
        {
            Mat v = (s.transpose() * s).cwiseProduct(g.transpose() * g);
            d = solve_normal(mttkrp0(x, s, g), v, m.regularized);
            project(d);

            const Mat p = fiber_dots(x, d);
            v = (d.transpose() * d).cwiseProduct(g.transpose() * g);
            s = solve_normal(mttkrp1(p, g, J, K), v, m.regularized);
            project(s);

            v = (d.transpose() * d).cwiseProduct(s.transpose() * s);
            g = solve_normal(mttkrp2(p, s, J, K), v, m.regularized);
            project(g);
            normalize(d, s, g);

            const double f = fit_of(d, s, g);
            m.objective_history.push_back(f * xnorm);
            m.iterations = it;
            if (f <= best_fit)
            {
                best_fit = f;
                best_d = d;
                best_s = s;
                best_g = g;
            }
            if (std::abs(prev - f) < opts.tol || f == 0.0)
            {
                m.converged = true;
                break;
            }
            prev = f;
        }

        m.D = std::move(best_d);
        m.S = std::move(best_s);
        m.G = std::move(best_g);
        normalize(m.D, m.S, m.G);
        canonicalize(m);
        m.fit = best_fit;
        return m;
    }

    CPModel cp_als(const PowerTensor3 &t3, std::size_t rank, const AlsOptions &opts)
    {
        CPModel m = cp_als(t3.values, rank, opts);
        m.map = t3.map;
        m.timestamps = t3.timestamps;
        return m;
    }

    Tensor3 reconstruct(const CPModel &m)
    {
        const std::size_t I = m.n_delay(), J = m.n_pairs(), K = m.n_scans();
        if (m.D.cols() != m.S.cols() || m.D.cols() != m.G.cols())
            throw std::invalid_argument("reconstruct: factor column counts differ");
        Tensor3 t(I, J, K);
        Vec w(m.D.cols());
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < J; ++j)
            {
                for (Idx l = 0; l < w.size(); ++l)
                    w(l) = m.S(ix(j), l) * m.G(ix(k), l);
                Eigen::Map<Vec>(t.data.data() + t.index(0, j, k), ix(I)).noalias() = m.D * w;
            }
        return t;
    }

    double fit(const CPModel &m, const Tensor3 &x)
    {
        if (m.n_delay() != x.n0 || m.n_pairs() != x.n1 || m.n_scans() != x.n2)
            throw std::invalid_argument("fit: model and tensor shapes differ");
        if (m.D.cols() != m.S.cols() || m.D.cols() != m.G.cols())
            throw std::invalid_argument("fit: factor column counts differ");
        const double x2 = squared_norm(x);
        if (m.D.isZero(0.0) || m.S.isZero(0.0) || m.G.isZero(0.0))
            return x2 > 0.0 ? 1.0 : 0.0;
        const double r2 = residual2(x, m.D, m.S, m.G);
        if (x2 == 0.0)
            return r2 > 0.0 ? 1.0 : 0.0;
        return std::sqrt(r2 / x2);
    }

    double fit(const CPModel &m, const PowerTensor3 &t3) { return fit(m, t3.values); }

    PCAModel pca_baseline(const PowerTensor3 &t3, std::size_t rank)
    {
        const Mat a = full_unfold(t3);
        if (rank < 1 || rank > static_cast<std::size_t>(std::min(a.rows(), a.cols())))
            throw std::invalid_argument("pca_baseline: rank must be between 1 and min(rows, scans)");
        PCAModel pm;
        pm.rank = rank;
        pm.timestamps = t3.timestamps;
        pm.total_energy = a.squaredNorm();
        Mat u, v;
        Vec sv;
        truncated_svd(a, rank, u, sv, v);
        for (Idx l = 0; l < u.cols(); ++l)
            if (u.col(l).sum() < 0.0)
            {
                u.col(l) *= -1.0;
                v.col(l) *= -1.0;
            }
        pm.loadings = std::move(u);
        pm.singular_values = sv;
        pm.scores = v * sv.asDiagonal();
        return pm;
    }

    double congruence(const CPModel &a, std::size_t la, const CPModel &b, std::size_t lb)
    {
        if (a.D.rows() != b.D.rows() || a.S.rows() != b.S.rows() || a.G.rows() != b.G.rows())
            throw std::invalid_argument("congruence: model shapes differ");
        return abs_cosine(a.D.col(ix(la)), b.D.col(ix(lb))) * abs_cosine(a.S.col(ix(la)), b.S.col(ix(lb))) *
               abs_cosine(a.G.col(ix(la)), b.G.col(ix(lb)));
    }

    Alignment align_factors(const CPModel &model, const CPModel &reference)
    {
        const std::size_t L = static_cast<std::size_t>(model.D.cols());
        if (static_cast<std::size_t>(reference.D.cols()) != L)
            throw std::invalid_argument("align_factors: component counts differ");
        Mat c(ix(L), ix(L));
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = 0; b < L; ++b)
                c(ix(a), ix(b)) = congruence(model, a, reference, b);

        Alignment out;
        out.match.assign(L, L);
        out.congruence.assign(L, 0.0);
        std::vector<bool> used_model(L, false), used_ref(L, false);
        for (std::size_t step = 0; step < L; ++step)
        {
            double best = -1.0;
            std::size_t ba = 0, bb = 0;
            for (std::size_t a = 0; a < L; ++a)
                for (std::size_t b = 0; b < L; ++b)
                    if (!used_model[a] && !used_ref[b] && c(ix(a), ix(b)) > best)
                    {
                        best = c(ix(a), ix(b));
                        ba = a;
                        bb = b;
                    }
            used_model[ba] = used_ref[bb] = true;
            out.match[bb] = ba;
            out.congruence[bb] = best;
        }
        return out;
    }
}
