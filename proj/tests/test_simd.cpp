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

#include "blocktensor/simd/kernels.hpp"

#include "catch_amalgamated.hpp"

#include <cstring>
#include <numeric>
#include <random>
#include <vector>

using namespace blocktensor::simd;
using Catch::Matchers::WithinRel;

namespace
{
    std::vector<double> randoms(std::size_t n, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> d(0.0, 1.0);
        std::vector<double> v(n);
        for (double &x : v)
            x = d(rng);
        return v;
    }

    const std::size_t lengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 64, 100, 1023};
}

TEST_CASE("scalar kernels compute the reference values")
{
    const auto &k = scalar_kernels();
    const double z[] = {3.0, 4.0, -1.0, 2.0};
    double out[2];
    k.abs2(z, out, 2);
    CHECK(out[0] == 25.0);
    CHECK(out[1] == 5.0);

    const double a[] = {1, 2, 3}, b[] = {4, 5, 6};
    CHECK(k.dot(a, b, 3) == 32.0);
    double y[] = {1, 1, 1};
    k.axpy(2.0, a, y, 3);
    CHECK(y[2] == 7.0);

    const double cancel[] = {1.0, 1e100, 1.0, -1e100};
    CHECK(k.sum(cancel, 4) == 2.0);

    const double cols[] = {1, 0, 0, 9, 0, 1, 0, 9};
    double md[2];
    k.multi_dot(a, cols, 4, 2, 3, md);
    CHECK(md[0] == 1.0);
    CHECK(md[1] == 2.0);
}

TEST_CASE("the active table is one of the available variants")
{
    const auto isas = available_isas();
    REQUIRE_FALSE(isas.empty());
    CHECK(isas.front() == Isa::scalar);
    CHECK(std::find(isas.begin(), isas.end(), active().isa) != isas.end());
    for (Isa isa : isas)
    {
        REQUIRE(kernels_for(isa) != nullptr);
        CHECK(kernels_for(isa)->isa == isa);
        CHECK(isa_name(isa) == kernels_for(isa)->name);
    }
}

TEST_CASE("vector variants match the scalar reference")
{
    const auto &ref = scalar_kernels();
    for (Isa isa : available_isas())
    {
        const auto &k = *kernels_for(isa);
        CAPTURE(isa_name(isa));
        for (std::size_t n : lengths)
        {
            CAPTURE(n);
            const auto x = randoms(2 * n + 1, 11 + n), y = randoms(2 * n + 1, 97 + n);

            std::vector<double> o1(n + 1, -1.0), o2(n + 1, -1.0);
            ref.abs2(x.data(), o1.data(), n);
            k.abs2(x.data(), o2.data(), n);
            CHECK(std::memcmp(o1.data(), o2.data(), o1.size() * sizeof(double)) == 0);

            double mag = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                mag += std::abs(x[i] * y[i]);
            CHECK(std::abs(k.dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= 1e-14 * (mag + 1.0));

            auto y1 = y, y2 = y;
            ref.axpy(0.75, x.data(), y1.data(), n);
            k.axpy(0.75, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < y1.size(); ++i)
                CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (std::abs(y1[i]) + 1.0));

            double abs_sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                abs_sum += std::abs(x[i]);
            CHECK(std::abs(k.sum(x.data(), n) - ref.sum(x.data(), n)) <= 1e-15 * (abs_sum + 1.0));

            const std::size_t cols = 5, stride = n + 3;
            const auto m = randoms(cols * stride, 5 + n);
            std::vector<double> d1(cols), d2(cols);
            ref.multi_dot(x.data(), m.data(), stride, cols, n, d1.data());
            k.multi_dot(x.data(), m.data(), stride, cols, n, d2.data());
            for (std::size_t l = 0; l < cols; ++l)
                CHECK(std::abs(d1[l] - ref.dot(x.data(), m.data() + l * stride, n)) <= 1e-12);
            for (std::size_t l = 0; l < cols; ++l)
                CHECK(std::abs(d1[l] - d2[l]) <= 1e-13 * (std::sqrt(double(n)) + 1.0));
        }
    }
}

TEST_CASE("compensated sum is exact for a telescoping series")
{
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i)
    {
        v.push_back(1e16);
        v.push_back(1.0);
        v.push_back(-1e16);
    }
    for (Isa isa : available_isas())
        CHECK(kernels_for(isa)->sum(v.data(), v.size()) == 1000.0);
}
