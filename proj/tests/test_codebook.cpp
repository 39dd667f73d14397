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

#include "blocktensor/codebook.hpp"

#include "catch_amalgamated.hpp"

#include <stdexcept>

using namespace blocktensor;
using Catch::Matchers::WithinAbs;

TEST_CASE("default codebook spans the steering range uniformly")
{
    const auto cb = make_codebook(CodebookParams{});
    REQUIRE(cb.size() == 12);
    CHECK(cb.beams.front().steering_az == -45.0);
    CHECK(cb.beams.back().steering_az == 45.0);
    for (std::size_t i = 1; i < cb.size(); ++i)
        CHECK_THAT(cb.beams[i].steering_az - cb.beams[i - 1].steering_az, WithinAbs(8.181818181818182, 1e-12));
    CHECK_THAT(cb.beams[6].steering_az, WithinAbs(4.0909, 1e-4));
}

TEST_CASE("a single beam sits at boresight")
{
    const auto cb = make_codebook(1, 45.0, 23.0, 30.0, -20.0);
    REQUIRE(cb.size() == 1);
    CHECK(cb.beams[0].steering_az == 0.0);
}

TEST_CASE("beam pattern: peak, half power, floor")
{
    const auto cb = make_codebook(12, 45.0, 23.0, 30.0, -20.0);
    const double s = cb.beams[3].steering_az;
    CHECK(gain_db(cb, 3, s) == 23.0);
    CHECK_THAT(gain_db(cb, 3, s + 15.0), WithinAbs(20.0, 1e-12));
    CHECK_THAT(gain_db(cb, 3, s - 15.0), WithinAbs(20.0, 1e-12));
    CHECK(gain_db(cb, 3, s + 90.0) == 3.0);
    CHECK(gain_db(cb, 3, s + 180.0) == 3.0);
    CHECK_THAT(gain(cb, 3, s), WithinAbs(std::pow(10.0, 23.0 / 20.0), 1e-12));
}

TEST_CASE("azimuth wraps across +-180")
{
    const auto cb = make_codebook(3, 90.0, 10.0, 40.0, -30.0);
    CHECK_THAT(gain_db(cb, 0, -90.0 + 360.0), WithinAbs(10.0, 1e-12));
}

TEST_CASE("pattern is monotone away from the steering direction")
{
    const auto cb = make_codebook(12, 45.0, 23.0, 30.0, -20.0);
    double prev = gain_db(cb, 5, cb.beams[5].steering_az);
    for (double d = 1.0; d <= 60.0; d += 1.0)
    {
        const double g = gain_db(cb, 5, cb.beams[5].steering_az + d);
        CHECK(g <= prev);
        prev = g;
    }
}

TEST_CASE("invalid parameters are rejected")
{
    CHECK_THROWS_AS(make_codebook(0, 45.0, 23.0, 30.0, -20.0), std::invalid_argument);
    CHECK_THROWS_AS(make_codebook(4, 0.0, 23.0, 30.0, -20.0), std::invalid_argument);
    CHECK_THROWS_AS(make_codebook(4, 45.0, 23.0, -1.0, -20.0), std::invalid_argument);
    CHECK_THROWS_AS(make_codebook(4, 45.0, 23.0, 30.0, 3.0), std::invalid_argument);
    const auto cb = make_codebook(4, 45.0, 23.0, 30.0, -20.0);
    CHECK_THROWS_AS(gain_db(cb, 4, 0.0), std::out_of_range);
}
