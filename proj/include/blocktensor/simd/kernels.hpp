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

#ifndef BLOCKTENSOR_SIMD_KERNELS_HPP
#define BLOCKTENSOR_SIMD_KERNELS_HPP

#include <cstddef>
#include <string_view>
#include <vector>

// Dense inner-loop kernels used by the tensor transforms and CP-ALS.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2+FMA
// on x86-64, NEON on AArch64) are compiled into separate translation units and
// picked at runtime from the host CPU features. The environment variable
// BLOCKTENSOR_SIMD=scalar|avx2|neon overrides the choice.
//
// Equivalence contract between variants:
//   abs2        bit-identical (explicit mul/mul/add, no FMA)
//   dot, axpy   equal up to accumulation-order rounding
//   sum         compensated; equal to ~1 ulp of the exact sum
namespace blocktensor::simd
{
    enum class Isa
    {
        scalar,
        avx2,
        neon
    };

    struct KernelTable
    {
        Isa isa;
        const char *name;

        // out[n] = re[n]^2 + im[n]^2 for interleaved (re, im) pairs.
        void (*abs2)(const double *interleaved, double *out, std::size_t n);

        double (*dot)(const double *a, const double *b, std::size_t n);

        // y += alpha * x
        void (*axpy)(double alpha, const double *x, double *y, std::size_t n);

        // Neumaier-compensated sum.
        double (*sum)(const double *x, std::size_t n);

        // out[l] = dot(x, cols + l * col_stride) for l in [0, n_cols)
        void (*multi_dot)(const double *x, const double *cols, std::size_t col_stride,
                          std::size_t n_cols, std::size_t n, double *out);
    };

    const KernelTable &scalar_kernels();

    // nullptr when the variant is not compiled in or not supported by this CPU.
    const KernelTable *kernels_for(Isa isa);

    // The table used by the library; resolved once per process.
    const KernelTable &active();

    std::vector<Isa> available_isas();

    std::string_view isa_name(Isa isa);
}

#endif
