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

namespace blocktensor::simd
{
    namespace
    {
        void abs2_scalar(const double *interleaved, double *out, std::size_t n)
        {
            for (std::size_t i = 0; i < n; ++i)
            {
                const double re = interleaved[2 * i];
                const double im = interleaved[2 * i + 1];
                out[i] = re * re + im * im;
            }
        }

        double dot_scalar(const double *a, const double *b, std::size_t n)
        {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += a[i] * b[i];
            return acc;
        }

        void axpy_scalar(double alpha, const double *x, double *y, std::size_t n)
        {
            for (std::size_t i = 0; i < n; ++i)
                y[i] += alpha * x[i];
        }

        double sum_scalar(const double *x, std::size_t n)
        {
            double s = 0.0, c = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                const double v = x[i];
                const double t = s + v;
                if ((s < 0 ? -s : s) >= (v < 0 ? -v : v))
                    c += (s - t) + v;
                else
                    c += (v - t) + s;
                s = t;
            }
            return s + c;
        }

        void multi_dot_scalar(const double *x, const double *cols, std::size_t col_stride,
                              std::size_t n_cols, std::size_t n, double *out)
        {
            for (std::size_t l = 0; l < n_cols; ++l)
                out[l] = dot_scalar(x, cols + l * col_stride, n);
        }
    }

    const KernelTable &scalar_kernels()
    {
        static const KernelTable table{Isa::scalar, "scalar", abs2_scalar, dot_scalar,
                                       axpy_scalar, sum_scalar, multi_dot_scalar};
        return table;
    }
}
