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

#include "variants.hpp"

#include <arm_neon.h>
#include <cmath>

namespace blocktensor::simd::detail
{
    namespace
    {
        void abs2_neon(const double *interleaved, double *out, std::size_t n)
        {
            std::size_t i = 0;
            for (; i + 2 <= n; i += 2)
            {
                const float64x2x2_t v = vld2q_f64(interleaved + 2 * i); // val[0] = re, val[1] = im
                const float64x2_t re2 = vmulq_f64(v.val[0], v.val[0]);
                const float64x2_t im2 = vmulq_f64(v.val[1], v.val[1]);
                vst1q_f64(out + i, vaddq_f64(re2, im2));
            }
            for (; i < n; ++i)
            {
                const double re = interleaved[2 * i];
                const double im = interleaved[2 * i + 1];
                out[i] = re * re + im * im;
            }
        }

        double dot_neon(const double *a, const double *b, std::size_t n)
        {
            float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
            {
                acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
                acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
            }
            double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
            for (; i < n; ++i)
                acc += a[i] * b[i];
            return acc;
        }

        void axpy_neon(double alpha, const double *x, double *y, std::size_t n)
        {
            const float64x2_t va = vdupq_n_f64(alpha);
            std::size_t i = 0;
            for (; i + 2 <= n; i += 2)
                vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
            for (; i < n; ++i)
                y[i] += alpha * x[i];
        }

        inline void neumaier(double &s, double &c, double v)
        {
            const double t = s + v;
            if (std::fabs(s) >= std::fabs(v))
                c += (s - t) + v;
            else
                c += (v - t) + s;
            s = t;
        }

        double sum_neon(const double *x, std::size_t n)
        {
            float64x2_t s = vdupq_n_f64(0.0), c = vdupq_n_f64(0.0);
            std::size_t i = 0;
            for (; i + 2 <= n; i += 2)
            {
                const float64x2_t v = vld1q_f64(x + i);
                const float64x2_t t = vaddq_f64(s, v);
                const uint64x2_t s_big = vcgeq_f64(vabsq_f64(s), vabsq_f64(v));
                const float64x2_t when_s_big = vaddq_f64(vsubq_f64(s, t), v);
                const float64x2_t when_v_big = vaddq_f64(vsubq_f64(v, t), s);
                c = vaddq_f64(c, vbslq_f64(s_big, when_s_big, when_v_big));
                s = t;
            }
            double total = 0.0, comp = 0.0;
            neumaier(total, comp, vgetq_lane_f64(s, 0));
            neumaier(total, comp, vgetq_lane_f64(s, 1));
            comp += vgetq_lane_f64(c, 0) + vgetq_lane_f64(c, 1);
            for (; i < n; ++i)
                neumaier(total, comp, x[i]);
            return total + comp;
        }

        void multi_dot_neon(const double *x, const double *cols, std::size_t col_stride,
                            std::size_t n_cols, std::size_t n, double *out)
        {
            for (std::size_t l = 0; l < n_cols; ++l)
                out[l] = dot_neon(x, cols + l * col_stride, n);
        }
    }

    const KernelTable &neon_kernels()
    {
        static const KernelTable table{Isa::neon, "neon", abs2_neon, dot_neon,
                                       axpy_neon, sum_neon, multi_dot_neon};
        return table;
    }
}
