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

// Compiled with -mavx2 -mfma. Only reached after the dispatcher confirmed the
// CPU supports both extensions.

#include "variants.hpp"

#include <cmath>
#include <immintrin.h>

namespace blocktensor::simd::detail
{
    namespace
    {
        inline double hsum(__m256d v)
        {
            const __m128d lo = _mm256_castpd256_pd128(v);
            const __m128d hi = _mm256_extractf128_pd(v, 1);
            const __m128d s = _mm_add_pd(lo, hi);
            return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
        }

        void abs2_avx2(const double *interleaved, double *out, std::size_t n)
        {
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
            {
                const __m256d a = _mm256_loadu_pd(interleaved + 2 * i);     // r0 i0 r1 i1
                const __m256d b = _mm256_loadu_pd(interleaved + 2 * i + 4); // r2 i2 r3 i3
                // hadd pairs within 128-bit lanes: [|c0|, |c2|, |c1|, |c3|]
                const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
                _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
            }
            for (; i < n; ++i)
            {
                const double re = interleaved[2 * i];
                const double im = interleaved[2 * i + 1];
                out[i] = re * re + im * im;
            }
        }

        double dot_avx2(const double *a, const double *b, std::size_t n)
        {
            __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
            __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
            std::size_t i = 0;
            for (; i + 16 <= n; i += 16)
            {
                acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
                acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
                acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
                acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
            }
            for (; i + 4 <= n; i += 4)
                acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
            double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
            for (; i < n; ++i)
                acc += a[i] * b[i];
            return acc;
        }

        void axpy_avx2(double alpha, const double *x, double *y, std::size_t n)
        {
            const __m256d va = _mm256_set1_pd(alpha);
            std::size_t i = 0;
            for (; i + 8 <= n; i += 8)
            {
                _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
                _mm256_storeu_pd(y + i + 4,
                                 _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
            }
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
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

        double sum_avx2(const double *x, std::size_t n)
        {
            const __m256d sign = _mm256_set1_pd(-0.0);
            __m256d s = _mm256_setzero_pd();
            __m256d c = _mm256_setzero_pd();
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
            {
                const __m256d v = _mm256_loadu_pd(x + i);
                const __m256d t = _mm256_add_pd(s, v);
                const __m256d s_big = _mm256_cmp_pd(_mm256_andnot_pd(sign, s), _mm256_andnot_pd(sign, v), _CMP_GE_OQ);
                const __m256d when_s_big = _mm256_add_pd(_mm256_sub_pd(s, t), v);
                const __m256d when_v_big = _mm256_add_pd(_mm256_sub_pd(v, t), s);
                c = _mm256_add_pd(c, _mm256_blendv_pd(when_v_big, when_s_big, s_big));
                s = t;
            }
            alignas(32) double sl[4], cl[4];
            _mm256_store_pd(sl, s);
            _mm256_store_pd(cl, c);
            double total = 0.0, comp = 0.0;
            for (int l = 0; l < 4; ++l)
            {
                neumaier(total, comp, sl[l]);
                comp += cl[l];
            }
            for (; i < n; ++i)
                neumaier(total, comp, x[i]);
            return total + comp;
        }

        void multi_dot_avx2(const double *x, const double *cols, std::size_t col_stride,
                            std::size_t n_cols, std::size_t n, double *out)
        {
            std::size_t l = 0;
            for (; l + 4 <= n_cols; l += 4)
            {
                const double *c0 = cols + l * col_stride;
                const double *c1 = c0 + col_stride;
                const double *c2 = c1 + col_stride;
                const double *c3 = c2 + col_stride;
                __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
                __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
                std::size_t i = 0;
                for (; i + 4 <= n; i += 4)
                {
                    const __m256d v = _mm256_loadu_pd(x + i);
                    a0 = _mm256_fmadd_pd(v, _mm256_loadu_pd(c0 + i), a0);
                    a1 = _mm256_fmadd_pd(v, _mm256_loadu_pd(c1 + i), a1);
                    a2 = _mm256_fmadd_pd(v, _mm256_loadu_pd(c2 + i), a2);
                    a3 = _mm256_fmadd_pd(v, _mm256_loadu_pd(c3 + i), a3);
                }
                double r0 = hsum(a0), r1 = hsum(a1), r2 = hsum(a2), r3 = hsum(a3);
                for (; i < n; ++i)
                {
                    r0 += x[i] * c0[i];
                    r1 += x[i] * c1[i];
                    r2 += x[i] * c2[i];
                    r3 += x[i] * c3[i];
                }
                out[l] = r0;
                out[l + 1] = r1;
                out[l + 2] = r2;
                out[l + 3] = r3;
            }
            for (; l < n_cols; ++l)
                out[l] = dot_avx2(x, cols + l * col_stride, n);
        }
    }

    const KernelTable &avx2_kernels()
    {
        static const KernelTable table{Isa::avx2, "avx2", abs2_avx2, dot_avx2,
                                       axpy_avx2, sum_avx2, multi_dot_avx2};
        return table;
    }
}
