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

#include <cstdlib>
#include <string>

namespace blocktensor::simd
{
    namespace
    {
        bool cpu_has_avx2()
        {
#if defined(BT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        }

        const KernelTable &resolve()
        {
            if (const char *env = std::getenv("BLOCKTENSOR_SIMD"))
            {
                const std::string want(env);
                for (Isa isa : available_isas())
                    if (want == isa_name(isa))
                        return *kernels_for(isa);
                // Unknown or unavailable request: fall through to auto-detection.
            }
            const auto isas = available_isas();
            return *kernels_for(isas.back());
        }
    }

    std::string_view isa_name(Isa isa)
    {
        switch (isa)
        {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
        }
        return "unknown";
    }

    const KernelTable *kernels_for(Isa isa)
    {
        switch (isa)
        {
        case Isa::scalar:
            return &scalar_kernels();
        case Isa::avx2:
#if defined(BT_HAVE_AVX2)
            if (cpu_has_avx2())
                return &detail::avx2_kernels();
#endif
            return nullptr;
        case Isa::neon:
#if defined(BT_HAVE_NEON)
            return &detail::neon_kernels();
#else
            return nullptr;
#endif
        }
        return nullptr;
    }

    std::vector<Isa> available_isas()
    {
        std::vector<Isa> out{Isa::scalar};
        for (Isa isa : {Isa::avx2, Isa::neon})
            if (kernels_for(isa) != nullptr)
                out.push_back(isa);
        return out;
    }

    const KernelTable &active()
    {
        static const KernelTable &table = resolve();
        return table;
    }
}
