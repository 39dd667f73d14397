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

#ifndef BLOCKTENSOR_SIMD_VARIANTS_HPP
#define BLOCKTENSOR_SIMD_VARIANTS_HPP

#include "blocktensor/simd/kernels.hpp"

namespace blocktensor::simd::detail
{
#if defined(BT_HAVE_AVX2)
    const KernelTable &avx2_kernels();
#endif
#if defined(BT_HAVE_NEON)
    const KernelTable &neon_kernels();
#endif
}

#endif
