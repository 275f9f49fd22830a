// Copyright 2026-present the coclust project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string_view>

#include "coclust/error.hpp"
#include "coclust/kernels.hpp"

namespace coclust::kernels {

namespace {

constexpr KernelTable kGeneric{Isa::scalar,
                               &generic::merge_gain,
                               &generic::pair_gain_update,
                               &generic::sum_log_factorial,
                               &generic::min_value,
                               &generic::first_at_most};

#ifdef COCLUST_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::avx2,
                            &avx2::merge_gain,
                            &avx2::pair_gain_update,
                            &avx2::sum_log_factorial,
                            &avx2::min_value,
                            &avx2::first_at_most};
#endif

const KernelTable& select() {
    const char* forced = std::getenv("COCLUST_SIMD");
    if (forced != nullptr) {
        std::string_view f(forced);
        if (f == "scalar") return kGeneric;
        if (f == "avx2" && supported(Isa::avx2)) return table(Isa::avx2);
    }
    if (supported(Isa::avx2)) return table(Isa::avx2);
    return kGeneric;
}

}  // namespace

bool supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#ifdef COCLUST_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
    }
    return false;
}

const char* name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

const KernelTable& table(Isa isa) {
    if (!supported(isa)) throw Error(std::string("kernel set not supported here: ") + name(isa));
#ifdef COCLUST_HAVE_AVX2_KERNELS
    if (isa == Isa::avx2) return kAvx2;
#endif
    return kGeneric;
}

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace coclust::kernels
