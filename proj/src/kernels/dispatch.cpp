#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ladder/errors.hpp"
#include "ladder/kernels/kernels.hpp"

namespace ladder::kernels {
namespace {

constexpr KernelTable scalar_table{Isa::Scalar, &scalar::amplitudes, &scalar::chain_rhs,
                                   &scalar::norm_sq};
#if defined(LADDER_HAVE_AVX2)
constexpr KernelTable avx2_table{Isa::Avx2, &avx2::amplitudes, &avx2::chain_rhs, &avx2::norm_sq};
#endif

bool cpu_has_avx2() noexcept {
#if defined(LADDER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* detect() {
    const char* forced = std::getenv("LADDER_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") {
        return &scalar_table;
    }
    if (supported(Isa::Avx2)) {
        return &table(Isa::Avx2);
    }
    return &scalar_table;
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> ptr{detect()};
    return ptr;
}

}  // namespace

bool supported(Isa isa) noexcept {
    if (isa == Isa::Scalar) {
        return true;
    }
    return cpu_has_avx2();
}

const KernelTable& table(Isa isa) {
    if (!supported(isa)) {
        throw Error(ErrorKind::InvalidArgument,
                    "kernel variant " + std::string(isa_name(isa)) + " is not available");
    }
#if defined(LADDER_HAVE_AVX2)
    if (isa == Isa::Avx2) {
        return avx2_table;
    }
#endif
    return scalar_table;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

}  // namespace ladder::kernels
