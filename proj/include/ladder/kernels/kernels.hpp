#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; `active()` picks one at
// startup from the CPU features (override with LADDER_SIMD=scalar|avx2).
// Both variants perform the same floating-point operations in the same
// order, and the test suite checks them against each other.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ladder::kernels {

enum class Isa { Scalar, Avx2 };

constexpr std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

/// Structure-of-arrays batch for closed-form amplitude evaluation.
///
/// Inputs per point: e^{ik_L}, e^{ik_R} (complex; real and of modulus < 1 for
/// evanescent R modes), the flux phase e^{i phi}, xi, K/J_R and the transfer
/// weight J_R sin k_R / (J_L sin k_L), which is 0 for a closed R channel.
/// Outputs: the four amplitudes, the denominator D, raw rates and flows.
struct AmplitudeBatch {
    std::vector<double> zl_re, zl_im, zr_re, zr_im, flux_re, flux_im, xi, coupling_ratio,
        transfer_weight;

    std::vector<double> t_ll_re, t_ll_im, r_ll_re, r_ll_im, t_rl_re, t_rl_im, r_rl_re, r_rl_im,
        d_re, d_im;
    std::vector<double> raw_t_ll, raw_r_ll, raw_t_rl, raw_r_rl;
    std::vector<double> flow_t_ll, flow_r_ll, flow_t_rl, flow_r_rl;

    void resize(std::size_t n);
    std::size_t size() const noexcept { return zl_re.size(); }
};

/// Evaluates points [begin, end) of the batch.
using AmplitudeKernel = void (*)(AmplitudeBatch& batch, std::size_t begin, std::size_t end);

/// One Crank-Nicolson right-hand side on an open chain with uniform onsite
/// energy and hopping: out = psi - i h (onsite psi_l - hop (psi_{l-1} + psi_{l+1})),
/// psi taken as zero beyond both ends.
using ChainRhsKernel = void (*)(std::span<const double> re, std::span<const double> im,
                                double onsite, double hop, double h, std::span<double> out_re,
                                std::span<double> out_im);

/// Sum of |psi|^2 over the given arrays.
using NormKernel = double (*)(std::span<const double> re, std::span<const double> im);

struct KernelTable {
    Isa isa;
    AmplitudeKernel amplitudes;
    ChainRhsKernel chain_rhs;
    NormKernel norm_sq;
};

namespace scalar {
void amplitudes(AmplitudeBatch& batch, std::size_t begin, std::size_t end);
void chain_rhs(std::span<const double> re, std::span<const double> im, double onsite, double hop,
               double h, std::span<double> out_re, std::span<double> out_im);
double norm_sq(std::span<const double> re, std::span<const double> im);
}  // namespace scalar

#if defined(LADDER_HAVE_AVX2)
namespace avx2 {
void amplitudes(AmplitudeBatch& batch, std::size_t begin, std::size_t end);
void chain_rhs(std::span<const double> re, std::span<const double> im, double onsite, double hop,
               double h, std::span<double> out_re, std::span<double> out_im);
double norm_sq(std::span<const double> re, std::span<const double> im);
}  // namespace avx2
#endif

/// True when the variant was compiled in and the CPU can run it.
bool supported(Isa isa) noexcept;

/// The table for a specific variant; throws InvalidArgument if unsupported.
const KernelTable& table(Isa isa);

/// The variant chosen for this process.
const KernelTable& active();

/// Forces a variant for the rest of the process (tests, benchmarking).
void select(Isa isa);

}  // namespace ladder::kernels
