#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ladder/errors.hpp"
#include "ladder/lattice.hpp"
#include "ladder/params.hpp"

namespace ladder {

using cplx = std::complex<double>;

struct Amplitudes {
    cplx t_ll;
    cplx r_ll;
    cplx t_rl;
    cplx r_rl;
};

/// Scattering of a unit plane wave incident from the left in leg L.
///
/// The L leg carries e^{ik_L l} + r_LL e^{-ik_L l} for l <= 0 and
/// t_LL e^{ik_L l} for l >= 1; the R leg carries r_RL e^{-ik_R l} for l <= 0
/// and t_RL e^{ik_R l} for l >= 1. When the R mode is evanescent t_RL and
/// r_RL are the amplitudes of the localized profile around the rungs.
struct ScatteringResult {
    cplx t_ll;
    cplx r_ll;
    cplx t_rl;
    cplx r_rl;
    Mode mode_l;
    Mode mode_r;
    cplx denominator;

    Amplitudes amplitudes() const noexcept { return {t_ll, r_ll, t_rl, r_rl}; }
};

/// Flux-normalized flows plus the raw squared magnitudes. The transfer flows
/// are zero whenever the R channel is closed; the raw rates are always
/// reported and may exceed 1.
struct FlowRates {
    double t_flow_ll = 0.0;
    double r_flow_ll = 0.0;
    double t_flow_rl = 0.0;
    double r_flow_rl = 0.0;
    double t_raw_rl = 0.0;
    double r_raw_rl = 0.0;

    double sum() const noexcept { return t_flow_ll + r_flow_ll + t_flow_rl + r_flow_rl; }
};

struct ScatterOptions {
    double edge_tol = default_edge_tolerance;
    /// |D| below this is treated as a resonance pole.
    double singular_tol = 1e-12;
    /// Relative agreement required between the closed form and the direct solve.
    double cross_check_tol = 1e-10;
    bool cross_check = true;
};

/// Closed-form amplitudes, cross-checked against `solve_matching`.
///
/// Throws InvalidArgument for k_l outside (0, pi), BandEdge when either leg
/// sits on a band edge, ScatteringSingular when |D| is below the singular
/// tolerance and FormulaMismatch if the two evaluation routes disagree.
ScatteringResult scatter(const LadderParams& p, double k_l, const ScatterOptions& opts = {});

/// Amplitudes from the four rung equations (l = 0, 1 in both legs) solved as
/// a dense 4x4 system. Independent of the closed form.
Amplitudes solve_matching(const LadderParams& p, double k_l, const Mode& mode_r);

/// J_R sin k_R / (J_L sin k_L) for an open R channel, 0 for a closed one.
double transfer_weight(const LadderParams& p, const Mode& mode_l, const Mode& mode_r);

FlowRates flows(const LadderParams& p, const ScatteringResult& result);

/// One point of a batched evaluation: either a result or the reason it failed.
struct ScatterOutcome {
    std::optional<ScatteringResult> result;
    FlowRates flows;
    std::optional<ErrorKind> error;
    std::string detail;
};

struct ScatterPoint {
    LadderParams params;
    double k_l = 0.0;
};

/// Evaluates many points through the active data-parallel kernel, with the
/// same checks as `scatter`. Errors are captured per point, never thrown.
/// `threads` == 0 uses `default_thread_count()`. Output order equals input
/// order and does not depend on the thread count.
std::vector<ScatterOutcome> scatter_many(std::span<const ScatterPoint> points,
                                         const ScatterOptions& opts = {},
                                         unsigned threads = 0);

/// LADDER_THREADS if set to a positive integer, otherwise the hardware concurrency.
unsigned default_thread_count();

}  // namespace ladder
