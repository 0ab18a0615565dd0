#pragma once

#include <complex>
#include <string_view>

#include "ladder/params.hpp"

namespace ladder {

enum class Regime { Propagating, Evanescent, StaggeredEvanescent };

constexpr std::string_view regime_name(Regime r) noexcept {
    switch (r) {
        case Regime::Propagating: return "propagating";
        case Regime::Evanescent: return "evanescent";
        case Regime::StaggeredEvanescent: return "staggered";
    }
    return "unknown";
}

/// Free solution e^{ikl} of one leg at a given energy.
///
/// Propagating modes carry a real k in (0, pi); left movers are written
/// explicitly as e^{-ikl} by the callers, never as negative k. Evanescent
/// modes have k = i kappa, staggered ones k = pi + i kappa, with kappa > 0 in
/// both cases so the profile decays away from the rungs.
struct Mode {
    Regime regime = Regime::Propagating;
    double k = 0.0;
    double kappa = 0.0;
    double group_velocity = 0.0;

    static Mode propagating(double k, double hopping);
    static Mode evanescent(double kappa);
    static Mode staggered(double kappa);

    bool is_propagating() const noexcept { return regime == Regime::Propagating; }

    /// The complex wavevector: k, i kappa or pi + i kappa.
    std::complex<double> wavevector() const noexcept;

    /// e^{ik}: a unit phase when propagating, +e^{-kappa} or -e^{-kappa} otherwise.
    std::complex<double> phase() const noexcept;
};

enum class BandOverlap { NoOverlap, PartialOverlap, MaximalOverlap };

constexpr std::string_view overlap_name(BandOverlap o) noexcept {
    switch (o) {
        case BandOverlap::NoOverlap: return "no-overlap";
        case BandOverlap::PartialOverlap: return "partial-overlap";
        case BandOverlap::MaximalOverlap: return "maximal-overlap";
    }
    return "unknown";
}

struct OverlapInfo {
    BandOverlap kind = BandOverlap::NoOverlap;
    // |eps| == J_L + J_R: the bands touch at a single energy.
    bool degenerate = false;
};

inline constexpr double default_edge_tolerance = 1e-9;

/// Energy of `mode` in `channel`.
double dispersion(const LadderParams& p, Channel channel, const Mode& mode);

/// Inverts the dispersion at energy E. Throws BandEdge within `edge_tol` of a
/// band edge, where the group velocity (or kappa) vanishes.
Mode solve_mode(const LadderParams& p, Channel channel, double energy,
                double edge_tol = default_edge_tolerance);

OverlapInfo band_overlap(const LadderParams& p);

/// Energy of an incident L-channel plane wave with wavevector k_l.
inline double incident_energy(const LadderParams& p, double k_l) {
    return p.onsite(Channel::L) - 2.0 * p.j_left * std::cos(k_l);
}

/// The R-channel mode at the energy of an L-channel wave with wavevector k_l.
Mode match_kR(const LadderParams& p, double k_l, double edge_tol = default_edge_tolerance);

}  // namespace ladder
