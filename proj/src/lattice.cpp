#include "ladder/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ladder/errors.hpp"

namespace ladder {

void validate(const LadderParams& p) {
    if (!std::isfinite(p.eps) || !std::isfinite(p.j_left) || !std::isfinite(p.j_right) ||
        !std::isfinite(p.k_coupling) || !std::isfinite(p.phi)) {
        throw Error(ErrorKind::InvalidArgument, "ladder parameters must be finite");
    }
    if (!(p.j_left > 0.0) || !(p.j_right > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "intraleg hoppings must be strictly positive");
    }
    if (p.k_coupling < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "interleg hopping must be non-negative");
    }
}

Mode Mode::propagating(double k, double hopping) {
    return Mode{Regime::Propagating, k, 0.0, 2.0 * hopping * std::sin(k)};
}

Mode Mode::evanescent(double kappa) { return Mode{Regime::Evanescent, 0.0, kappa, 0.0}; }

Mode Mode::staggered(double kappa) { return Mode{Regime::StaggeredEvanescent, 0.0, kappa, 0.0}; }

std::complex<double> Mode::wavevector() const noexcept {
    switch (regime) {
        case Regime::Propagating: return {k, 0.0};
        case Regime::Evanescent: return {0.0, kappa};
        case Regime::StaggeredEvanescent: return {pi, kappa};
    }
    return {};
}

std::complex<double> Mode::phase() const noexcept {
    switch (regime) {
        case Regime::Propagating: return {std::cos(k), std::sin(k)};
        case Regime::Evanescent: return {std::exp(-kappa), 0.0};
        case Regime::StaggeredEvanescent: return {-std::exp(-kappa), 0.0};
    }
    return {};
}

double dispersion(const LadderParams& p, Channel channel, const Mode& mode) {
    const double onsite = p.onsite(channel);
    const double hop = p.hopping(channel);
    switch (mode.regime) {
        case Regime::Propagating: return onsite - 2.0 * hop * std::cos(mode.k);
        case Regime::Evanescent: return onsite - 2.0 * hop * std::cosh(mode.kappa);
        case Regime::StaggeredEvanescent: return onsite + 2.0 * hop * std::cosh(mode.kappa);
    }
    return onsite;
}

Mode solve_mode(const LadderParams& p, Channel channel, double energy, double edge_tol) {
    const double onsite = p.onsite(channel);
    const double hop = p.hopping(channel);
    const double lower = onsite - 2.0 * hop;
    const double upper = onsite + 2.0 * hop;

    if (std::abs(energy - lower) < edge_tol || std::abs(energy - upper) < edge_tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "energy " << energy << " is at a band edge of channel " << channel_name(channel);
        throw Error(ErrorKind::BandEdge, msg.str());
    }

    // cos k = (onsite - E) / (2 J)
    const double c = (onsite - energy) / (2.0 * hop);
    if (energy > lower && energy < upper) {
        return Mode::propagating(std::acos(c), hop);
    }
    if (energy < lower) {
        return Mode::evanescent(std::acosh(c));
    }
    return Mode::staggered(std::acosh(-c));
}

OverlapInfo band_overlap(const LadderParams& p) {
    constexpr double tol = 1e-12;
    const double detuning = std::abs(p.eps);
    const double width = p.j_left + p.j_right;
    if (detuning <= tol) {
        return {BandOverlap::MaximalOverlap, false};
    }
    if (std::abs(detuning - width) <= tol * std::max(1.0, width)) {
        return {BandOverlap::NoOverlap, true};
    }
    if (detuning > width) {
        return {BandOverlap::NoOverlap, false};
    }
    return {BandOverlap::PartialOverlap, false};
}

Mode match_kR(const LadderParams& p, double k_l, double edge_tol) {
    return solve_mode(p, Channel::R, incident_energy(p, k_l), edge_tol);
}

}  // namespace ladder
