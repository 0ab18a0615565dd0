#include "ladder/oracle.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <sstream>

#include "ladder/errors.hpp"

namespace ladder {
namespace {

// e^{ik l} for a unimodular phase, evaluated from the angle to avoid
// accumulating error in repeated powers.
cplx unit_power(cplx z, int l) { return std::polar(1.0, std::arg(z) * l); }

Mode mode_from_phase(cplx z, double hop) {
    const double modulus = std::abs(z);
    if (std::abs(modulus - 1.0) < 1e-12) {
        return Mode::propagating(std::arg(z), hop);
    }
    const double kappa = -std::log(modulus);
    return z.real() > 0.0 ? Mode::evanescent(kappa) : Mode::staggered(kappa);
}

}  // namespace

cplx outgoing_phase(double onsite, double hop, double energy, double edge_tol) {
    const double b = onsite - energy;  // z + 1/z = b / J
    if (std::abs(std::abs(b) - 2.0 * hop) < edge_tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "energy " << energy << " is at a band edge (onsite " << onsite << ", hopping " << hop
            << ")";
        throw Error(ErrorKind::BandEdge, msg.str());
    }
    const cplx disc = std::sqrt(cplx(b * b - 4.0 * hop * hop, 0.0));
    const cplx z1 = (b + disc) / (2.0 * hop);
    const cplx z2 = (b - disc) / (2.0 * hop);
    if (std::abs(b) < 2.0 * hop) {
        return z1.imag() > 0.0 ? z1 : z2;
    }
    // Real roots with z1 z2 = 1; the smaller one decays. Use the product for
    // the small root to avoid cancellation.
    const cplx big = std::abs(z1) > std::abs(z2) ? z1 : z2;
    return 1.0 / big;
}

OpenLattice OpenLattice::build(const LadderParams& p, double k_l, int n_rungs) {
    validate(p);
    if (n_rungs < 8 || n_rungs % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument, "oracle lattice size must be even and >= 8");
    }
    if (!(k_l > 0.0 && k_l < pi)) {
        throw Error(ErrorKind::InvalidArgument, "k_L must lie strictly inside (0, pi)");
    }
    OpenLattice lat;
    lat.n_rungs = n_rungs;
    lat.params = p;
    lat.k_l = k_l;
    lat.energy = p.eps - 2.0 * p.j_left * std::cos(k_l);
    // Leg L is driven at its own wavevector; only the edge check is shared.
    (void)outgoing_phase(p.eps, p.j_left, lat.energy);
    lat.boundary_phase_l = std::polar(1.0, k_l);
    lat.boundary_phase_r_right = outgoing_phase(-p.eps, p.j_right, lat.energy);
    lat.boundary_phase_r_left = lat.boundary_phase_r_right;
    return lat;
}

Eigen::SparseMatrix<cplx> OpenLattice::system_matrix() const {
    using Triplet = Eigen::Triplet<cplx>;
    const Eigen::Index n = 2 * static_cast<Eigen::Index>(sites_per_leg());
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n) * 3 + 8);

    const double jl = params.j_left;
    const double jr = params.j_right;
    const double kc = params.k_coupling;
    const cplx flux = std::polar(1.0, params.phi);

    for (int l = first_site(); l <= last_site(); ++l) {
        const auto il = index(l, Channel::L);
        const auto ir = index(l, Channel::R);
        entries.emplace_back(il, il, energy - params.eps);
        entries.emplace_back(ir, ir, energy + params.eps);
        if (l < last_site()) {
            // E - H with H carrying -J on the bonds
            entries.emplace_back(il, index(l + 1, Channel::L), jl);
            entries.emplace_back(index(l + 1, Channel::L), il, jl);
            entries.emplace_back(ir, index(l + 1, Channel::R), jr);
            entries.emplace_back(index(l + 1, Channel::R), ir, jr);
        }
    }
    // Rungs: H(0L,0R) = -K, H(1L,1R) = -K e^{-i phi}, and their conjugates.
    entries.emplace_back(index(0, Channel::L), index(0, Channel::R), kc);
    entries.emplace_back(index(0, Channel::R), index(0, Channel::L), kc);
    entries.emplace_back(index(1, Channel::L), index(1, Channel::R), kc * std::conj(flux));
    entries.emplace_back(index(1, Channel::R), index(1, Channel::L), kc * flux);

    // Outgoing self-energies Sigma = -J z at the four chain ends.
    entries.emplace_back(index(first_site(), Channel::L), index(first_site(), Channel::L),
                         jl * boundary_phase_l);
    entries.emplace_back(index(last_site(), Channel::L), index(last_site(), Channel::L),
                         jl * boundary_phase_l);
    entries.emplace_back(index(first_site(), Channel::R), index(first_site(), Channel::R),
                         jr * boundary_phase_r_left);
    entries.emplace_back(index(last_site(), Channel::R), index(last_site(), Channel::R),
                         jr * boundary_phase_r_right);

    Eigen::SparseMatrix<cplx> m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

Eigen::VectorXcd OpenLattice::source() const {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(2 * static_cast<Eigen::Index>(sites_per_leg()));
    // J (e^{ik} - e^{-ik}) e^{ik l_min}
    const cplx z = boundary_phase_l;
    s(index(first_site(), Channel::L)) =
        params.j_left * (z - std::conj(z)) * unit_power(z, first_site());
    return s;
}

Eigen::VectorXcd OpenLattice::solve() const {
    Eigen::SparseMatrix<cplx> m = system_matrix();
    m.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorKind::SolveSingular, "transparent-boundary system could not be factorized");
    }
    Eigen::VectorXcd u = lu.solve(source());
    if (lu.info() != Eigen::Success || !u.allFinite() || u.cwiseAbs().maxCoeff() > 1e10) {
        throw Error(ErrorKind::SolveSingular, "transparent-boundary system is numerically singular");
    }
    return u;
}

ScatteringResult oracle_scatter(const LadderParams& p, double k_l, int n_rungs) {
    const OpenLattice lat = OpenLattice::build(p, k_l, n_rungs);
    const Eigen::VectorXcd u = lat.solve();

    const int lo = lat.first_site();
    const int hi = lat.last_site();
    const cplx zl = lat.boundary_phase_l;
    const cplx zr = lat.boundary_phase_r_right;

    ScatteringResult r;
    // Leg L: e^{ikl} + r e^{-ikl} at the left end, t e^{ikl} at the right end.
    r.r_ll = (u(lat.index(lo, Channel::L)) - unit_power(zl, lo)) * unit_power(zl, lo);
    r.t_ll = u(lat.index(hi, Channel::L)) * unit_power(zl, -hi);

    r.mode_l = Mode::propagating(k_l, p.j_left);
    r.mode_r = mode_from_phase(zr, p.j_right);
    if (r.mode_r.is_propagating()) {
        r.r_rl = u(lat.index(lo, Channel::R)) * unit_power(zr, lo);
        r.t_rl = u(lat.index(hi, Channel::R)) * unit_power(zr, -hi);
    } else {
        // The localized profile has vanished by the chain ends; read its
        // amplitudes at the rungs, where the exterior solution still holds.
        r.r_rl = u(lat.index(0, Channel::R));
        r.t_rl = u(lat.index(1, Channel::R)) / zr;
    }
    r.denominator = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    return r;
}

}  // namespace ladder
