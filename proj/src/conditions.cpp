#include "ladder/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ladder/errors.hpp"

namespace ladder {
namespace {

void require_hoppings(double j_left, double j_right) {
    if (!(j_left > 0.0) || !(j_right > 0.0) || !std::isfinite(j_left) || !std::isfinite(j_right)) {
        throw Error(ErrorKind::InvalidArgument, "intraleg hoppings must be strictly positive");
    }
}

// Rejection margin for roots touching |cos k_L| = 1 and for coincident roots.
constexpr double root_tol = 1e-12;

}  // namespace

double blockade_detuning(double k_l, double xi, double j_left, double j_right,
                         BlockadeBranch branch) noexcept {
    const double s = std::sqrt(xi + 1.0);
    const double shift = 0.5 * j_right * (s + 1.0 / s);
    const double sign = branch == BlockadeBranch::Upper ? 1.0 : -1.0;
    return j_left * std::cos(k_l) - sign * shift;
}

BlockadeSolution blockade_epsilon(double k_l, double xi, double j_left, double j_right,
                                  BlockadeBranch branch) {
    require_hoppings(j_left, j_right);
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw Error(ErrorKind::InvalidArgument, "xi must be non-negative");
    }
    if (!(k_l > 0.0 && k_l < pi)) {
        throw Error(ErrorKind::InvalidArgument, "k_L must lie strictly inside (0, pi)");
    }

    BlockadeSolution sol;
    sol.k_l = k_l;
    sol.branch = branch;
    sol.eps = blockade_detuning(k_l, xi, j_left, j_right, branch);
    sol.params = LadderParams{sol.eps, j_left, j_right, coupling_for_xi(xi, j_left, j_right), pi};

    // e^{ik_R} = +-1/sqrt(xi + 1), so kappa = ln(xi + 1) / 2 on both branches.
    const double kappa = 0.5 * std::log1p(xi);
    if (!(kappa > 0.0)) {
        throw Error(ErrorKind::BandEdge, "xi = 0 puts the blockade R mode on its band edge");
    }
    sol.mode_r = branch == BlockadeBranch::Upper ? Mode::evanescent(kappa) : Mode::staggered(kappa);

    const ScatteringResult r = scatter(sol.params, k_l);
    if (r.mode_r.regime != sol.mode_r.regime ||
        std::abs(r.mode_r.kappa - kappa) > 1e-10 * std::max(1.0, kappa) ||
        std::abs(r.t_ll) >= 1e-10) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "blockade verification failed at k_L = " << k_l << ", xi = " << xi
            << " (|t_LL| = " << std::abs(r.t_ll) << ")";
        throw Error(ErrorKind::FormulaMismatch, msg.str());
    }
    return sol;
}

TransparencySolution transparency_points(double gamma, double eps, double j_left, double j_right) {
    require_hoppings(j_left, j_right);
    if (std::abs(gamma) < 1e-12) {
        throw Error(ErrorKind::GammaSingular, "gamma = 0 makes the transparency condition singular");
    }
    if (!std::isfinite(gamma) || !std::isfinite(eps)) {
        throw Error(ErrorKind::InvalidArgument, "gamma and eps must be finite");
    }

    TransparencySolution sol;
    sol.gamma = gamma;
    sol.eps = eps;

    const double qa = j_left - j_right / gamma;
    const double qb = -eps;
    const double qc = -0.25 * j_right * gamma;

    std::vector<double> roots;
    if (std::abs(qa) <= 1e-14 * std::max(j_left, j_right / std::abs(gamma))) {
        if (eps != 0.0) {
            roots.push_back(-qc / qb);
        }
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
            if (q != 0.0) {
                roots.push_back(q / qa);
                roots.push_back(qc / q);
            } else {
                roots.push_back(0.0);  // qb = 0 and disc = 0 means qc = 0, excluded by gamma != 0
            }
        }
    }

    std::sort(roots.begin(), roots.end());
    if (roots.size() == 2 && std::abs(roots[1] - roots[0]) <= root_tol) {
        roots.pop_back();
    }
    for (const double c : roots) {
        const bool inside_band = std::abs(c) < 1.0 - root_tol;
        const bool localized = std::abs(2.0 * c / gamma) < 1.0;
        if (inside_band && localized && c != 0.0) {
            sol.k_l_points.push_back(std::acos(c));
        }
    }
    std::sort(sol.k_l_points.begin(), sol.k_l_points.end());
    return sol;
}

LadderParams transparency_representative(double gamma, double eps, double j_left, double j_right) {
    const double xi = gamma + 2.0;
    return LadderParams{eps, j_left, j_right, coupling_for_xi(std::max(xi, 0.0), j_left, j_right), 0.0};
}

bool two_transparency_criterion(double gamma, double eps) noexcept {
    const double detuning = std::abs(eps);
    return gamma > -2.0 && gamma < 0.0 && std::sqrt(1.0 - gamma) < detuning &&
           detuning <= 1.0 - 0.5 * gamma;
}

RoutingPoint routing_params(double phi, double j_left, double j_right) {
    require_hoppings(j_left, j_right);
    if (!(phi > -0.5 * pi && phi < 0.5 * pi)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "phi = " << phi << " is outside the open interval (-pi/2, pi/2)";
        throw Error(ErrorKind::RoutingDomain, msg.str());
    }

    RoutingPoint rp;
    rp.phi = phi;
    rp.xi = 2.0 * std::cos(phi);
    rp.k_coupling = coupling_for_xi(rp.xi, j_left, j_right);
    rp.eps = j_right * std::sin(phi);
    rp.k_l = 0.5 * pi;
    rp.k_r = phi + 0.5 * pi;
    rp.params = LadderParams{rp.eps, j_left, j_right, rp.k_coupling, phi};

    const ScatteringResult r = scatter(rp.params, rp.k_l);
    const FlowRates f = flows(rp.params, r);
    constexpr double tol = 1e-12;
    if (!r.mode_r.is_propagating() || std::abs(r.mode_r.k - rp.k_r) > tol ||
        std::abs(f.t_flow_ll) > tol || std::abs(f.r_flow_ll) > tol ||
        std::abs(f.t_flow_rl - 0.5) > tol || std::abs(f.r_flow_rl - 0.5) > tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "routing verification failed at phi = " << phi << " (flows " << f.t_flow_ll << ", "
            << f.r_flow_ll << ", " << f.t_flow_rl << ", " << f.r_flow_rl << ")";
        throw Error(ErrorKind::FormulaMismatch, msg.str());
    }
    return rp;
}

}  // namespace ladder
