#pragma once

#include <string_view>
#include <vector>

#include "ladder/lattice.hpp"
#include "ladder/params.hpp"
#include "ladder/scattering.hpp"

namespace ladder {

/// Sign choice in the blockade condition. Upper pairs with e^{-ik_R} = +sqrt(xi+1)
/// (evanescent R mode), Lower with -sqrt(xi+1) (staggered R mode).
enum class BlockadeBranch { Upper, Lower };

constexpr std::string_view branch_name(BlockadeBranch b) noexcept {
    return b == BlockadeBranch::Upper ? "upper" : "lower";
}

struct BlockadeSolution {
    double eps = 0.0;
    BlockadeBranch branch = BlockadeBranch::Upper;
    Mode mode_r;
    double k_l = 0.0;
    /// The full parameter set at the blockade point; phi is always pi.
    LadderParams params;
};

/// Detuning that blocks an L-channel wave at k_l (t_LL = 0, |r_LL| = 1).
/// Blockade requires phi = pi; the returned params carry it. The solution is
/// verified with `scatter`; throws BandEdge for xi = 0, where the R mode would
/// sit on its band edge.
BlockadeSolution blockade_epsilon(double k_l, double xi, double j_left, double j_right,
                                  BlockadeBranch branch);

/// Blockade detuning from the closed formula alone, without verification.
double blockade_detuning(double k_l, double xi, double j_left, double j_right,
                         BlockadeBranch branch) noexcept;

struct TransparencySolution {
    std::vector<double> k_l_points;
    double gamma = 0.0;
    double eps = 0.0;
};

/// Incident wavevectors with r_LL = 0 and |t_LL| = 1 for a given gamma and
/// detuning. Throws GammaSingular when |gamma| < 1e-12.
///
/// With c = cos k_L the condition reduces to
///     (J_L - J_R / gamma) c^2 - eps c - J_R gamma / 4 = 0,
/// of which only roots with |c| < 1 and |2c / gamma| < 1 (a localized R mode)
/// survive. A double root is reported once.
TransparencySolution transparency_points(double gamma, double eps, double j_left, double j_right);

/// A concrete (xi, phi) pair realizing gamma, for evaluating amplitudes at a
/// transparency point: phi = 0 and xi = gamma + 2.
LadderParams transparency_representative(double gamma, double eps, double j_left, double j_right);

/// Two-transparency-point region for J_L = J_R = 1:
/// -2 < gamma < 0 and sqrt(1 - gamma) < |eps| <= 1 - gamma / 2.
bool two_transparency_criterion(double gamma, double eps) noexcept;

struct RoutingPoint {
    double phi = 0.0;
    double xi = 0.0;
    double k_coupling = 0.0;
    double eps = 0.0;
    double k_l = 0.0;
    double k_r = 0.0;
    LadderParams params;
};

/// Perfect-routing parameters for a flux in the open interval (-pi/2, pi/2):
/// xi = 2 cos phi, eps = J_R sin phi, k_L = pi/2, k_R = phi + pi/2. The point
/// is verified with `scatter`. Throws RoutingDomain outside the interval.
RoutingPoint routing_params(double phi, double j_left, double j_right);

}  // namespace ladder
