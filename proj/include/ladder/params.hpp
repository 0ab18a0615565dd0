#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace ladder {

inline constexpr double pi = std::numbers::pi;

/// The two legs of the ladder.
enum class Channel { L, R };

constexpr std::string_view channel_name(Channel c) noexcept { return c == Channel::L ? "L" : "R"; }

/// Physical parameters of the two-rung flux ladder. Energies are in units of a
/// reference hopping; hbar and the lattice spacing are 1.
///
/// Leg L sits at onsite energy +eps and leg R at -eps. The rung at l = 0
/// carries hopping K, the rung at l = 1 carries K e^{i phi}.
struct LadderParams {
    double eps = 0.0;
    double j_left = 1.0;
    double j_right = 1.0;
    double k_coupling = 0.0;
    double phi = 0.0;

    /// Normalized squared interleg coupling K^2 / (J_L J_R).
    double xi() const noexcept { return k_coupling * k_coupling / (j_left * j_right); }

    /// Combined coupling/flux parameter xi - 2 cos(phi); always >= -2.
    double gamma() const noexcept { return xi() - 2.0 * std::cos(phi); }

    double onsite(Channel c) const noexcept { return c == Channel::L ? eps : -eps; }
    double hopping(Channel c) const noexcept { return c == Channel::L ? j_left : j_right; }

    bool operator==(const LadderParams&) const = default;
};

/// Throws InvalidArgument unless both hoppings are strictly positive, K >= 0
/// and every field is finite.
void validate(const LadderParams& p);

/// Interleg hopping K that realizes a given xi for the hoppings in `p`.
inline double coupling_for_xi(double xi, double j_left, double j_right) {
    return std::sqrt(xi * j_left * j_right);
}

}  // namespace ladder
