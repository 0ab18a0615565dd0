#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ladder/lattice.hpp"
#include "ladder/sweep.hpp"

namespace ladder {

/// Energy against k (propagating) or kappa (evanescent, staggered) for both legs.
struct DispersionPanel {
    Regime regime = Regime::Propagating;
    SweepRange range;
    LadderParams params;
};

/// u_l = e^{ikl} of one mode over a range of sites.
struct EigenstatePanel {
    Mode mode;
    int first_site = 0;
    int last_site = 15;
};

/// Blockade detuning against k_L for several xi values, both branches.
struct BlockadePanel {
    std::vector<double> xi_values;
    SweepRange k_l;
    double j_left = 1.0;
    double j_right = 1.0;
};

/// Transparency wavevectors against the detuning for several gamma values.
struct TransparencyPanel {
    std::vector<double> gamma_values;
    SweepRange eps;
    double j_left = 1.0;
    double j_right = 1.0;
};

/// Perfect-routing parameters and verified flows against the flux.
struct RoutingPanel {
    SweepRange phi;
    double j_left = 1.0;
    double j_right = 1.0;
};

using PanelSpec =
    std::variant<SweepSpec, DispersionPanel, EigenstatePanel, BlockadePanel, TransparencyPanel, RoutingPanel>;

struct FigurePanel {
    std::string name;  // also the CSV file stem
    std::string description;
    PanelSpec spec;
};

/// "fig2", "fig4", "fig5", "fig6", "fig7", "fig8".
const std::vector<std::string>& figure_ids();

/// Parameter grids of one figure, one entry per emitted table. Throws UnknownFigure.
std::vector<FigurePanel> figure_preset(std::string_view id);

SweepTable run_panel(const FigurePanel& panel, unsigned threads = 0);

std::vector<SweepTable> figure_tables(std::string_view id, unsigned threads = 0);

/// Interval of k_L for which both the incident L wave and the matched R wave
/// propagate. Throws InvalidArgument when the bands do not overlap.
std::pair<double, double> open_channel_k_range(const LadderParams& p);

}  // namespace ladder
