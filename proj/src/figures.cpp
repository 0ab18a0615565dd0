#include "ladder/figures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "ladder/conditions.hpp"
#include "ladder/errors.hpp"
#include "ladder/scattering.hpp"
#include "ladder/version.hpp"

namespace ladder {
namespace {

constexpr int default_points = 512;

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

SweepRange open_k_range(int n = default_points) { return {0.0, pi, n, GridKind::CellCentred}; }

std::vector<FigurePanel> fig2() {
    const LadderParams p{};  // eps = 0, J_L = J_R = 1
    const SweepRange kappa{0.0, 2.0, default_points, GridKind::Closed};
    return {
        {"fig2a", "staggered-evanescent energy against kappa",
         DispersionPanel{Regime::StaggeredEvanescent, kappa, p}},
        {"fig2b", "staggered-evanescent eigenstate at kappa = 0.4", EigenstatePanel{Mode::staggered(0.4), 0, 15}},
        {"fig2c", "propagating energy against k",
         DispersionPanel{Regime::Propagating, {-pi, pi, default_points, GridKind::Closed}, p}},
        {"fig2d", "propagating eigenstate at k = pi/4",
         EigenstatePanel{Mode::propagating(0.25 * pi, 1.0), 0, 15}},
        {"fig2e", "evanescent energy against kappa", DispersionPanel{Regime::Evanescent, kappa, p}},
        {"fig2f", "evanescent eigenstate at kappa = 0.4", EigenstatePanel{Mode::evanescent(0.4), 0, 15}},
    };
}

std::vector<FigurePanel> fig4() {
    const double eps_values[] = {-2.02, -0.7, 0.0, 0.7, 2.02};
    std::vector<FigurePanel> panels;
    char letter = 'a';
    for (const double eps : eps_values) {
        const LadderParams p{eps, 1.0, 1.0, 2.0, pi};
        SweepSpec ll{"", SweptVariable::KL, open_k_range(), p, 0.25 * pi,
                     output::amplitudes | output::raw_rates | output::flows | output::regime};
        SweepSpec rl{"", SweptVariable::KL, open_k_range(), p, 0.25 * pi,
                     output::raw_rates | output::flows | output::k_r | output::regime};
        ll.name = std::string("fig4") + letter++;
        rl.name = std::string("fig4") + letter++;
        panels.push_back({ll.name, "T_LL and R_LL against k_L at eps = " + label(eps), ll});
        panels.push_back({rl.name, "T_RL and R_RL against k_L at eps = " + label(eps), rl});
    }
    return panels;
}

std::vector<FigurePanel> fig5() {
    return {
        {"fig5a", "blockade k_L against eps", BlockadePanel{{0.5, 1.0, 2.0, 4.0}, open_k_range(), 1.0, 1.0}},
        {"fig5b", "transparency k_L against eps",
         TransparencyPanel{{-1.6, -1.0, 1.0, 2.0}, {-3.0, 3.0, default_points, GridKind::Closed}, 1.0, 1.0}},
    };
}

std::vector<FigurePanel> fig6() {
    const double k_l = 0.25 * pi;
    const double eps_blockade = blockade_detuning(k_l, 4.0, 1.0, 1.0, BlockadeBranch::Upper);
    SweepSpec a{"fig6a", SweptVariable::Eps, {-3.0, 3.0, default_points, GridKind::Closed},
                LadderParams{0.0, 1.0, 1.0, 2.0, pi}, k_l, output::all};
    SweepSpec b{"fig6b", SweptVariable::Xi, {0.0, 10.0, default_points, GridKind::Closed},
                LadderParams{-0.7, 1.0, 1.0, 0.0, pi}, k_l, output::all};
    SweepSpec c{"fig6c", SweptVariable::Phi, {0.0, 2.0 * pi, default_points, GridKind::Closed},
                LadderParams{eps_blockade, 1.0, 1.0, 2.0, 0.0}, k_l, output::all};
    return {
        {a.name, "transport against eps at phi = pi, K = 2, k_L = pi/4", a},
        {b.name, "transport against xi at phi = pi, eps = -0.7, k_L = pi/4", b},
        {c.name, "transport against phi at K = 2, blockade eps, k_L = pi/4", c},
    };
}

std::vector<FigurePanel> fig7() {
    return {{"fig7", "perfect-routing xi, eps and k_R against phi",
             RoutingPanel{{-0.5 * pi, 0.5 * pi, default_points, GridKind::CellCentred}, 1.0, 1.0}}};
}

std::vector<FigurePanel> fig8() {
    // 513 cell-centred points put k_L = pi/2 on the phi = 0 grid.
    constexpr int n = 513;
    const double phi_over_pi[] = {-0.25, 0.0, 0.25};
    std::vector<FigurePanel> panels;
    char letter = 'a';
    for (const double f : phi_over_pi) {
        const double phi = f * pi;
        const double xi = 2.0 * std::cos(phi);
        const LadderParams p{std::sin(phi), 1.0, 1.0, coupling_for_xi(xi, 1.0, 1.0), phi};
        const auto [lo, hi] = open_channel_k_range(p);
        const SweepRange range{lo, hi, n, GridKind::CellCentred};
        SweepSpec flows_spec{"", SweptVariable::KL, range, p, 0.5 * pi, output::flows | output::regime};
        SweepSpec kr_spec{"", SweptVariable::KL, range, p, 0.5 * pi, output::k_r | output::regime};
        flows_spec.name = std::string("fig8") + letter++;
        kr_spec.name = std::string("fig8") + letter++;
        panels.push_back({flows_spec.name, "routing flows against k_L at phi/pi = " + label(f), flows_spec});
        panels.push_back({kr_spec.name, "k_R against k_L at phi/pi = " + label(f), kr_spec});
    }
    return panels;
}

std::vector<std::pair<std::string, std::string>> base_metadata(const FigurePanel& panel) {
    return {{"artifact_version", std::string(version)}, {"name", panel.name}, {"description", panel.description}};
}

SweepTable run(const FigurePanel& panel, const DispersionPanel& d) {
    SweepTable t;
    t.name = panel.name;
    t.metadata = base_metadata(panel);
    for (auto& kv : params_metadata(d.params)) t.metadata.push_back(std::move(kv));
    t.metadata.emplace_back("regime", std::string(regime_name(d.regime)));
    const bool propagating = d.regime == Regime::Propagating;
    t.schema = {propagating ? "k" : "kappa", "energy_l", "energy_r"};
    const std::vector<double> grid = grid_values(d.range);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Mode m;
        m.regime = d.regime;
        (propagating ? m.k : m.kappa) = grid[i];
        t.rows.push_back({grid[i], dispersion(d.params, Channel::L, m), dispersion(d.params, Channel::R, m)});
        t.row_index.push_back(i);
    }
    return t;
}

SweepTable run(const FigurePanel& panel, const EigenstatePanel& e) {
    SweepTable t;
    t.name = panel.name;
    t.metadata = base_metadata(panel);
    t.metadata.emplace_back("regime", std::string(regime_name(e.mode.regime)));
    t.metadata.emplace_back("k", format_number(e.mode.k));
    t.metadata.emplace_back("kappa", format_number(e.mode.kappa));
    t.schema = {"l", "u_re", "u_im"};
    const cplx z = e.mode.phase();
    for (int l = e.first_site; l <= e.last_site; ++l) {
        const cplx u = std::pow(z, l);
        t.rows.push_back({static_cast<double>(l), u.real(), u.imag()});
        t.row_index.push_back(static_cast<std::size_t>(l - e.first_site));
    }
    return t;
}

SweepTable run(const FigurePanel& panel, const BlockadePanel& b) {
    SweepTable t;
    t.name = panel.name;
    t.metadata = base_metadata(panel);
    t.metadata.emplace_back("j_left", format_number(b.j_left));
    t.metadata.emplace_back("j_right", format_number(b.j_right));
    t.metadata.emplace_back("phi", format_number(pi));
    t.metadata.emplace_back("branch_codes", "1=upper -1=lower");
    t.schema = {"xi", "branch", "k_l", "eps"};
    const std::vector<double> grid = grid_values(b.k_l);
    std::size_t index = 0;
    for (const double xi : b.xi_values) {
        for (const BlockadeBranch br : {BlockadeBranch::Upper, BlockadeBranch::Lower}) {
            for (const double k : grid) {
                try {
                    const BlockadeSolution s = blockade_epsilon(k, xi, b.j_left, b.j_right, br);
                    t.rows.push_back({xi, br == BlockadeBranch::Upper ? 1.0 : -1.0, k, s.eps});
                    t.row_index.push_back(index);
                } catch (const Error& e) {
                    t.skips.push_back({index, k, e.kind(), e.message()});
                }
                ++index;
            }
        }
    }
    return t;
}

SweepTable run(const FigurePanel& panel, const TransparencyPanel& tp) {
    SweepTable t;
    t.name = panel.name;
    t.metadata = base_metadata(panel);
    t.metadata.emplace_back("j_left", format_number(tp.j_left));
    t.metadata.emplace_back("j_right", format_number(tp.j_right));
    t.metadata.emplace_back("representative", "phi = 0, xi = gamma + 2");
    t.schema = {"gamma", "eps", "k_l", "root", "abs_r_ll"};
    const std::vector<double> grid = grid_values(tp.eps);
    std::size_t index = 0;
    for (const double gamma : tp.gamma_values) {
        for (const double eps : grid) {
            const TransparencySolution sol = transparency_points(gamma, eps, tp.j_left, tp.j_right);
            const LadderParams p = transparency_representative(gamma, eps, tp.j_left, tp.j_right);
            for (std::size_t r = 0; r < sol.k_l_points.size(); ++r) {
                const double k = sol.k_l_points[r];
                try {
                    const ScatteringResult s = scatter(p, k);
                    t.rows.push_back({gamma, eps, k, static_cast<double>(r), std::abs(s.r_ll)});
                    t.row_index.push_back(index);
                } catch (const Error& e) {
                    t.skips.push_back({index, eps, e.kind(), e.message()});
                }
                ++index;
            }
        }
    }
    return t;
}

SweepTable run(const FigurePanel& panel, const RoutingPanel& rp) {
    SweepTable t;
    t.name = panel.name;
    t.metadata = base_metadata(panel);
    t.metadata.emplace_back("j_left", format_number(rp.j_left));
    t.metadata.emplace_back("j_right", format_number(rp.j_right));
    t.schema = {"phi",       "phi_over_pi", "xi",        "k_coupling", "eps",       "k_l",
                "k_r",       "flow_t_ll",   "flow_r_ll", "flow_t_rl",  "flow_r_rl"};
    const std::vector<double> grid = grid_values(rp.phi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const RoutingPoint r = routing_params(grid[i], rp.j_left, rp.j_right);
            const FlowRates f = flows(r.params, scatter(r.params, r.k_l));
            t.rows.push_back({r.phi, r.phi / pi, r.xi, r.k_coupling, r.eps, r.k_l, r.k_r, f.t_flow_ll,
                              f.r_flow_ll, f.t_flow_rl, f.r_flow_rl});
            t.row_index.push_back(i);
        } catch (const Error& e) {
            t.skips.push_back({i, grid[i], e.kind(), e.message()});
        }
    }
    return t;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig2", "fig4", "fig5", "fig6", "fig7", "fig8"};
    return ids;
}

std::vector<FigurePanel> figure_preset(std::string_view id) {
    if (id == "fig2") return fig2();
    if (id == "fig4") return fig4();
    if (id == "fig5") return fig5();
    if (id == "fig6") return fig6();
    if (id == "fig7") return fig7();
    if (id == "fig8") return fig8();
    throw Error(ErrorKind::UnknownFigure, "unknown figure '" + std::string(id) +
                                              "' (expected fig2, fig4, fig5, fig6, fig7 or fig8)");
}

SweepTable run_panel(const FigurePanel& panel, unsigned threads) {
    return std::visit(
        [&](const auto& spec) -> SweepTable {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SweepSpec>) {
                SweepTable t = run_sweep(spec, threads);
                t.metadata.insert(t.metadata.begin() + 2, {"description", panel.description});
                return t;
            } else {
                return run(panel, spec);
            }
        },
        panel.spec);
}

std::vector<SweepTable> figure_tables(std::string_view id, unsigned threads) {
    std::vector<SweepTable> tables;
    for (const FigurePanel& panel : figure_preset(id)) {
        tables.push_back(run_panel(panel, threads));
    }
    return tables;
}

std::pair<double, double> open_channel_k_range(const LadderParams& p) {
    validate(p);
    // Both legs propagate when cos k_L lies in (-1, 1) and in
    // ((eps - J_R) / J_L, (eps + J_R) / J_L).
    const double c_lo = std::max(-1.0, (p.eps - p.j_right) / p.j_left);
    const double c_hi = std::min(1.0, (p.eps + p.j_right) / p.j_left);
    if (!(c_lo < c_hi)) {
        throw Error(ErrorKind::InvalidArgument, "the L and R bands do not overlap");
    }
    return {std::acos(c_hi), std::acos(c_lo)};
}

}  // namespace ladder
