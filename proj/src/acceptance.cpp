#include "ladder/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "ladder/cli.hpp"
#include "ladder/conditions.hpp"
#include "ladder/errors.hpp"
#include "ladder/figures.hpp"
#include "ladder/io.hpp"
#include "ladder/oracle.hpp"
#include "ladder/scattering.hpp"
#include "ladder/sweep.hpp"

namespace ladder {
namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

LadderParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> eps(-3.0, 3.0), hop(0.5, 2.0), coupling(0.0, 3.0), flux(0.0, 2.0 * pi);
    return LadderParams{eps(rng), hop(rng), hop(rng), coupling(rng), flux(rng)};
}

double random_k(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.01, pi - 0.01)(rng); }

Outcome conservation() {
    std::mt19937_64 rng(20240101);
    constexpr std::size_t target = 10000;
    std::size_t accepted = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    while (accepted < target) {
        std::vector<ScatterPoint> batch(4096);
        for (ScatterPoint& pt : batch) {
            pt = {random_params(rng), random_k(rng)};
        }
        const auto outcomes = scatter_many(batch);
        for (const ScatterOutcome& o : outcomes) {
            if (!o.result || !o.result->mode_r.is_propagating() || accepted == target) continue;
            const double err = std::abs(o.flows.sum() - 1.0);
            worst = std::max(worst, err);
            failures += err > 1e-12 ? 1 : 0;
            ++accepted;
        }
    }
    return {failures == 0, std::to_string(accepted) + " propagating points, max |sum - 1| = " + sci(worst)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(7);
    constexpr int target = 1000;
    int compared = 0;
    int closed_channel = 0;
    int failures = 0;
    double worst = 0.0;
    while (compared < target) {
        const LadderParams p = random_params(rng);
        const double k = random_k(rng);
        ScatteringResult a;
        try {
            a = scatter(p, k);
        } catch (const Error&) {
            continue;  // band edge or pole: no closed-form value to compare
        }
        const ScatteringResult b = oracle_scatter(p, k, 16);
        const double d = std::max({std::abs(a.t_ll - b.t_ll), std::abs(a.r_ll - b.r_ll), std::abs(a.t_rl - b.t_rl),
                                   std::abs(a.r_rl - b.r_rl)});
        worst = std::max(worst, d);
        failures += d > 1e-10 ? 1 : 0;
        closed_channel += a.mode_r.is_propagating() ? 0 : 1;
        ++compared;
    }
    return {failures == 0 && closed_channel > 0,
            std::to_string(compared) + " points (" + std::to_string(closed_channel) +
                " with evanescent k_R), max amplitude difference = " + sci(worst)};
}

Outcome blockade() {
    const BlockadeSolution s = blockade_epsilon(0.25 * pi, 4.0, 1.0, 1.0, BlockadeBranch::Upper);
    const ScatteringResult r = scatter(s.params, s.k_l);
    const double t = std::abs(r.t_ll);
    const double rdev = std::abs(std::abs(r.r_ll) - 1.0);
    const bool four_digits = std::abs(s.eps - (-0.6345)) < 5e-5;
    char buf[160];
    std::snprintf(buf, sizeof buf, "eps = %.10f, |t_LL| = %s, ||r_LL| - 1| = %s", s.eps, sci(t).c_str(),
                  sci(rdev).c_str());
    return {t < 1e-12 && rdev < 1e-12 && four_digits, buf};
}

Outcome transfer_vanishing() {
    const LadderParams p{0.0, 1.0, 1.0, 2.0, pi};
    double worst = 0.0;
    int evaluated = 0;
    for (const double k : grid_values({0.0, pi, 512, GridKind::CellCentred})) {
        worst = std::max(worst, std::abs(scatter(p, k).t_rl));
        ++evaluated;
    }
    return {evaluated == 512 && worst < 1e-14, "512 k_L points, max |t_RL| = " + sci(worst)};
}

Outcome routing() {
    double worst_flow = 0.0;
    double worst_k = 0.0;
    constexpr int n = 100;
    const double lo = -0.5 * pi + 0.01;
    const double hi = 0.5 * pi - 0.01;
    for (int i = 0; i < n; ++i) {
        const double phi = lo + (hi - lo) * i / (n - 1);
        const LadderParams p{std::sin(phi), 1.0, 1.0, coupling_for_xi(2.0 * std::cos(phi), 1.0, 1.0), phi};
        const ScatteringResult r = scatter(p, 0.5 * pi);
        const FlowRates f = flows(p, r);
        worst_flow = std::max({worst_flow, std::abs(f.t_flow_ll), std::abs(f.r_flow_ll),
                               std::abs(f.t_flow_rl - 0.5), std::abs(f.r_flow_rl - 0.5)});
        const double k_r = r.mode_r.is_propagating() ? r.mode_r.k : std::nan("");
        worst_k = std::max(worst_k, std::isnan(k_r) ? 1.0 : std::abs(k_r - (phi + 0.5 * pi)));
    }
    return {worst_flow <= 1e-12 && worst_k <= 1e-12,
            "100 flux values, max flow deviation = " + sci(worst_flow) + ", max k_R error = " + sci(worst_k)};
}

Outcome transparency_region() {
    constexpr int n = 200;
    int mismatches = 0;
    int returned = 0;
    int bad_points = 0;
    double worst_r = 0.0;
    for (int i = 0; i < n; ++i) {
        // Interior nodes of (-2, 0) x (-2.5, 2.5), n per axis.
        const double gamma = -2.0 + 2.0 * (i + 1) / (n + 1);
        for (int j = 0; j < n; ++j) {
            const double eps = -2.5 + 5.0 * (j + 1) / (n + 1);
            const TransparencySolution s = transparency_points(gamma, eps, 1.0, 1.0);
            mismatches += (s.k_l_points.size() == 2) != two_transparency_criterion(gamma, eps) ? 1 : 0;
            const LadderParams p = transparency_representative(gamma, eps, 1.0, 1.0);
            for (const double k : s.k_l_points) {
                ++returned;
                try {
                    const double r = std::abs(scatter(p, k).r_ll);
                    worst_r = std::max(worst_r, r);
                    bad_points += r < 1e-10 ? 0 : 1;
                } catch (const Error&) {
                    ++bad_points;
                }
            }
        }
    }
    return {mismatches == 0 && bad_points == 0,
            "40000 grid nodes, " + std::to_string(mismatches) + " count mismatches, " + std::to_string(returned) +
                " points with max |r_LL| = " + sci(worst_r) + " (" + std::to_string(bad_points) + " failing)"};
}

Outcome raw_rate_excess() {
    int witnesses = 0;
    double largest = 0.0;
    double worst_sum = 0.0;
    for (const FigurePanel& panel : figure_preset("fig4")) {
        const auto& spec = std::get<SweepSpec>(panel.spec);
        if (std::abs(std::abs(spec.fixed.eps) - 0.7) > 1e-12 || !(spec.outputs & output::raw_rates)) continue;
        const SweepTable t = run_sweep(spec);
        const std::size_t c_raw = t.column("T_RL");
        const std::size_t c_sum = t.column("flow_sum");
        for (const auto& row : t.rows) {
            worst_sum = std::max(worst_sum, std::abs(row[c_sum] - 1.0));
            if (row[c_raw] > 1.0 && std::abs(row[c_sum] - 1.0) <= 1e-12) {
                ++witnesses;
                largest = std::max(largest, row[c_raw]);
            }
        }
    }
    return {witnesses > 0 && worst_sum <= 1e-12,
            std::to_string(witnesses) + " rows with T_RL > 1 (max " + sci(largest) +
                "), max |flow sum - 1| = " + sci(worst_sum)};
}

Outcome wavepacket() {
    const RoutingPoint rp = routing_params(0.0, 1.0, 1.0);
    const double target[] = {0.0, 0.0, 0.5, 0.5};
    std::vector<double> deviations;
    for (const double sigma : {0.1, 0.05, 0.025}) {
        const FlowRates e = wavepacket_transport(rp.params, 0.5 * pi, sigma);
        const double got[] = {e.t_flow_ll, e.r_flow_ll, e.t_flow_rl, e.r_flow_rl};
        double d = 0.0;
        for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(got[i] - target[i]));
        deviations.push_back(d);
    }
    const bool improving = deviations[1] < deviations[0] && deviations[2] < deviations[1];
    return {deviations[1] <= 0.02 && improving,
            "max deviation at sigma_k = 0.1, 0.05, 0.025: " + sci(deviations[0]) + ", " + sci(deviations[1]) +
                ", " + sci(deviations[2])};
}

Outcome figure_datasets(const std::filesystem::path& dir) {
    std::ostringstream problems;
    std::ostringstream sink;
    const std::pair<std::string, int> expected[] = {{"fig2", 6}, {"fig4", 10}, {"fig5", 2},
                                                    {"fig6", 3}, {"fig7", 1},  {"fig8", 6}};
    int files = 0;
    for (const auto& [id, count] : expected) {
        const std::vector<std::string> args{"figures", id, "--out-dir", dir.string()};
        if (cli::run(args, sink, sink) != 0) {
            problems << id << " failed; ";
            continue;
        }
        for (const FigurePanel& panel : figure_preset(id)) {
            const io::CsvFile f = io::read_csv(dir / (panel.name + ".csv"));
            ++files;
            const std::size_t reasons = f.column("skip_reason");
            for (const auto& row : f.rows) {
                if (row.size() != f.header.size() || !row[reasons].empty()) {
                    problems << panel.name << " has an incomplete row; ";
                    break;
                }
            }
            if (f.rows.empty()) problems << panel.name << " is empty; ";
        }
        if (static_cast<int>(figure_preset(id).size()) != count) problems << id << " panel count; ";
    }

    // Preset values: Fig. 4 detunings and Fig. 8 fluxes with K = sqrt(2 cos phi).
    std::vector<double> fig4_eps;
    for (const char panel : std::string("acegi")) {
        fig4_eps.push_back(io::parse_number(io::read_csv(dir / (std::string("fig4") + panel + ".csv")).meta("eps")));
    }
    if (fig4_eps != std::vector<double>{-2.02, -0.7, 0.0, 0.7, 2.02}) problems << "fig4 eps values; ";
    const double fig8_phi[] = {-0.25, 0.0, 0.25};
    int k = 0;
    for (const char panel : std::string("ace")) {
        const io::CsvFile f = io::read_csv(dir / (std::string("fig8") + panel + ".csv"));
        const double phi = io::parse_number(f.meta("phi"));
        const double kc = io::parse_number(f.meta("k_coupling"));
        const double eps = io::parse_number(f.meta("eps"));
        if (std::abs(phi / pi - fig8_phi[k]) > 1e-15 || std::abs(kc - std::sqrt(2.0 * std::cos(phi))) > 1e-15 ||
            std::abs(eps - std::sin(phi)) > 1e-15) {
            problems << "fig8" << panel << " parameters; ";
        }
        ++k;
    }
    const std::string issues = problems.str();
    return {issues.empty(), std::to_string(files) + " CSV files checked" + (issues.empty() ? "" : ": " + issues)};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::filesystem::path& scratch_dir) {
    struct Criterion {
        int id;
        const char* title;
        double budget;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {1, "Conservation", 1.0, conservation},
        {2, "Oracle equivalence", 5.0, oracle_equivalence},
        {3, "Blockade reproduction", 0.1, blockade},
        {4, "T_RL vanishing", 0.1, transfer_vanishing},
        {5, "Perfect routing", 0.1, routing},
        {6, "Two-transparency-point region", 10.0, transparency_region},
        {7, "Raw-rate excess", 0.1, raw_rate_excess},
        {8, "Wavepacket consistency", 60.0, wavepacket},
        {9, "Figure datasets", 5.0, [&] { return figure_datasets(scratch_dir); }},
    };
    std::vector<CriterionResult> results;
    for (const Criterion& c : criteria) {
        CriterionResult r;
        r.id = c.id;
        r.title = c.title;
        r.budget_seconds = c.budget;
        const auto start = std::chrono::steady_clock::now();
        try {
            const Outcome o = c.check();
            r.passed = o.passed;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("threw ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.seconds > r.budget_seconds) {
            r.passed = false;
            r.detail += "; over the time budget";
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result(const CriterionResult& r) {
    char timing[64];
    std::snprintf(timing, sizeof timing, " (%.3f s, budget %g s)", r.seconds, r.budget_seconds);
    return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.detail +
           timing;
}

}  // namespace ladder
