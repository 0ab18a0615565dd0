#include "ladder/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <vector>

#include "ladder/acceptance.hpp"
#include "ladder/conditions.hpp"
#include "ladder/errors.hpp"
#include "ladder/figures.hpp"
#include "ladder/io.hpp"
#include "ladder/oracle.hpp"
#include "ladder/scattering.hpp"
#include "ladder/sweep.hpp"
#include "ladder/version.hpp"

namespace ladder::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CLI::Validator angle_transform() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                s = format_number(io::parse_angle(s));
                return {};
            } catch (const Error& e) {
                return e.message();
            }
        },
        "ANGLE", "angle");
}

struct ParamOptions {
    double eps = 0.0;
    double jl = 1.0;
    double jr = 1.0;
    double kc = 0.0;
    double xi = 0.0;
    double phi = 0.0;
    CLI::Option* kc_opt = nullptr;
    CLI::Option* xi_opt = nullptr;

    LadderParams build() const {
        LadderParams p{eps, jl, jr, kc, phi};
        if (xi_opt != nullptr && xi_opt->count() > 0) {
            if (!(xi >= 0.0)) {
                throw UsageError("--xi: must be non-negative");
            }
            p.k_coupling = coupling_for_xi(xi, jl, jr);
        }
        return p;
    }
};

void add_hoppings(CLI::App* app, ParamOptions& p) {
    app->add_option("--jl,--j_left", p.jl, "intraleg hopping of leg L")->capture_default_str();
    app->add_option("--jr,--j_right", p.jr, "intraleg hopping of leg R")->capture_default_str();
}

void add_params(CLI::App* app, ParamOptions& p) {
    app->add_option("--eps", p.eps, "onsite detuning (leg L at +eps, leg R at -eps)")->capture_default_str();
    add_hoppings(app, p);
    p.kc_opt = app->add_option("--kc,--k_coupling", p.kc, "interleg hopping K")->capture_default_str();
    p.xi_opt = app->add_option("--xi", p.xi, "normalized squared coupling; sets K = sqrt(xi J_L J_R)");
    p.kc_opt->excludes(p.xi_opt);
    app->add_option("--phi", p.phi, "flux in radians, or a multiple of pi such as 0.5pi")
        ->transform(angle_transform())
        ->capture_default_str();
}

struct Leaf {
    CLI::App* app = nullptr;
    std::shared_ptr<std::string> config;
    std::vector<std::string> required;
    std::function<int()> action;
};

Leaf& add_leaf(std::vector<std::unique_ptr<Leaf>>& leaves, CLI::App* app) {
    auto leaf = std::make_unique<Leaf>();
    leaf->app = app;
    leaf->config = std::make_shared<std::string>();
    app->add_option("--config", *leaf->config, "key = value or JSON file; flags override its entries");
    leaves.push_back(std::move(leaf));
    return *leaves.back();
}

// Mutually exclusive option pairs: a config entry for one is dropped when the
// other was given on the command line.
bool excluded_by_flag(const CLI::App* app, const std::string& key) {
    static const std::pair<const char*, const char*> pairs[] = {{"kc", "xi"}, {"k_coupling", "xi"}};
    for (const auto& [a, b] : pairs) {
        const char* other = key == a ? b : key == b ? a : nullptr;
        if (other == nullptr) continue;
        const CLI::Option* o = app->get_option_no_throw(std::string("--") + other);
        if (o != nullptr && o->count() > 0) return true;
    }
    return false;
}

void apply_config(const Leaf& leaf) {
    if (leaf.config->empty()) return;
    const io::ConfigFile cfg = io::load_config(*leaf.config);
    for (const auto& [key, value] : cfg.entries) {
        CLI::Option* opt = leaf.app->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            if (cfg.from_json) continue;  // records carry fields that are not inputs
            throw UsageError("--config: unknown key '" + key + "' for command " + leaf.app->get_name());
        }
        if (opt->count() > 0 || excluded_by_flag(leaf.app, key)) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("--config: " + key + ": " + e.what());
        }
    }
}

void check_required(const Leaf& leaf) {
    for (const std::string& name : leaf.required) {
        const CLI::Option* opt = leaf.app->get_option(name);
        if (opt->count() == 0) {
            throw UsageError(name + " is required (on the command line or in --config)");
        }
    }
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        io::write_file(path, text);
    }
}

io::json amplitudes_json(const ScatteringResult& r) {
    return io::json{{"t_ll", io::complex(r.t_ll)},
                    {"r_ll", io::complex(r.r_ll)},
                    {"t_rl", io::complex(r.t_rl)},
                    {"r_rl", io::complex(r.r_rl)}};
}

double max_amplitude_difference(const ScatteringResult& a, const ScatteringResult& b) {
    return std::max({std::abs(a.t_ll - b.t_ll), std::abs(a.r_ll - b.r_ll), std::abs(a.t_rl - b.t_rl),
                     std::abs(a.r_rl - b.r_rl)});
}

void log_skips(std::ostream& err, const SweepTable& t) {
    for (const SkipRecord& s : t.skips) {
        err << t.name << ": skipped " << format_number(s.value) << " (" << error_name(s.reason) << ": "
            << s.detail << ")\n";
    }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scattering, switching and routing on a two-rung flux ladder", "ladder"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));
    std::vector<std::unique_ptr<Leaf>> leaves;

    // scatter
    ParamOptions sp;
    double scatter_kl = 0.0;
    std::string scatter_format = "json";
    std::string scatter_output;
    {
        CLI::App* sub = app.add_subcommand("scatter", "amplitudes and flows at one point, as JSON");
        add_params(sub, sp);
        sub->add_option("--kl,--k_l", scatter_kl, "incident wavevector in (0, pi)")->transform(angle_transform());
        sub->add_option("--format", scatter_format, "output format")->check(CLI::IsMember({"json"}));
        sub->add_option("--output,-o", scatter_output, "write to a file instead of stdout");
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"--kl"};
        leaf.action = [&] {
            const LadderParams p = sp.build();
            const ScatteringResult r = scatter(p, scatter_kl);
            emit(out, scatter_output, io::dump(io::scatter_record(p, scatter_kl, r, flows(p, r))) + "\n");
            return exit_ok;
        };
    }

    // conditions
    CLI::App* cond = app.add_subcommand("conditions", "blockade, transparency and routing solvers");
    cond->require_subcommand(1);

    ParamOptions bp;
    double block_kl = 0.0;
    double block_xi = 0.0;
    std::string block_branch = "upper";
    {
        CLI::App* sub = cond->add_subcommand("blockade", "detuning that blocks the incident wave (phi = pi)");
        sub->add_option("--kl,--k_l", block_kl, "incident wavevector")->transform(angle_transform());
        sub->add_option("--xi", block_xi, "normalized squared coupling");
        add_hoppings(sub, bp);
        sub->add_option("--branch", block_branch, "upper or lower sign")
            ->check(CLI::IsMember({"upper", "lower"}))
            ->capture_default_str();
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"--kl", "--xi"};
        leaf.action = [&] {
            const BlockadeBranch br = block_branch == "upper" ? BlockadeBranch::Upper : BlockadeBranch::Lower;
            const BlockadeSolution s = blockade_epsilon(block_kl, block_xi, bp.jl, bp.jr, br);
            out << io::dump(io::blockade(s, scatter(s.params, s.k_l))) << "\n";
            return exit_ok;
        };
    }

    ParamOptions tp;
    double trans_gamma = 0.0;
    double trans_eps = 0.0;
    {
        CLI::App* sub = cond->add_subcommand("transparency", "incident wavevectors with r_LL = 0");
        sub->add_option("--gamma", trans_gamma, "xi - 2 cos(phi)");
        sub->add_option("--eps", trans_eps, "onsite detuning");
        add_hoppings(sub, tp);
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"--gamma", "--eps"};
        leaf.action = [&] {
            const TransparencySolution s = transparency_points(trans_gamma, trans_eps, tp.jl, tp.jr);
            const LadderParams rep = transparency_representative(trans_gamma, trans_eps, tp.jl, tp.jr);
            io::json points = io::json::array();
            for (const double k : s.k_l_points) {
                const ScatteringResult r = scatter(rep, k);
                points.push_back(io::json{{"k_l", io::number(k)},
                                          {"abs_r_ll", io::number(std::abs(r.r_ll))},
                                          {"abs_t_ll", io::number(std::abs(r.t_ll))}});
            }
            io::json j{{"gamma", io::number(s.gamma)},
                       {"eps", io::number(s.eps)},
                       {"count", s.k_l_points.size()},
                       {"points", points},
                       {"representative", io::params(rep)}};
            if (tp.jl == 1.0 && tp.jr == 1.0) {
                j["two_point_criterion"] = two_transparency_criterion(trans_gamma, trans_eps);
            }
            out << io::dump(j) << "\n";
            return exit_ok;
        };
    }

    ParamOptions rp;
    double route_phi = 0.0;
    {
        CLI::App* sub = cond->add_subcommand("routing", "perfect-routing parameters for a flux in (-pi/2, pi/2)");
        sub->add_option("--phi", route_phi, "flux")->transform(angle_transform());
        add_hoppings(sub, rp);
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"--phi"};
        leaf.action = [&] {
            const RoutingPoint r = routing_params(route_phi, rp.jl, rp.jr);
            out << io::dump(io::routing(r, flows(r.params, scatter(r.params, r.k_l)))) << "\n";
            return exit_ok;
        };
    }

    // oracle
    ParamOptions op;
    double oracle_kl = 0.0;
    int oracle_rungs = 16;
    bool oracle_packet = false;
    double oracle_sigma = 0.05;
    {
        CLI::App* sub = app.add_subcommand("oracle", "closed form against the numerical oracles");
        add_params(sub, op);
        sub->add_option("--kl,--k_l", oracle_kl, "incident wavevector")->transform(angle_transform());
        sub->add_option("--n-rungs,--n_rungs", oracle_rungs, "transparent-boundary lattice size (even, >= 8)")
            ->capture_default_str();
        sub->add_flag("--wavepacket", oracle_packet, "also propagate a Gaussian packet centred at k_L");
        sub->add_option("--sigma-k,--sigma_k", oracle_sigma, "packet momentum spread")->capture_default_str();
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"--kl"};
        leaf.action = [&] {
            const LadderParams p = op.build();
            const ScatteringResult closed = scatter(p, oracle_kl);
            const FlowRates f = flows(p, closed);
            const ScatteringResult tb = oracle_scatter(p, oracle_kl, oracle_rungs);
            io::json j{{"params", io::params(p)},
                       {"k_l", io::number(oracle_kl)},
                       {"closed_form", amplitudes_json(closed)},
                       {"transparent_boundary", amplitudes_json(tb)},
                       {"n_rungs", oracle_rungs},
                       {"max_abs_difference", io::number(max_amplitude_difference(closed, tb))},
                       {"flows", io::flow_rates(f)}};
            if (oracle_packet) {
                const WavepacketConfig cfg = auto_wavepacket_config(p, oracle_kl, oracle_sigma);
                const WavepacketReport rep = run_wavepacket(p, cfg);
                const FlowRates& e = rep.estimates;
                const double dev = std::max({std::abs(e.t_flow_ll - f.t_flow_ll), std::abs(e.r_flow_ll - f.r_flow_ll),
                                             std::abs(e.t_flow_rl - f.t_flow_rl), std::abs(e.r_flow_rl - f.r_flow_rl)});
                j["wavepacket"] = io::json{{"sigma_k", io::number(oracle_sigma)},
                                           {"n_rungs", cfg.n_rungs},
                                           {"t_final", io::number(cfg.t_final)},
                                           {"dt", io::number(cfg.dt)},
                                           {"estimates", io::flow_rates(e)},
                                           {"max_flow_deviation", io::number(dev)},
                                           {"norm_drift", io::number(rep.final_norm - rep.initial_norm)}};
            }
            out << io::dump(j) << "\n";
            return exit_ok;
        };
    }

    // sweep
    ParamOptions wp;
    std::string sweep_swept;
    std::string sweep_start_text;
    std::string sweep_stop_text;
    int sweep_points = 512;
    std::string sweep_grid = "closed";
    double sweep_kl = 0.25 * pi;
    std::string sweep_outputs = "all";
    std::string sweep_format = "csv";
    std::string sweep_output;
    std::string sweep_name = "sweep";
    unsigned sweep_threads = 0;
    {
        CLI::App* sub = app.add_subcommand("sweep", "evaluate a one-parameter grid and emit a table");
        add_params(sub, wp);
        sub->add_option("--swept", sweep_swept, "swept variable")->check(CLI::IsMember({"k_l", "eps", "xi", "phi"}));
        sub->add_option("--start", sweep_start_text, "range start (angles accept the pi suffix)");
        sub->add_option("--stop", sweep_stop_text, "range stop");
        sub->add_option("--points", sweep_points, "number of grid points (>= 2)")->capture_default_str();
        sub->add_option("--grid", sweep_grid, "closed (endpoints included) or cell (midpoints)")
            ->check(CLI::IsMember({"closed", "cell"}))
            ->capture_default_str();
        sub->add_option("--kl,--k_l", sweep_kl, "fixed incident wavevector when k_l is not swept")
            ->transform(angle_transform());
        sub->add_option("--outputs", sweep_outputs, "comma list of amplitudes,raw_rates,flows,k_R,regime or all")
            ->capture_default_str();
        sub->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", sweep_output, "write to a file instead of stdout");
        sub->add_option("--name", sweep_name, "table name recorded in the metadata");
        sub->add_option("--threads", sweep_threads, "worker count (0 = LADDER_THREADS or hardware)");
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"--swept", "--start", "--stop"};
        leaf.action = [&] {
            SweepSpec spec;
            spec.name = sweep_name;
            spec.swept = *parse_swept(sweep_swept);
            const bool angular = spec.swept == SweptVariable::KL || spec.swept == SweptVariable::Phi;
            auto bound = [&](const std::string& text, const char* flag) {
                try {
                    return angular ? io::parse_angle(text) : io::parse_number(text);
                } catch (const Error& e) {
                    throw UsageError(std::string(flag) + ": " + e.message());
                }
            };
            spec.range = {bound(sweep_start_text, "--start"), bound(sweep_stop_text, "--stop"), sweep_points,
                          sweep_grid == "closed" ? GridKind::Closed : GridKind::CellCentred};
            spec.fixed = wp.build();
            spec.k_l = sweep_kl;
            spec.outputs = parse_outputs(sweep_outputs);
            const SweepTable t = run_sweep(spec, sweep_threads);
            log_skips(err, t);
            emit(out, sweep_output, sweep_format == "csv" ? io::to_csv(t) : io::dump(io::table(t)) + "\n");
            return exit_ok;
        };
    }

    // figures
    std::string figure_id;
    std::string figure_dir = "figures";
    unsigned figure_threads = 0;
    {
        CLI::App* sub = app.add_subcommand("figures", "regenerate figure datasets, one CSV per panel");
        std::vector<std::string> ids = figure_ids();
        ids.emplace_back("all");
        sub->add_option("id", figure_id, "figure id")->check(CLI::IsMember(ids));
        sub->add_option("--out-dir,--out_dir", figure_dir, "output directory")->capture_default_str();
        sub->add_option("--threads", figure_threads, "worker count (0 = LADDER_THREADS or hardware)");
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.required = {"id"};
        leaf.action = [&] {
            std::vector<std::string> ids_to_run;
            if (figure_id == "all") {
                ids_to_run = figure_ids();
            } else {
                ids_to_run = {figure_id};
            }
            for (const std::string& id : ids_to_run) {
                for (const SweepTable& t : figure_tables(id, figure_threads)) {
                    const std::filesystem::path path = std::filesystem::path(figure_dir) / (t.name + ".csv");
                    io::write_file(path, io::to_csv(t));
                    log_skips(err, t);
                    out << path.string() << "\n";
                }
            }
            return exit_ok;
        };
    }

    // selftest
    std::string selftest_dir;
    {
        CLI::App* sub = app.add_subcommand("selftest", "run the acceptance suite");
        sub->add_option("--scratch", selftest_dir, "directory for figure datasets (default: a temp dir)");
        Leaf& leaf = add_leaf(leaves, sub);
        leaf.action = [&] {
            const std::filesystem::path dir = selftest_dir.empty()
                                                  ? std::filesystem::temp_directory_path() / "ladder-selftest"
                                                  : std::filesystem::path(selftest_dir);
            bool all = true;
            for (const CriterionResult& r : run_acceptance(dir)) {
                out << format_result(r) << "\n";
                all = all && r.passed;
            }
            return all ? exit_ok : exit_computation;
        };
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    try {
        for (const auto& leaf : leaves) {
            if (!leaf->app->parsed()) continue;
            apply_config(*leaf);
            check_required(*leaf);
            return leaf->action();
        }
        throw UsageError("no command given");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.message() << "\n";
        return exit_computation;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace ladder::cli
