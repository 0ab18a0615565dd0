#include "ladder/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ladder/scattering.hpp"
#include "ladder/version.hpp"

namespace ladder {
namespace {

struct OutputGroup {
    unsigned bit;
    std::string_view name;
};

constexpr OutputGroup output_groups[] = {
    {output::amplitudes, "amplitudes"}, {output::raw_rates, "raw_rates"}, {output::flows, "flows"},
    {output::k_r, "k_R"},               {output::regime, "regime"},
};

[[noreturn]] void invalid_spec(const std::string& msg) { throw Error(ErrorKind::SpecInvalid, msg); }

std::string_view grid_name(GridKind g) { return g == GridKind::Closed ? "closed" : "cell-centred"; }

LadderParams point_params(const SweepSpec& spec, double v) {
    LadderParams p = spec.fixed;
    switch (spec.swept) {
        case SweptVariable::Eps: p.eps = v; break;
        case SweptVariable::Xi: p.k_coupling = coupling_for_xi(v, p.j_left, p.j_right); break;
        case SweptVariable::Phi: p.phi = v; break;
        case SweptVariable::KL: break;
    }
    return p;
}

std::vector<std::string> sweep_schema(const SweepSpec& spec) {
    std::vector<std::string> s{std::string(swept_name(spec.swept))};
    if (spec.outputs & output::amplitudes) {
        for (const char* a : {"t_ll", "r_ll", "t_rl", "r_rl"}) {
            s.push_back(std::string(a) + "_re");
            s.push_back(std::string(a) + "_im");
        }
    }
    if (spec.outputs & output::raw_rates) {
        s.insert(s.end(), {"T_LL", "R_LL", "T_RL", "R_RL"});
    }
    if (spec.outputs & output::flows) {
        s.insert(s.end(), {"flow_t_ll", "flow_r_ll", "flow_t_rl", "flow_r_rl", "flow_sum"});
    }
    if (spec.outputs & output::k_r) {
        s.insert(s.end(), {"k_r_re", "k_r_im"});
    }
    if (spec.outputs & output::regime) {
        s.emplace_back("regime");
    }
    return s;
}

std::vector<double> sweep_row(const SweepSpec& spec, double v, const ScatteringResult& r,
                              const FlowRates& f) {
    std::vector<double> row{v};
    if (spec.outputs & output::amplitudes) {
        for (const cplx a : {r.t_ll, r.r_ll, r.t_rl, r.r_rl}) {
            row.push_back(a.real());
            row.push_back(a.imag());
        }
    }
    if (spec.outputs & output::raw_rates) {
        row.insert(row.end(), {std::norm(r.t_ll), std::norm(r.r_ll), f.t_raw_rl, f.r_raw_rl});
    }
    if (spec.outputs & output::flows) {
        row.insert(row.end(), {f.t_flow_ll, f.r_flow_ll, f.t_flow_rl, f.r_flow_rl, f.sum()});
    }
    if (spec.outputs & output::k_r) {
        const cplx k = r.mode_r.wavevector();
        row.insert(row.end(), {k.real(), k.imag()});
    }
    if (spec.outputs & output::regime) {
        row.push_back(regime_code(r.mode_r.regime));
    }
    return row;
}

}  // namespace

std::string_view swept_name(SweptVariable v) noexcept {
    switch (v) {
        case SweptVariable::KL: return "k_l";
        case SweptVariable::Eps: return "eps";
        case SweptVariable::Xi: return "xi";
        case SweptVariable::Phi: return "phi";
    }
    return "unknown";
}

std::optional<SweptVariable> parse_swept(std::string_view name) noexcept {
    if (name == "k_l" || name == "kl" || name == "k_L") return SweptVariable::KL;
    if (name == "eps") return SweptVariable::Eps;
    if (name == "xi") return SweptVariable::Xi;
    if (name == "phi") return SweptVariable::Phi;
    return std::nullopt;
}

std::vector<double> grid_values(const SweepRange& range) {
    if (!std::isfinite(range.start) || !std::isfinite(range.stop) || !(range.start < range.stop)) {
        invalid_spec("sweep range needs finite start < stop");
    }
    if (range.n_points < 2) {
        invalid_spec("sweep range needs at least 2 points");
    }
    const auto n = static_cast<std::size_t>(range.n_points);
    const double width = range.stop - range.start;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = range.grid == GridKind::Closed
                                ? static_cast<double>(i) / static_cast<double>(n - 1)
                                : (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        v[i] = range.start + width * frac;
    }
    if (range.grid == GridKind::Closed) {
        v.back() = range.stop;
    }
    return v;
}

unsigned parse_outputs(std::string_view list) {
    unsigned bits = 0;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        std::string_view item = list.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item == "all") {
            bits |= output::all;
        } else {
            const auto* it = std::find_if(std::begin(output_groups), std::end(output_groups),
                                          [&](const OutputGroup& g) { return g.name == item; });
            if (it == std::end(output_groups)) {
                invalid_spec("unknown output group '" + std::string(item) + "'");
            }
            bits |= it->bit;
        }
        pos = comma + 1;
    }
    return bits;
}

std::string outputs_to_string(unsigned outputs) {
    std::string s;
    for (const OutputGroup& g : output_groups) {
        if (outputs & g.bit) {
            if (!s.empty()) s += ',';
            s += g.name;
        }
    }
    return s;
}

void validate_spec(const SweepSpec& spec) {
    (void)grid_values(spec.range);
    if ((spec.outputs & output::all) == 0) {
        invalid_spec("sweep selects no output columns");
    }
    try {
        validate(spec.fixed);
    } catch (const Error& e) {
        invalid_spec(e.message());
    }
    if (spec.swept == SweptVariable::KL) {
        if (spec.range.start < 0.0 || spec.range.stop > pi) {
            invalid_spec("k_L range must lie within [0, pi]");
        }
    } else if (!(spec.k_l > 0.0 && spec.k_l < pi)) {
        invalid_spec("fixed k_L must lie strictly inside (0, pi)");
    }
    if (spec.swept == SweptVariable::Xi && spec.range.start < 0.0) {
        invalid_spec("xi range must be non-negative");
    }
}

std::size_t SweepTable::column(std::string_view name) const {
    const auto it = std::find(schema.begin(), schema.end(), name);
    if (it == schema.end()) {
        throw Error(ErrorKind::InvalidArgument, "no column named '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - schema.begin());
}

bool SweepTable::has_column(std::string_view name) const noexcept {
    return std::find(schema.begin(), schema.end(), name) != schema.end();
}

std::vector<double> SweepTable::column_values(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& row : rows) {
        v.push_back(row[c]);
    }
    return v;
}

double regime_code(Regime r) noexcept {
    switch (r) {
        case Regime::Propagating: return 0.0;
        case Regime::Evanescent: return 1.0;
        case Regime::StaggeredEvanescent: return 2.0;
    }
    return -1.0;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> params_metadata(const LadderParams& p) {
    return {{"eps", format_number(p.eps)},
            {"j_left", format_number(p.j_left)},
            {"j_right", format_number(p.j_right)},
            {"k_coupling", format_number(p.k_coupling)},
            {"phi", format_number(p.phi)}};
}

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
    validate_spec(spec);
    const std::vector<double> grid = grid_values(spec.range);

    std::vector<ScatterPoint> points;
    points.reserve(grid.size());
    for (const double v : grid) {
        const double k_l = spec.swept == SweptVariable::KL ? v : spec.k_l;
        points.push_back({point_params(spec, v), k_l});
    }
    const std::vector<ScatterOutcome> outcomes = scatter_many(points, {}, threads);

    SweepTable t;
    t.name = spec.name;
    t.schema = sweep_schema(spec);
    t.metadata = {{"artifact_version", std::string(version)},
                  {"name", spec.name},
                  {"swept", std::string(swept_name(spec.swept))},
                  {"range_start", format_number(spec.range.start)},
                  {"range_stop", format_number(spec.range.stop)},
                  {"n_points", std::to_string(spec.range.n_points)},
                  {"grid", std::string(grid_name(spec.range.grid))}};
    for (auto& kv : params_metadata(spec.fixed)) {
        const bool swept_field = (spec.swept == SweptVariable::Eps && kv.first == "eps") ||
                                 (spec.swept == SweptVariable::Phi && kv.first == "phi") ||
                                 (spec.swept == SweptVariable::Xi && kv.first == "k_coupling");
        if (!swept_field) {
            t.metadata.push_back(std::move(kv));
        }
    }
    if (spec.swept != SweptVariable::KL) {
        t.metadata.emplace_back("k_l", format_number(spec.k_l));
    }
    t.metadata.emplace_back("outputs", outputs_to_string(spec.outputs));
    if (spec.outputs & output::regime) {
        t.metadata.emplace_back("regime_codes", "0=propagating 1=evanescent 2=staggered");
    }

    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const ScatterOutcome& o = outcomes[i];
        if (o.result) {
            t.rows.push_back(sweep_row(spec, grid[i], *o.result, o.flows));
            t.row_index.push_back(i);
        } else {
            t.skips.push_back({i, grid[i], o.error.value_or(ErrorKind::InvalidArgument), o.detail});
        }
    }
    return t;
}

}  // namespace ladder
