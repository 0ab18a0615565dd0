#include "ladder/scattering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>

#include "ladder/kernels/kernels.hpp"

namespace ladder {
namespace {

struct Prepared {
    Mode mode_l;
    Mode mode_r;
    std::optional<Error> error;
};

Prepared prepare(const ScatterPoint& pt, const ScatterOptions& opts) {
    Prepared out;
    try {
        validate(pt.params);
        if (!(pt.k_l > 0.0 && pt.k_l < pi)) {
            throw Error(ErrorKind::InvalidArgument, "k_L must lie strictly inside (0, pi)");
        }
        const double energy = incident_energy(pt.params, pt.k_l);
        // Only for the band-edge check; the incident wavevector is kept as given.
        (void)solve_mode(pt.params, Channel::L, energy, opts.edge_tol);
        out.mode_l = Mode::propagating(pt.k_l, pt.params.j_left);
        out.mode_r = solve_mode(pt.params, Channel::R, energy, opts.edge_tol);
    } catch (const Error& e) {
        out.error = e;
    }
    return out;
}

void load_point(kernels::AmplitudeBatch& b, std::size_t i, const ScatterPoint& pt,
                const Prepared& prep) {
    if (prep.error) {
        // Harmless placeholder; the outcome is discarded.
        b.zl_re[i] = 0.0;
        b.zl_im[i] = 1.0;
        b.zr_re[i] = 0.0;
        b.zr_im[i] = 1.0;
        b.flux_re[i] = 1.0;
        b.flux_im[i] = 0.0;
        b.xi[i] = 0.0;
        b.coupling_ratio[i] = 0.0;
        b.transfer_weight[i] = 0.0;
        return;
    }
    const cplx zl = prep.mode_l.phase();
    const cplx zr = prep.mode_r.phase();
    b.zl_re[i] = zl.real();
    b.zl_im[i] = zl.imag();
    b.zr_re[i] = zr.real();
    b.zr_im[i] = zr.imag();
    b.flux_re[i] = std::cos(pt.params.phi);
    b.flux_im[i] = std::sin(pt.params.phi);
    b.xi[i] = pt.params.xi();
    b.coupling_ratio[i] = pt.params.k_coupling / pt.params.j_right;
    b.transfer_weight[i] = transfer_weight(pt.params, prep.mode_l, prep.mode_r);
}

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

ScatterOutcome finish(const kernels::AmplitudeBatch& b, std::size_t i, const ScatterPoint& pt,
                      Prepared prep, const ScatterOptions& opts) {
    ScatterOutcome out;
    if (prep.error) {
        out.error = prep.error->kind();
        out.detail = prep.error->message();
        return out;
    }
    ScatteringResult r;
    r.t_ll = {b.t_ll_re[i], b.t_ll_im[i]};
    r.r_ll = {b.r_ll_re[i], b.r_ll_im[i]};
    r.t_rl = {b.t_rl_re[i], b.t_rl_im[i]};
    r.r_rl = {b.r_rl_re[i], b.r_rl_im[i]};
    r.denominator = {b.d_re[i], b.d_im[i]};
    r.mode_l = prep.mode_l;
    r.mode_r = prep.mode_r;

    if (!(std::abs(r.denominator) >= opts.singular_tol)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "|D| = " << std::abs(r.denominator) << " at k_L = " << pt.k_l;
        out.error = ErrorKind::ScatteringSingular;
        out.detail = msg.str();
        return out;
    }

    if (opts.cross_check) {
        const Amplitudes direct = solve_matching(pt.params, pt.k_l, prep.mode_r);
        if (!close(r.t_ll, direct.t_ll, opts.cross_check_tol) ||
            !close(r.r_ll, direct.r_ll, opts.cross_check_tol) ||
            !close(r.t_rl, direct.t_rl, opts.cross_check_tol) ||
            !close(r.r_rl, direct.r_rl, opts.cross_check_tol)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "closed form and direct solve disagree at k_L = " << pt.k_l
                << " (t_LL " << r.t_ll << " vs " << direct.t_ll << ")";
            out.error = ErrorKind::FormulaMismatch;
            out.detail = msg.str();
            return out;
        }
    }

    out.flows.t_flow_ll = b.flow_t_ll[i];
    out.flows.r_flow_ll = b.flow_r_ll[i];
    out.flows.t_flow_rl = b.flow_t_rl[i];
    out.flows.r_flow_rl = b.flow_r_rl[i];
    out.flows.t_raw_rl = b.raw_t_rl[i];
    out.flows.r_raw_rl = b.raw_r_rl[i];
    out.result = r;
    return out;
}

void evaluate_range(std::span<const ScatterPoint> points, const ScatterOptions& opts,
                    const kernels::KernelTable& k, kernels::AmplitudeBatch& batch,
                    std::span<ScatterOutcome> out, std::size_t begin, std::size_t end) {
    std::vector<Prepared> prepared;
    prepared.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        prepared.push_back(prepare(points[i], opts));
        load_point(batch, i, points[i], prepared.back());
    }
    k.amplitudes(batch, begin, end);
    for (std::size_t i = begin; i < end; ++i) {
        out[i] = finish(batch, i, points[i], std::move(prepared[i - begin]), opts);
    }
}

}  // namespace

unsigned default_thread_count() {
    if (const char* env = std::getenv("LADDER_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double transfer_weight(const LadderParams& p, const Mode& mode_l, const Mode& mode_r) {
    if (!mode_r.is_propagating()) {
        return 0.0;
    }
    return (p.j_right * std::sin(mode_r.k)) / (p.j_left * std::sin(mode_l.k));
}

Amplitudes solve_matching(const LadderParams& p, double k_l, const Mode& mode_r) {
    const cplx zl = std::polar(1.0, k_l);
    const cplx zr = mode_r.phase();
    const cplx w = std::polar(1.0, p.phi);
    const double energy = incident_energy(p, k_l);
    const double de_l = energy - p.onsite(Channel::L);
    const double de_r = energy - p.onsite(Channel::R);
    const double jl = p.j_left;
    const double jr = p.j_right;
    const double kc = p.k_coupling;

    // Unknowns (r_LL, t_LL, r_RL, t_RL); rows are the stationary equations at
    // (L, 0), (L, 1), (R, 0), (R, 1) with the ansatz substituted.
    Eigen::Matrix4cd a;
    Eigen::Vector4cd rhs;
    a << de_l + jl * zl, jl * zl, kc, 0.0,
         jl, de_l * zl + jl * zl * zl, 0.0, kc * std::conj(w) * zr,
         kc, 0.0, de_r + jr * zr, jr * zr,
         0.0, kc * w * zl, jr, de_r * zr + jr * zr * zr;
    rhs << -(de_l + jl / zl), -jl, -kc, 0.0;

    const Eigen::Vector4cd x = a.fullPivLu().solve(rhs);
    return {x(1), x(0), x(3), x(2)};
}

FlowRates flows(const LadderParams& p, const ScatteringResult& r) {
    FlowRates f;
    const double w = transfer_weight(p, r.mode_l, r.mode_r);
    f.t_flow_ll = std::norm(r.t_ll);
    f.r_flow_ll = std::norm(r.r_ll);
    f.t_raw_rl = std::norm(r.t_rl);
    f.r_raw_rl = std::norm(r.r_rl);
    f.t_flow_rl = f.t_raw_rl * w;
    f.r_flow_rl = f.r_raw_rl * w;
    return f;
}

ScatteringResult scatter(const LadderParams& p, double k_l, const ScatterOptions& opts) {
    thread_local kernels::AmplitudeBatch batch;
    batch.resize(1);
    const ScatterPoint pt{p, k_l};
    ScatterOutcome out;
    evaluate_range({&pt, 1}, opts, kernels::active(), batch, {&out, 1}, 0, 1);
    if (out.error) {
        throw Error(*out.error, out.detail);
    }
    return *out.result;
}

std::vector<ScatterOutcome> scatter_many(std::span<const ScatterPoint> points,
                                         const ScatterOptions& opts, unsigned threads) {
    std::vector<ScatterOutcome> out(points.size());
    if (points.empty()) {
        return out;
    }
    const auto& k = kernels::active();
    kernels::AmplitudeBatch batch;
    batch.resize(points.size());

    const unsigned n_threads = threads == 0 ? default_thread_count() : threads;
    const std::size_t n = points.size();
    const std::size_t workers = std::min<std::size_t>(n_threads, (n + 63) / 64);
    if (workers <= 1) {
        evaluate_range(points, opts, k, batch, out, 0, n);
        return out;
    }
    // Chunk boundaries are multiples of 4 so every point goes through the same
    // lane width regardless of the worker count.
    const std::size_t chunk = ((n + workers - 1) / workers + 3) / 4 * 4;
    {
        std::vector<std::jthread> pool;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back(
                [&, begin, end] { evaluate_range(points, opts, k, batch, out, begin, end); });
        }
    }
    return out;
}

}  // namespace ladder
