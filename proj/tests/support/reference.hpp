#pragma once

// Test-side reference computations written without the library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "ladder/params.hpp"

namespace ref {

using cplx = std::complex<double>;

/// e^{ik} of the free solution of a chain at energy E: the unit phase with
/// Im > 0 inside the band, otherwise the decaying real root of z + 1/z = 2c.
inline cplx free_phase(double onsite, double hop, double energy) {
    const double c = (onsite - energy) / (2.0 * hop);
    if (std::abs(c) < 1.0) {
        return {c, std::sqrt(1.0 - c * c)};
    }
    return {c - std::copysign(std::sqrt(c * c - 1.0), c), 0.0};
}

struct Amps {
    cplx t_ll, r_ll, t_rl, r_rl;
};

/// Largest |((H - E) u)_{l, sigma}| over sites -6..7 when u is assembled from
/// the scattering ansatz with the given amplitudes, relative to the largest
/// amplitude. Zero exactly when the amplitudes solve the stationary problem.
inline double ansatz_residual(const ladder::LadderParams& p, double k_l, const Amps& a) {
    const double energy = p.eps - 2.0 * p.j_left * std::cos(k_l);
    const cplx zl = std::polar(1.0, k_l);
    const cplx zr = free_phase(-p.eps, p.j_right, energy);
    const cplx flux = std::polar(1.0, p.phi);
    auto u_l = [&](int l) { return l <= 0 ? std::pow(zl, l) + a.r_ll * std::pow(zl, -l) : a.t_ll * std::pow(zl, l); };
    auto u_r = [&](int l) { return l <= 0 ? a.r_rl * std::pow(zr, -l) : a.t_rl * std::pow(zr, l); };

    double worst = 0.0;
    for (int l = -6; l <= 7; ++l) {
        cplx hl = p.eps * u_l(l) - p.j_left * (u_l(l - 1) + u_l(l + 1));
        cplx hr = -p.eps * u_r(l) - p.j_right * (u_r(l - 1) + u_r(l + 1));
        if (l == 0) {
            hl += -p.k_coupling * u_r(0);
            hr += -p.k_coupling * u_l(0);
        } else if (l == 1) {
            hl += -p.k_coupling * std::conj(flux) * u_r(1);
            hr += -p.k_coupling * flux * u_l(1);
        }
        worst = std::max({worst, std::abs(hl - energy * u_l(l)), std::abs(hr - energy * u_r(l))});
    }
    const double scale = std::max({1.0, std::abs(a.t_ll), std::abs(a.r_ll), std::abs(a.t_rl), std::abs(a.r_rl)});
    return worst / scale;
}

/// Zeros of a non-negative function found by scanning `n` cell-centred points
/// of (lo, hi) for local minima and refining each by golden-section search.
/// Returns the abscissae where the refined value is below `zero_tol`.
inline std::vector<double> scan_zeros(const std::function<double(double)>& f, double lo, double hi, int n,
                                      double zero_tol) {
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        x[i] = lo + (i + 0.5) * h;
        y[i] = f(x[i]);
    }
    std::vector<double> zeros;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || y[i] <= y[i - 1];
        const bool right_ok = i == n - 1 || y[i] < y[i + 1];
        if (!left_ok || !right_ok) continue;
        double a = std::max(lo, x[i] - h);
        double b = std::min(hi, x[i] + h);
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double c = b - g * (b - a);
            const double d = a + g * (b - a);
            if (f(c) < f(d)) b = d; else a = c;
        }
        const double xm = 0.5 * (a + b);
        if (f(xm) < zero_tol) zeros.push_back(xm);
    }
    return zeros;
}

inline ladder::LadderParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> eps(-3.0, 3.0), hop(0.5, 2.0), coupling(0.0, 3.0),
        flux(0.0, 2.0 * ladder::pi);
    return ladder::LadderParams{eps(rng), hop(rng), hop(rng), coupling(rng), flux(rng)};
}

inline double random_k(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.01, ladder::pi - 0.01)(rng);
}

}  // namespace ref
