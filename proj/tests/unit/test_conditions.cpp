#include <doctest.h>

#include <cmath>
#include <random>

#include "ladder/conditions.hpp"
#include "ladder/errors.hpp"
#include "ladder/scattering.hpp"
#include "support/reference.hpp"

using namespace ladder;

namespace {

bool throws_kind(auto&& fn, ErrorKind kind) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

/// |r_LL| at a representative (xi, phi) realizing gamma; 1 where scatter fails.
double abs_r_ll(double gamma, double eps, double k_l) {
    const LadderParams p = transparency_representative(gamma, eps, 1.0, 1.0);
    try {
        return std::abs(scatter(p, k_l).r_ll);
    } catch (const Error&) {
        return 1.0;
    }
}

std::vector<double> scanned_points(double gamma, double eps) {
    return ref::scan_zeros([&](double k) { return abs_r_ll(gamma, eps, k); }, 0.0, pi, 10000, 1e-7);
}

}  // namespace

TEST_CASE("blockade examples") {
    const BlockadeSolution a = blockade_epsilon(pi / 4, 4.0, 1.0, 1.0, BlockadeBranch::Upper);
    CHECK(a.eps == doctest::Approx(std::cos(pi / 4) - 0.5 * (std::sqrt(5.0) + 1.0 / std::sqrt(5.0))).epsilon(1e-15));
    CHECK(std::abs(a.eps - (-0.634534)) < 5e-7);
    CHECK(a.params.phi == pi);
    CHECK(a.params.xi() == doctest::Approx(4.0));
    CHECK(a.mode_r.regime == Regime::Evanescent);
    CHECK(a.mode_r.phase().real() == doctest::Approx(1.0 / std::sqrt(5.0)));

    const BlockadeSolution b = blockade_epsilon(pi / 2, 3.0, 1.0, 1.0, BlockadeBranch::Upper);
    CHECK(b.eps == doctest::Approx(-1.25).epsilon(1e-15));
    const ScatteringResult rb = scatter(b.params, pi / 2);
    CHECK(std::abs(rb.t_ll) < 1e-12);
    CHECK(std::abs(std::abs(rb.r_ll) - 1.0) < 1e-12);

    const BlockadeSolution c = blockade_epsilon(pi - pi / 4, 4.0, 1.0, 1.0, BlockadeBranch::Lower);
    CHECK(c.eps == doctest::Approx(0.634534).epsilon(1e-6));
    CHECK(c.mode_r.regime == Regime::StaggeredEvanescent);
}

TEST_CASE("blockade at random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double k = 0.01 + (pi - 0.02) * u(rng);
        const double xi = 0.01 + 10.0 * u(rng);
        const double jl = 0.5 + 1.5 * u(rng);
        const double jr = 0.5 + 1.5 * u(rng);
        const BlockadeBranch br = u(rng) < 0.5 ? BlockadeBranch::Upper : BlockadeBranch::Lower;
        const BlockadeSolution s = blockade_epsilon(k, xi, jl, jr, br);
        const ScatteringResult r = scatter(s.params, k);
        CHECK(std::abs(r.t_ll) < 1e-10);
        CHECK(std::abs(std::abs(r.r_ll) - 1.0) < 1e-10);
        CHECK(s.eps != 0.0);
        CHECK(s.eps == blockade_detuning(k, xi, jl, jr, br));
    }
}

TEST_CASE("blockade central symmetry") {
    for (double xi : {0.3, 1.0, 4.0, 9.0}) {
        for (int i = 1; i < 100; ++i) {
            const double k = pi * i / 100.0;
            const double up = blockade_detuning(k, xi, 1.0, 1.0, BlockadeBranch::Upper);
            const double down = blockade_detuning(pi - k, xi, 1.0, 1.0, BlockadeBranch::Lower);
            CHECK(std::abs(up + down) < 1e-14);
        }
    }
}

TEST_CASE("blockade detuning is monotone in k_L") {
    for (const BlockadeBranch br : {BlockadeBranch::Upper, BlockadeBranch::Lower}) {
        double prev = blockade_detuning(1e-3, 2.0, 1.0, 1.0, br);
        for (int i = 2; i < 3000; ++i) {
            const double eps = blockade_detuning(pi * i / 3000.0, 2.0, 1.0, 1.0, br);
            CHECK(eps < prev);
            prev = eps;
        }
    }
}

TEST_CASE("blockade without coupling sits on a band edge") {
    CHECK(throws_kind([] { blockade_epsilon(pi / 4, 0.0, 1.0, 1.0, BlockadeBranch::Upper); }, ErrorKind::BandEdge));
    CHECK(throws_kind([] { blockade_epsilon(0.0, 1.0, 1.0, 1.0, BlockadeBranch::Upper); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([] { blockade_epsilon(1.0, -1.0, 1.0, 1.0, BlockadeBranch::Upper); }, ErrorKind::InvalidArgument));
}

TEST_CASE("transparency with two points") {
    const TransparencySolution s = transparency_points(-1.6, 1.7, 1.0, 1.0);
    REQUIRE(s.k_l_points.size() == 2);
    CHECK(two_transparency_criterion(-1.6, 1.7));
    const LadderParams p = transparency_representative(-1.6, 1.7, 1.0, 1.0);
    CHECK(p.gamma() == doctest::Approx(-1.6));
    for (const double k : s.k_l_points) {
        const ScatteringResult r = scatter(p, k);
        CHECK(std::abs(r.r_ll) < 1e-10);
        CHECK(std::abs(std::abs(r.t_ll) - 1.0) < 1e-10);
    }

    const std::vector<double> scanned = scanned_points(-1.6, 1.7);
    REQUIRE(scanned.size() == 2);
    CHECK(scanned[0] == doctest::Approx(std::min(s.k_l_points[0], s.k_l_points[1])).epsilon(1e-6));
    CHECK(scanned[1] == doctest::Approx(std::max(s.k_l_points[0], s.k_l_points[1])).epsilon(1e-6));
}

TEST_CASE("transparency at gamma = -1.6, eps = 3 agrees with a dense scan") {
    const TransparencySolution s = transparency_points(-1.6, 3.0, 1.0, 1.0);
    const std::vector<double> scanned = scanned_points(-1.6, 3.0);
    CHECK(s.k_l_points.size() == scanned.size());
    CHECK(s.k_l_points.size() == 1);
    for (std::size_t i = 0; i < std::min(scanned.size(), s.k_l_points.size()); ++i) {
        CHECK(s.k_l_points[i] == doctest::Approx(scanned[i]).epsilon(1e-6));
    }
    CHECK_FALSE(two_transparency_criterion(-1.6, 3.0));
}

TEST_CASE("transparency at gamma = 2, eps = 0 agrees with a dense scan") {
    const TransparencySolution s = transparency_points(2.0, 0.0, 1.0, 1.0);
    const std::vector<double> scanned = scanned_points(2.0, 0.0);
    REQUIRE(s.k_l_points.size() == scanned.size());
    for (std::size_t i = 0; i < scanned.size(); ++i) {
        CHECK(s.k_l_points[i] == doctest::Approx(scanned[i]).epsilon(1e-6));
    }
}

TEST_CASE("transparency point counts match the dense scan") {
    for (const double gamma : {-1.9, -1.2, -0.4, 0.5, 1.5, 3.0}) {
        for (const double eps : {-2.2, -1.3, -0.45, 0.2, 0.9, 1.75, 2.6}) {
            const TransparencySolution s = transparency_points(gamma, eps, 1.0, 1.0);
            CAPTURE(gamma);
            CAPTURE(eps);
            CHECK(s.k_l_points.size() == scanned_points(gamma, eps).size());
            for (const double k : s.k_l_points) {
                CHECK(abs_r_ll(gamma, eps, k) < 1e-10);
            }
            if (s.k_l_points.size() == 2) CHECK(eps != 0.0);
        }
    }
}

TEST_CASE("two-point criterion on a coarse grid") {
    int boundary = 0;
    for (int i = 0; i < 40; ++i) {
        const double gamma = -2.0 + 2.0 * (i + 0.5) / 40.0;
        for (int j = 0; j < 40; ++j) {
            const double eps = -2.5 + 5.0 * (j + 0.5) / 40.0;
            const TransparencySolution s = transparency_points(gamma, eps, 1.0, 1.0);
            const bool two = s.k_l_points.size() == 2;
            if (std::abs(std::abs(eps) - (1.0 - gamma / 2.0)) < 1e-12) {
                // On |eps| = 1 - gamma/2 the second root sits at cos k_L = -sign(eps),
                // a band edge, so only one scattering state is transparent.
                ++boundary;
                CHECK(two_transparency_criterion(gamma, eps));
                CHECK(s.k_l_points.size() == 1);
                continue;
            }
            CHECK(two == two_transparency_criterion(gamma, eps));
        }
    }
    CHECK(boundary == 16);
}

TEST_CASE("transparency rejects gamma = 0") {
    CHECK(throws_kind([] { transparency_points(0.0, 1.0, 1.0, 1.0); }, ErrorKind::GammaSingular));
    CHECK(throws_kind([] { transparency_points(1e-13, 1.0, 1.0, 1.0); }, ErrorKind::GammaSingular));
}

TEST_CASE("routing examples") {
    const RoutingPoint a = routing_params(0.0, 1.0, 1.0);
    CHECK(a.xi == doctest::Approx(2.0));
    CHECK(a.k_coupling == doctest::Approx(std::sqrt(2.0)));
    CHECK(a.eps == 0.0);
    CHECK(a.k_l == doctest::Approx(pi / 2));
    CHECK(a.k_r == doctest::Approx(pi / 2));

    const RoutingPoint b = routing_params(pi / 6, 1.0, 1.0);
    CHECK(b.xi == doctest::Approx(std::sqrt(3.0)));
    CHECK(b.eps == doctest::Approx(0.5));
    CHECK(b.k_r == doctest::Approx(2.0 * pi / 3));

    const RoutingPoint c = routing_params(-pi / 4, 1.0, 1.0);
    CHECK(c.xi == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.eps == doctest::Approx(-std::sqrt(2.0) / 2));
    CHECK(c.k_r == doctest::Approx(pi / 4));
}

TEST_CASE("routing over the open interval") {
    for (int i = 0; i < 100; ++i) {
        const double phi = -pi / 2 + 0.01 + (pi - 0.02) * i / 99.0;
        const RoutingPoint rp = routing_params(phi, 1.0, 1.0);
        const ScatteringResult r = scatter(rp.params, rp.k_l);
        const FlowRates f = flows(rp.params, r);
        CHECK(std::abs(f.t_flow_ll) < 1e-12);
        CHECK(std::abs(f.r_flow_ll) < 1e-12);
        CHECK(std::abs(f.t_flow_rl - 0.5) < 1e-12);
        CHECK(std::abs(f.r_flow_rl - 0.5) < 1e-12);
        CHECK(std::abs(r.mode_r.k - (phi + pi / 2)) < 1e-12);
        if (phi != 0.0) CHECK(rp.eps != 0.0);
    }
    CHECK(throws_kind([] { routing_params(pi / 2, 1.0, 1.0); }, ErrorKind::RoutingDomain));
    CHECK(throws_kind([] { routing_params(-pi / 2, 1.0, 1.0); }, ErrorKind::RoutingDomain));
    CHECK(throws_kind([] { routing_params(2.0, 1.0, 1.0); }, ErrorKind::RoutingDomain));
}
