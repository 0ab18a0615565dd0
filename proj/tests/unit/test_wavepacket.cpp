#include <doctest.h>

#include <cmath>

#include "ladder/conditions.hpp"
#include "ladder/errors.hpp"
#include "ladder/oracle.hpp"

using namespace ladder;

namespace {

double flow_deviation(const FlowRates& a, const FlowRates& b) {
    return std::max({std::abs(a.t_flow_ll - b.t_flow_ll), std::abs(a.r_flow_ll - b.r_flow_ll),
                     std::abs(a.t_flow_rl - b.t_flow_rl), std::abs(a.r_flow_rl - b.r_flow_rl)});
}

}  // namespace

TEST_CASE("free propagation on decoupled legs") {
    const FlowRates f = wavepacket_transport({0.0, 1.0, 1.0, 0.0, 0.0}, pi / 2, 0.05);
    CHECK(std::abs(f.t_flow_ll - 1.0) < 1e-3);
    CHECK(f.r_flow_ll < 1e-3);
    CHECK(f.t_flow_rl < 1e-12);
    CHECK(f.r_flow_rl < 1e-12);
    CHECK(std::isnan(f.t_raw_rl));
}

TEST_CASE("routing point splits the packet into leg R") {
    const RoutingPoint rp = routing_params(0.0, 1.0, 1.0);
    const FlowRates f = wavepacket_transport(rp.params, pi / 2, 0.05);
    CHECK(std::abs(f.t_flow_rl - 0.5) < 0.02);
    CHECK(std::abs(f.r_flow_rl - 0.5) < 0.02);
    CHECK(f.t_flow_ll < 0.02);
    CHECK(f.r_flow_ll < 0.02);
}

TEST_CASE("forward transfer suppressed at phi = pi") {
    const FlowRates f = wavepacket_transport({0.0, 1.0, 1.0, 2.0, pi}, pi / 3, 0.05);
    CHECK(f.t_flow_rl < 1e-6);
}

TEST_CASE("estimates converge to the stationary flows as the packet narrows") {
    const LadderParams p{-0.7, 1.0, 1.0, 2.0, pi};
    const double k = 1.2;
    const FlowRates exact = flows(p, scatter(p, k));
    const double coarse = flow_deviation(wavepacket_transport(p, k, 0.1), exact);
    const double fine = flow_deviation(wavepacket_transport(p, k, 0.05), exact);
    CHECK(fine < coarse);
    CHECK(fine < 0.02);
}

TEST_CASE("norm is conserved and the step size barely matters") {
    const RoutingPoint rp = routing_params(pi / 6, 1.0, 1.0);
    WavepacketConfig cfg = auto_wavepacket_config(rp.params, pi / 2, 0.1);
    const WavepacketReport a = run_wavepacket(rp.params, cfg);
    CHECK(std::abs(a.final_norm - a.initial_norm) < 1e-10);
    CHECK(std::abs(a.initial_norm - 1.0) < 1e-12);
    CHECK(std::abs(a.estimates.sum() - 1.0) < 1e-10);
    CHECK(a.max_edge_weight < cfg.clip_tol);

    cfg.dt *= 0.5;
    const WavepacketReport b = run_wavepacket(rp.params, cfg);
    CHECK(flow_deviation(a.estimates, b.estimates) < 1e-4);
}

TEST_CASE("a lattice that is too small clips the packet") {
    const LadderParams p{0.0, 1.0, 1.0, 1.0, 0.0};
    WavepacketConfig cfg = auto_wavepacket_config(p, pi / 2, 0.1);
    cfg.n_rungs = 2 * (std::abs(cfg.start_site) + 30);
    try {
        run_wavepacket(p, cfg);
        FAIL("expected PacketClipped");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PacketClipped);
    }
}

TEST_CASE("invalid packet parameters") {
    const LadderParams p{0.0, 1.0, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(auto_wavepacket_config(p, 0.1, 0.05), Error);
    CHECK_THROWS_AS(auto_wavepacket_config(p, pi / 2, 0.0), Error);
    CHECK_THROWS_AS(WavepacketPropagator(p, 7, 0.05), Error);
    CHECK_THROWS_AS(WavepacketPropagator(p, 64, 0.0), Error);
}

TEST_CASE("gaussian initial state") {
    const WavepacketPropagator prop({0.0, 1.0, 1.0, 1.0, 0.0}, 200, 0.05);
    const WavepacketState s = prop.gaussian(1.0, 0.1, -40);
    CHECK(s.first_site == -100);
    CHECK(s.sites() == 201);
    CHECK(s.norm == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(prop.norm(s) == doctest::Approx(1.0).epsilon(1e-14));
    double r_weight = 0.0;
    for (std::size_t i = 0; i < s.sites(); ++i) r_weight += s.re_r[i] * s.re_r[i] + s.im_r[i] * s.im_r[i];
    CHECK(r_weight == 0.0);
}
