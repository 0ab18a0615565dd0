#include <doctest.h>

#include <cmath>
#include <random>

#include "ladder/conditions.hpp"
#include "ladder/errors.hpp"
#include "ladder/oracle.hpp"
#include "support/reference.hpp"

using namespace ladder;

namespace {

double max_diff(const ScatteringResult& a, const ScatteringResult& b) {
    return std::max({std::abs(a.t_ll - b.t_ll), std::abs(a.r_ll - b.r_ll), std::abs(a.t_rl - b.t_rl),
                     std::abs(a.r_rl - b.r_rl)});
}

bool throws_kind(auto&& fn, ErrorKind kind) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

}  // namespace

TEST_CASE("outgoing phase") {
    const cplx z = outgoing_phase(0.0, 1.0, 0.0);
    CHECK(std::abs(z - cplx(0.0, 1.0)) < 1e-15);
    const cplx low = outgoing_phase(0.0, 1.0, -2.5);
    CHECK(std::abs(low - 0.5) < 1e-15);
    const cplx high = outgoing_phase(0.0, 1.0, 2.5);
    CHECK(std::abs(high + 0.5) < 1e-15);
    CHECK(throws_kind([] { outgoing_phase(0.0, 1.0, 2.0); }, ErrorKind::BandEdge));
}

TEST_CASE("decoupled legs") {
    const ScatteringResult r = oracle_scatter({0.3, 1.0, 1.0, 0.0, 0.0}, pi / 4);
    CHECK(std::abs(r.t_ll - 1.0) < 1e-13);
    CHECK(std::abs(r.r_ll) < 1e-13);
    CHECK(std::abs(r.t_rl) < 1e-13);
    CHECK(std::abs(r.r_rl) < 1e-13);
    CHECK(std::isnan(r.denominator.real()));
}

TEST_CASE("blockade point") {
    const BlockadeSolution b = blockade_epsilon(pi / 4, 4.0, 1.0, 1.0, BlockadeBranch::Upper);
    const ScatteringResult r = oracle_scatter(b.params, pi / 4);
    CHECK(std::abs(r.t_ll) < 1e-10);
    CHECK(std::abs(std::abs(r.r_ll) - 1.0) < 1e-10);
}

TEST_CASE("oracle agrees with the closed form at random points") {
    std::mt19937_64 rng(31);
    int compared = 0;
    for (int i = 0; i < 1500; ++i) {
        const LadderParams p = ref::random_params(rng);
        const double k = ref::random_k(rng);
        ScatteringResult closed;
        try {
            closed = scatter(p, k);
        } catch (const Error&) {
            continue;
        }
        const ScatteringResult o = oracle_scatter(p, k);
        const double scale = std::max(1.0, std::abs(closed.t_rl) + std::abs(closed.r_rl));
        CHECK(max_diff(closed, o) < 1e-10 * scale);
        CHECK(o.mode_r.regime == closed.mode_r.regime);
        ++compared;
    }
    CHECK(compared > 1000);
}

TEST_CASE("oracle does not depend on the lattice size") {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 50; ++i) {
        const LadderParams p = ref::random_params(rng);
        const double k = ref::random_k(rng);
        try {
            const ScatteringResult a = oracle_scatter(p, k, 8);
            const ScatteringResult b = oracle_scatter(p, k, 200);
            const double scale = std::max(1.0, std::abs(a.t_rl) + std::abs(a.r_rl));
            CHECK(max_diff(a, b) < 1e-12 * scale);
        } catch (const Error& e) {
            CHECK((e.kind() == ErrorKind::BandEdge || e.kind() == ErrorKind::SolveSingular));
        }
    }
}

TEST_CASE("open lattice layout") {
    const OpenLattice lat = OpenLattice::build({0.0, 1.0, 1.0, 1.0, 0.5}, 1.0, 10);
    CHECK(lat.first_site() == -5);
    CHECK(lat.last_site() == 5);
    CHECK(lat.sites_per_leg() == 11);
    CHECK(lat.index(-5, Channel::L) == 0);
    CHECK(lat.index(-5, Channel::R) == 1);
    CHECK(lat.index(5, Channel::R) == 21);
    CHECK(lat.system_matrix().rows() == 22);
    CHECK(lat.source().size() == 22);
}

TEST_CASE("oracle input validation") {
    const LadderParams p{0.0, 1.0, 1.0, 1.0, 0.0};
    CHECK(throws_kind([&] { oracle_scatter(p, 1.0, 6); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([&] { oracle_scatter(p, 1.0, 17); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([&] { oracle_scatter(p, 0.0); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([&] { oracle_scatter(p, pi); }, ErrorKind::InvalidArgument));
}
