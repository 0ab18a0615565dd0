#pragma once

// Independent numerical ground truth for the closed-form amplitudes.
//
// `oracle_scatter` solves the stationary problem on a truncated ladder whose
// four chain ends carry exact outgoing-wave self-energies (quantum
// transmitting boundary), so the answer is exact for any size >= 8. It never
// calls into the closed form, the lattice-core mode solver or the 4x4
// matching solve.
//
// The wavepacket propagator evolves a Gaussian packet under the same
// Hamiltonian with the Crank-Nicolson (Cayley) scheme, which is unitary for
// any step size, and reads off the four asymptotic flows.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <complex>
#include <memory>
#include <vector>

#include "ladder/params.hpp"
#include "ladder/scattering.hpp"

namespace ladder {

/// e^{ik} of the outgoing free solution of a chain with the given onsite
/// energy and hopping: the root of J z^2 + (E - onsite) z + J = 0 with
/// |z| < 1, or with Im z > 0 when both roots are unimodular.
/// Throws BandEdge when E is within `edge_tol` of a band edge.
cplx outgoing_phase(double onsite, double hop, double energy, double edge_tol = 1e-9);

/// Truncated ladder with sites l in [-N/2, N/2] on both legs and transparent
/// ends. Unknown ordering: index 2 (l - l_min) + (0 for L, 1 for R).
struct OpenLattice {
    int n_rungs = 16;
    LadderParams params;
    double k_l = 0.0;
    double energy = 0.0;
    cplx boundary_phase_l;        // e^{ik_L}, both ends of leg L
    cplx boundary_phase_r_left;   // e^{ik_R} seen from the left end of leg R
    cplx boundary_phase_r_right;  // e^{ik_R} seen from the right end of leg R

    /// Throws InvalidArgument for odd or too small sizes and k_l outside (0, pi).
    static OpenLattice build(const LadderParams& p, double k_l, int n_rungs);

    int first_site() const noexcept { return -n_rungs / 2; }
    int last_site() const noexcept { return n_rungs / 2; }
    int sites_per_leg() const noexcept { return n_rungs + 1; }
    Eigen::Index index(int site, Channel c) const noexcept {
        return 2 * static_cast<Eigen::Index>(site - first_site()) + (c == Channel::R ? 1 : 0);
    }

    /// E - H - Sigma, with Sigma the end-site self-energies.
    Eigen::SparseMatrix<cplx> system_matrix() const;

    /// Source injected by the unit incident wave at the left end of leg L.
    Eigen::VectorXcd source() const;

    /// Stationary amplitudes on every site. Throws SolveSingular near a pole.
    Eigen::VectorXcd solve() const;
};

/// Amplitudes from the transparent-boundary solve. `denominator` is not
/// produced by this route and is NaN.
ScatteringResult oracle_scatter(const LadderParams& p, double k_l, int n_rungs = 16);

/// Amplitudes of a wavepacket on both legs of an open (hard-wall) ladder,
/// stored as separate real and imaginary arrays per leg.
struct WavepacketState {
    int first_site = 0;
    std::vector<double> re_l, im_l, re_r, im_r;
    double time = 0.0;
    double norm = 0.0;

    std::size_t sites() const noexcept { return re_l.size(); }
};

struct WavepacketConfig {
    double k_center = 0.5 * pi;
    double sigma_k = 0.05;
    int n_rungs = 0;       // sites l in [-n_rungs/2, n_rungs/2]
    double t_final = 0.0;
    double dt = 0.05;
    int start_site = 0;    // initial packet center on leg L
    int edge_margin = 8;   // sites per chain end watched for clipping
    double clip_tol = 1e-6;
};

/// Picks lattice size, start position and run time so the packet starts well
/// clear of the rungs, fully leaves them and never touches the chain ends.
WavepacketConfig auto_wavepacket_config(const LadderParams& p, double k_center, double sigma_k);

struct WavepacketReport {
    /// Flow estimates. Raw rates are not observable dynamically and are NaN.
    FlowRates estimates;
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double max_edge_weight = 0.0;
    int steps = 0;
    WavepacketConfig config;
};

/// Crank-Nicolson propagator for the ladder Hamiltonian on a finite lattice.
class WavepacketPropagator {
public:
    WavepacketPropagator(const LadderParams& p, int n_rungs, double dt);

    /// Normalized Gaussian on leg L: exp(-sigma_k^2 (l - center)^2 + i k_center l).
    WavepacketState gaussian(double k_center, double sigma_k, int center) const;

    void step(WavepacketState& s) const;

    double norm(const WavepacketState& s) const;

    int first_site() const noexcept { return first_site_; }
    int sites() const noexcept { return sites_; }

private:
    LadderParams params_;
    int first_site_;
    int sites_;
    double half_dt_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>> lu_;
};

WavepacketReport run_wavepacket(const LadderParams& p, const WavepacketConfig& cfg);

/// Flow estimates for a packet centered at k_center with momentum spread
/// sigma_k. Passing n_rungs <= 0 or t_final <= 0 picks them automatically.
/// Throws PacketClipped if more than 1e-6 of the norm reaches a chain end.
FlowRates wavepacket_transport(const LadderParams& p, double k_center, double sigma_k,
                               int n_rungs = 0, double t_final = 0.0);

}  // namespace ladder
