// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "passkit/channel.hpp"

namespace passkit {

// Pilot-based channel estimation (sequential-activation LS, OMP compressed
// sensing, grid-MLE parameter sensing) and codebook beam training. Channel
// vectors follow the conjugated-storage convention of the channel module, so
// the pilot model reads y = G^H h s + z.

/// Block-diagonal in-waveguide matrix (MN x N, waveguide-major stacking).
Eigen::MatrixXcd inwaveguide_matrix(const Scenario &s, const PinchConfig &c);

/// Stacked free-space vector of one user as an Eigen vector.
Eigen::VectorXcd stacked_channel(const Scenario &s, const PinchConfig &c, size_t user);

struct EquivalentPilot {
    Eigen::MatrixXcd matrix; // NT x MN, row block t carries s_t G^H
    int rank = 0;            // numerical rank (SVD, 1e-10 sigma_max threshold)
};
/// Equivalent pilot matrix kron(s, G^H) of the vectorized pilot model, with
/// its numerical rank (N for generic inputs regardless of pilot length).
EquivalentPilot equivalent_pilot_matrix(const cvec &pilots, const Eigen::MatrixXcd &g_h);

struct SequentialLsResult {
    Eigen::MatrixXcd h_hat;         // N x M estimate (column m = candidate m)
    std::vector<double> residuals;  // per-slot LS residuals
    int slots = 0;                  // pilot overhead: M slots
    double nmse = 0.0;              // against the true channel
};
/// Sequential activation: slot m activates candidate m on every waveguide at
/// full radiation, restoring an invertible (diagonal) per-slot model.
/// `h_true` is N x M; pilots are shared across slots.
SequentialLsResult ls_sequential(const Scenario &s,
                                 const std::vector<std::vector<double>> &candidates,
                                 const Eigen::MatrixXcd &h_true, const cvec &pilots,
                                 double noise_power, std::uint64_t seed);

struct Dictionary {
    Eigen::MatrixXcd psi;          // MN x L, unit-norm columns
    std::vector<double> sin_theta; // atom direction grid
};
/// Planar-wavefront dictionary over a uniform direction grid (L = 4 MN by
/// default).
Dictionary planar_dictionary(const Scenario &s, const PinchConfig &c, int atoms = 0);

struct OmpStop {
    int sparsity = 0;       // stop after k atoms (0 = no sparsity stop)
    double residual = -1.0; // stop when ||r|| <= residual (negative = off)
};

struct OmpResult {
    std::vector<int> support;
    Eigen::VectorXcd coeffs;         // on the support
    Eigen::VectorXcd h_hat;          // Psi x
    double residual_norm = 0.0;
    std::vector<double> residual_trace; // non-increasing per iteration
};
/// Orthogonal matching pursuit on the compound matrix sensing * dictionary:
/// greedy max-correlation atom, LS refit on the support, residual update.
OmpResult omp_recover(const Eigen::VectorXcd &y, const Eigen::MatrixXcd &sensing,
                      const Eigen::MatrixXcd &dictionary, const OmpStop &stop);

struct SenseSettings {
    int xr_points = 161;
    int zeta_points = 161;
    double zeta_min = 0.05;
    double zeta_max = 20.0;
    int refine_rounds = 4;
    int golden_iters = 80;
};

struct ParameterSenseResult {
    double x_r = 0.0;   // user projection on the waveguide axis
    double zeta = 0.0;  // lateral offset
    double residual = 0.0;
};

/// Scalar LoS response of a single active PA at x for hypothesis (x_R, zeta):
/// (eta / r) e^{-j 2 pi (r + n_eff x) / lambda}.
cplx los_point_response(const RfConstants &constants, double x, double x_r, double zeta);

/// Simulated single-PA probe sweep for the true user (adds CN(0, sigma^2)
/// noise per probe).
cvec probe_sweep(const Scenario &s, const std::vector<double> &probe_x, size_t user,
                 double noise_power, std::uint64_t seed);

/// Grid search + golden-section refinement of ||y - model(T)||^2 over the
/// LoS parameters (x_R, zeta). The fitted channel can be reconstructed at any
/// position via los_point_response.
ParameterSenseResult parameter_sense(const Scenario &s, const std::vector<double> &probe_x,
                                     const cvec &y, const SenseSettings &settings = {});

struct Codebooks {
    std::vector<std::vector<std::vector<double>>> positions; // F: candidate X matrices
    std::vector<cvec> beams;                                 // W: transmit vectors
};

struct BeamTrainResult {
    size_t best_position = 0;
    size_t best_beam = 0;
    double measured_gain = 0.0;
    double true_gain = 0.0;
    size_t measurements = 0;
};
/// Sweep every (X_i, w_j) pair, report the argmax of the noisy measured gain
/// (ties break toward the lexicographically first pair).
BeamTrainResult beam_train_exhaustive(const Scenario &s, const Codebooks &codebooks,
                                      size_t user, double noise_power, std::uint64_t seed);

struct HierarchicalSpec {
    double x_lo = 0.0, x_hi = 0.0; // served rectangle
    double y_lo = 0.0, y_hi = 0.0;
    int cells_x = 64, cells_y = 64;
    int fine_x = 8, fine_y = 8;
};

struct HierarchicalResult {
    double x = 0.0, y = 0.0;
    double measured_gain = 0.0;
    double true_gain = 0.0;
    size_t measurements = 0;
};
/// Three-stage training: binary-refined x-search, then y-search at the
/// winning x, then an exhaustive fine grid inside the winning cell. The
/// reported winner is the best over every probe taken.
HierarchicalResult beam_train_hierarchical(const std::function<double(double, double)> &gain,
                                           const HierarchicalSpec &spec, double noise_power,
                                           std::uint64_t seed);

/// Gain oracle for placing one full-radiation PA at (x, y) on a virtual
/// waveguide at the height of waveguide 0: P_t eta^2 / dist^2.
std::function<double(double, double)> pa_placement_gain(const Scenario &s, size_t user);

} // namespace passkit
