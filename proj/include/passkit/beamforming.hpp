// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "passkit/channel.hpp"

namespace passkit {

// Pinching-beamforming optimizers: element-wise coordinate search, the
// phase-alignment refinement construction, scaling-law evaluators, joint
// transmit designs and the three multi-user protocols. All optimizers are
// deterministic given their settings and accept only improving moves, so the
// objective trace is non-decreasing.

struct SearchSettings {
    int grid_points = 400;   // 1-D grid points per antenna and pass
    int refine_passes = 2;   // coarse-to-fine zooms (x10 shrink each)
    double tolerance = 1e-6; // relative objective change that ends sweeping
    int max_sweeps = 50;
    std::vector<size_t> sweep_order; // empty = ascending antenna index

    void validate() const;
};

struct SearchResult {
    std::vector<double> x;
    double power = 0.0;        // receive power at x, W
    int sweeps = 0;
    std::vector<double> trace; // objective after each accepted improvement
};

/// Receive power |h^H g|^2 P_t for one waveguide and user.
double receive_power(const Scenario &s, size_t waveguide, const std::vector<double> &x,
                     const std::vector<double> &rho, size_t user);

/// Equal-power receive power (rho = 1/M).
double receive_power(const Scenario &s, size_t waveguide, const std::vector<double> &x,
                     size_t user);

/// Element-wise 1-D search on the single-waveguide receive power. Starts from
/// `init` when given, otherwise from a uniform delta_min array centered on the
/// user projection.
SearchResult elementwise_search(const Scenario &s, size_t waveguide, size_t user, int num_pas,
                                const SearchSettings &settings = {},
                                const std::optional<std::vector<double>> &init = std::nullopt);

/// Phase-alignment refinement: uniform delta_min array centered on the user
/// projection, each PA nudged to the nearest total-phase-aligned position that
/// keeps the spacing feasible. Falls back to the unperturbed array if the
/// aligned one is not better.
SearchResult position_refinement(const Scenario &s, size_t waveguide, size_t user, int num_pas);

/// Best of refinement and element-wise search (shared single-user workhorse).
SearchResult single_waveguide_optimize(const Scenario &s, size_t waveguide, size_t user,
                                       int num_pas, const SearchSettings &settings = {});

/// Closed-form approximation of the maximum receive power:
/// (2 eta^2 P_t / (zeta delta_min)) f_ub(M delta_min / (2 zeta)),
/// f_ub(x) = ln^2(sqrt(1+x^2)+x) / x.
double max_power_approx(int num_pas, double delta_min, double zeta, double eta, double p_t);
double f_ub(double x);

struct OptimalPas {
    int formula; // round-to-even of 6.64 zeta / delta_min
    int argmax;  // argmax of max_power_approx over even M up to 2x the formula
};
OptimalPas optimal_num_pas(double zeta, double delta_min);

struct ScalingPoint {
    int num_pas;
    double p_opt;    // measured via position refinement
    double p_approx; // closed form
    double scaled;   // p_opt * M / ln^2 M
};
std::vector<ScalingPoint> scaling_law_curve(const Scenario &s, size_t waveguide, size_t user,
                                            const std::vector<int> &num_pas_list);

/// MRT beamformer w = sqrt(P_t) e^* / ||e|| for a row of per-waveguide
/// effective gains e (received amplitude is sum_n e_n w_n).
cvec mrt(const cvec &h_eff, double p_t);

/// Per-waveguide effective gains e_n = h_n^H g_n for a user (equal power).
cvec effective_gains(const Scenario &s, const std::vector<std::vector<double>> &positions,
                     size_t user);

struct SubConnectedResult {
    std::vector<std::vector<double>> positions;
    cvec w;
    double p_r = 0.0;
};
SubConnectedResult subconnected_optimize(const Scenario &s, size_t user, int num_pas,
                                         const SearchSettings &settings = {});

struct FullyConnectedResult {
    std::vector<std::vector<double>> positions;
    Eigen::MatrixXcd w_rf; // N x N_RF, entries of modulus 1/sqrt(N)
    Eigen::VectorXcd w_bb; // ||w_bb||^2 <= P_t
    double p_r = 0.0;
};
FullyConnectedResult fullyconnected_optimize(const Scenario &s, size_t user, int num_pas,
                                             int num_rf, const SearchSettings &settings = {});

enum class MuProtocol { WaveguideSwitching, WaveguideDivision, WaveguideMultiplexing };

struct MuResult {
    std::vector<std::vector<double>> positions;
    std::vector<cvec> w;             // per-user beamformers over waveguides
    std::vector<double> power_alloc; // WD power split nu_k
    std::vector<double> user_rates;  // weighted protocol rates
    double wsr = 0.0;
    std::string beamformer;          // WM: winning heuristic (mrt/zf/mmse)
    std::vector<double> trace;       // accepted objective values, non-decreasing
};

MuResult ws_wsr(const Scenario &s, const std::vector<double> &weights, int num_pas,
                const SearchSettings &settings = {});
MuResult wd_wsr(const Scenario &s, const std::vector<double> &weights, int num_pas,
                const SearchSettings &settings = {});
MuResult wm_wsr(const Scenario &s, const std::vector<double> &weights, int num_pas,
                const SearchSettings &settings = {});

/// Generic coordinate-descent driver shared by the protocol optimizers and the
/// wideband module: sweeps every (waveguide, PA) coordinate with a gridded
/// 1-D line search, accepting only improving moves.
double elementwise_optimize(const Scenario &s,
                            std::vector<std::vector<double>> &positions,
                            const std::function<double(const std::vector<std::vector<double>> &)>
                                &objective,
                            const SearchSettings &settings, std::vector<double> *trace = nullptr);

} // namespace passkit
