// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "passkit/beamforming.hpp"
#include "passkit/geometry.hpp"

namespace passkit {

// Two-user uplink/downlink capacity and OMA rate regions on a single pinched
// waveguide, with pinching-position optimization of the boundary.

struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Convex hull of the downward closure of a set of rate points (each point is
/// augmented with its axis projections and the origin), returned as a CCW
/// polygon starting at the origin.
std::vector<RatePair> convex_hull(const std::vector<RatePair> &points);

struct RateRegion {
    std::vector<RatePair> points; // raw achievable points
    std::vector<RatePair> hull;   // CCW polygon incl. origin and intercepts

    static RateRegion from_points(std::vector<RatePair> pts);
    double area() const;
    double max_r1() const;
    double max_r2() const;
    bool contains(const RatePair &p, double tol = 1e-9) const;
};

/// Inner ⊆ outer up to slack on the inner hull vertices.
bool region_subset(const RateRegion &inner, const RateRegion &outer, double tol = 1e-9);

struct DecodingOrder {
    int first = 1;  // user decoded first (suffers interference)
    int second = 0; // user decoded second (clean after SIC)
};

struct CapacitySettings {
    int alpha_points = 41;     // rate-profile grid
    int single_pinch_grid = 801;
    int bandwidth_grid = 257;  // FDMA split search
    SearchSettings search{200, 2, 1e-6, 8, {}};
};

/// Squared effective uplink gain |h_k(x)|^2 with the 1/sqrt(M) normalization
/// (equal power radiation is hard-wired here).
double uplink_gain2(const Scenario &s, const std::vector<double> &x, size_t user);

/// Pentagon C^U(x) for fixed PA positions: vertices (0,0), (C1,0), the two SIC
/// corners, and (0,C2).
RateRegion uplink_pentagon(const Scenario &s, const std::vector<double> &x, double p1,
                           double p2);

/// M = 1 capacity region: union of pentagons over x in [x_R1, x_R2].
RateRegion single_pinch_capacity(const Scenario &s, double p1, double p2, int grid_res);

/// Pareto points for one decoding order over an alpha grid (rate-profile
/// method, element-wise alternating optimization of x).
std::vector<RatePair> rate_profile_boundary(const Scenario &s, double p1, double p2,
                                            int num_pas, const DecodingOrder &order,
                                            const std::vector<double> &alphas,
                                            const CapacitySettings &settings = {});

/// Capacity region (inner bound for M > 1; exact grid construction for M = 1).
RateRegion capacity_region(const Scenario &s, double p1, double p2, int num_pas,
                           const CapacitySettings &settings = {});

enum class OmaMode { Tdma, Fdma };
RateRegion oma_region(const Scenario &s, double p1, double p2, int num_pas, OmaMode mode,
                      const CapacitySettings &settings = {});

/// Downlink region via uplink-downlink duality: hull over a grid of power
/// splits P1 + P2 = total_power of the corresponding uplink regions.
RateRegion downlink_region(const Scenario &s, double total_power, int num_pas,
                           int split_points, const CapacitySettings &settings = {});

/// Baseline: pentagon of a single fixed antenna at the given position.
RateRegion fixed_antenna_region(const Scenario &s, double x_fixed, double p1, double p2);

} // namespace passkit
