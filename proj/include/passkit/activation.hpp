// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "passkit/geometry.hpp"

namespace passkit {

// Feasibility sets and projections for PA activation. Grid indices are
// 0-based throughout.

struct ActivationMode {
    enum class Kind { Discrete, Continuous, SemiContinuous };
    Kind kind = Kind::Continuous;
    int m_total = 0;      // discrete: number of grid candidates (>= 2)
    double u_max = 0.0;   // semi-continuous: maximum per-segment offset

    static ActivationMode discrete(int m_total) { return {Kind::Discrete, m_total, 0.0}; }
    static ActivationMode continuous() { return {Kind::Continuous, 0, 0.0}; }
    static ActivationMode semi_continuous(int m_total, double u_max) {
        return {Kind::SemiContinuous, m_total, u_max};
    }
    /// Parse "discrete" | "continuous" | "semicontinuous" (config key `activation`).
    static ActivationMode parse(const std::string &name, int m_total = 0, double u_max = 0.0);
};

/// Candidate positions m * x_max / (M_total - 1), m = 0..M_total-1.
/// Throws when the grid pitch falls below delta_min.
std::vector<double> discrete_grid(const Waveguide &w, int m_total);

struct Feasibility {
    bool ok = true;
    std::string violation; // first violated constraint, empty when ok
    explicit operator bool() const { return ok; }
};

/// Check a sorted position vector against range, spacing and (for
/// semi-continuous) per-segment offset constraints. Violations are data,
/// not errors.
Feasibility is_feasible(const std::vector<double> &x, const Waveguide &w,
                        const ActivationMode &mode);

/// Euclidean projection of x_raw (sorted) onto the feasible set of the mode.
/// Continuous mode solves the isotonic-with-gap projection exactly by a
/// shift-and-clip sweep; semi-continuous uses Dykstra's alternating
/// projections; discrete assigns to grid nodes by dynamic programming.
/// Throws when the scenario itself is infeasible ((M-1) delta_min > x_max).
std::vector<double> project_feasible(const std::vector<double> &x_raw, const Waveguide &w,
                                     const ActivationMode &mode);

} // namespace passkit
