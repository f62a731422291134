// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "passkit/common.hpp"

namespace passkit {
namespace quad {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance.
double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                        double abs_tol = 1e-9, int max_depth = 48);

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule &gauss_legendre(int n);

/// Tensor-product Gauss-Legendre on [ax,bx] x [ay,by] with dyadic panel
/// refinement until two successive levels agree within abs_tol.
double gauss2d(const std::function<double(double, double)> &f, double ax, double bx,
               double ay, double by, double abs_tol = 1e-8, int points = 32,
               int max_level = 6);

} // namespace quad
} // namespace passkit
