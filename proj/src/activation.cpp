// SPDX-License-Identifier: Apache-2.0

#include "passkit/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace passkit {

namespace {
constexpr double kFeasTol = 1e-9;

std::string fmt_idx(size_t i) { return std::to_string(i); }
} // namespace

ActivationMode ActivationMode::parse(const std::string &name, int m_total, double u_max) {
    if (name == "discrete")
        return discrete(m_total);
    if (name == "continuous")
        return continuous();
    if (name == "semicontinuous" || name == "semi-continuous")
        return semi_continuous(m_total, u_max);
    throw Error("activation: unknown mode '" + name + "'");
}

std::vector<double> discrete_grid(const Waveguide &w, int m_total) {
    if (m_total < 2)
        throw Error("discrete_grid: need at least 2 candidates");
    const double pitch = w.length / (m_total - 1);
    if (pitch < w.delta_min - kFeasTol)
        throw Error("discrete_grid: grid pitch " + std::to_string(pitch) +
                    " below delta_min " + std::to_string(w.delta_min));
    std::vector<double> grid(m_total);
    for (int m = 0; m < m_total; ++m)
        grid[m] = m * w.length / (m_total - 1);
    return grid;
}

Feasibility is_feasible(const std::vector<double> &x, const Waveguide &w,
                        const ActivationMode &mode) {
    for (size_t m = 0; m < x.size(); ++m) {
        if (x[m] < -kFeasTol || x[m] > w.length + kFeasTol)
            return {false, "position " + fmt_idx(m) + " outside [0, x_max]"};
        if (m > 0 && x[m] - x[m - 1] < w.delta_min - kFeasTol)
            return {false, "spacing between " + fmt_idx(m - 1) + " and " + fmt_idx(m) +
                               " below delta_min"};
    }
    if (mode.kind == ActivationMode::Kind::Discrete) {
        const auto grid = discrete_grid(w, mode.m_total);
        for (size_t m = 0; m < x.size(); ++m) {
            bool on_grid = false;
            for (double gpt : grid)
                if (std::abs(x[m] - gpt) <= kFeasTol) {
                    on_grid = true;
                    break;
                }
            if (!on_grid)
                return {false, "position " + fmt_idx(m) + " not on the discrete grid"};
        }
    } else if (mode.kind == ActivationMode::Kind::SemiContinuous) {
        if (mode.m_total < 2)
            return {false, "semi-continuous mode needs m_total >= 2"};
        const double pitch = w.length / (mode.m_total - 1);
        for (size_t m = 0; m < x.size(); ++m) {
            const double u = x[m] - static_cast<double>(m) * pitch;
            if (u < -kFeasTol || u > mode.u_max + kFeasTol)
                return {false, "offset of position " + fmt_idx(m) + " outside [0, u_max]"};
        }
    }
    return {};
}

namespace {

// Weighted-free L2 isotonic regression (pool adjacent violators).
std::vector<double> pava(const std::vector<double> &z) {
    const size_t n = z.size();
    std::vector<double> value;
    std::vector<double> weight;
    std::vector<size_t> count;
    value.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        value.push_back(z[i]);
        weight.push_back(1.0);
        count.push_back(1);
        while (value.size() > 1 && value[value.size() - 2] > value.back()) {
            const double w2 = weight.back(), v2 = value.back();
            const size_t c2 = count.back();
            value.pop_back();
            weight.pop_back();
            count.pop_back();
            const double w1 = weight.back(), v1 = value.back();
            value.back() = (w1 * v1 + w2 * v2) / (w1 + w2);
            weight.back() = w1 + w2;
            count.back() += c2;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (size_t b = 0; b < value.size(); ++b)
        out.insert(out.end(), count[b], value[b]);
    return out;
}

// Projection onto {x sorted with gaps >= delta, 0 <= x <= x_max}: shift to
// z_m = x_m - m*delta (gap cone becomes the monotone cone, box becomes the
// uniform box [0, x_max - (M-1) delta]), PAVA, clip, shift back.
std::vector<double> project_continuous(const std::vector<double> &x_raw, const Waveguide &w) {
    const size_t n = x_raw.size();
    const double hi = w.length - (static_cast<double>(n) - 1.0) * w.delta_min;
    if (hi < -kFeasTol)
        throw Error("project_feasible: infeasible scenario, (M-1) * delta_min > x_max");
    std::vector<double> z(n);
    for (size_t m = 0; m < n; ++m)
        z[m] = x_raw[m] - static_cast<double>(m) * w.delta_min;
    z = pava(z);
    std::vector<double> x(n);
    for (size_t m = 0; m < n; ++m)
        x[m] = std::clamp(z[m], 0.0, std::max(0.0, hi)) + static_cast<double>(m) * w.delta_min;
    return x;
}

// Dykstra's alternating projections between the gap cone and the per-index
// offset boxes; exact in the limit, iterated to machine-level stationarity.
std::vector<double> project_semicontinuous(const std::vector<double> &x_raw, const Waveguide &w,
                                           const ActivationMode &mode) {
    if (mode.m_total < 2)
        throw Error("project_feasible: semi-continuous mode needs m_total >= 2");
    const size_t n = x_raw.size();
    const double pitch = w.length / (mode.m_total - 1);
    std::vector<double> lo(n), hi(n);
    for (size_t m = 0; m < n; ++m) {
        lo[m] = static_cast<double>(m) * pitch;
        hi[m] = std::min(lo[m] + mode.u_max, w.length);
        if (hi[m] < lo[m] - kFeasTol)
            throw Error("project_feasible: segment box empty (u_max/grid mismatch)");
    }
    // The boxes themselves must admit gaps >= delta_min somewhere.
    for (size_t m = 1; m < n; ++m)
        if (hi[m] - lo[m - 1] < w.delta_min - kFeasTol)
            throw Error("project_feasible: infeasible semi-continuous layout");

    std::vector<double> x = x_raw;
    std::vector<double> p(n, 0.0), q(n, 0.0); // Dykstra correction terms
    const double scale = std::max(1.0, w.length);
    for (int iter = 0; iter < 2000; ++iter) {
        std::vector<double> y(n);
        for (size_t m = 0; m < n; ++m)
            y[m] = x[m] + p[m];
        // cone projection via the shift trick
        std::vector<double> z(n);
        for (size_t m = 0; m < n; ++m)
            z[m] = y[m] - static_cast<double>(m) * w.delta_min;
        z = pava(z);
        std::vector<double> c(n);
        for (size_t m = 0; m < n; ++m)
            c[m] = z[m] + static_cast<double>(m) * w.delta_min;
        for (size_t m = 0; m < n; ++m)
            p[m] = y[m] - c[m];

        double change = 0.0;
        for (size_t m = 0; m < n; ++m) {
            const double b = std::clamp(c[m] + q[m], lo[m], hi[m]);
            q[m] = c[m] + q[m] - b;
            change = std::max(change, std::abs(b - x[m]));
            x[m] = b;
        }
        if (change < 1e-13 * scale && iter > 0)
            break;
    }
    return x;
}

// Discrete mode: choose strictly increasing grid indices minimizing the
// squared displacement (O(M * M_total) dynamic program).
std::vector<double> project_discrete(const std::vector<double> &x_raw, const Waveguide &w,
                                     const ActivationMode &mode) {
    const auto grid = discrete_grid(w, mode.m_total);
    const size_t n = x_raw.size();
    const size_t g = grid.size();
    if (n > g)
        throw Error("project_feasible: more PAs than discrete candidates");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(n, std::vector<double>(g, inf));
    std::vector<std::vector<int>> from(n, std::vector<int>(g, -1));
    for (size_t j = 0; j < g; ++j) {
        const double d = x_raw[0] - grid[j];
        cost[0][j] = d * d;
    }
    for (size_t m = 1; m < n; ++m) {
        double best_prev = inf;
        int best_idx = -1;
        for (size_t j = m; j < g; ++j) {
            if (cost[m - 1][j - 1] < best_prev) {
                best_prev = cost[m - 1][j - 1];
                best_idx = static_cast<int>(j - 1);
            }
            const double d = x_raw[m] - grid[j];
            cost[m][j] = best_prev + d * d;
            from[m][j] = best_idx;
        }
    }
    size_t j_best = n - 1;
    for (size_t j = n - 1; j < g; ++j)
        if (cost[n - 1][j] < cost[n - 1][j_best])
            j_best = j;
    std::vector<double> x(n);
    int j = static_cast<int>(j_best);
    for (size_t m = n; m-- > 0;) {
        x[m] = grid[j];
        j = m > 0 ? from[m][j] : -1;
    }
    return x;
}

} // namespace

std::vector<double> project_feasible(const std::vector<double> &x_raw, const Waveguide &w,
                                     const ActivationMode &mode) {
    if (x_raw.empty())
        return {};
    if (!std::is_sorted(x_raw.begin(), x_raw.end()))
        throw Error("project_feasible: input must be sorted");
    if (is_feasible(x_raw, w, mode))
        return x_raw;
    switch (mode.kind) {
    case ActivationMode::Kind::Continuous:
        return project_continuous(x_raw, w);
    case ActivationMode::Kind::SemiContinuous:
        return project_semicontinuous(x_raw, w, mode);
    case ActivationMode::Kind::Discrete:
        return project_discrete(x_raw, w, mode);
    }
    throw Error("project_feasible: unreachable");
}

} // namespace passkit
