// SPDX-License-Identifier: Apache-2.0

#include "passkit/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace passkit {
namespace quad {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)> &f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b)
        return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

const GaussRule &gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    if (n < 1)
        throw Error("gauss_legendre: order must be >= 1");

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, refined by Newton on P_n.
        double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

double gauss2d_panels(const std::function<double(double, double)> &f, double ax, double bx,
                      double ay, double by, int panels, const GaussRule &rule) {
    const double hx = (bx - ax) / panels;
    const double hy = (by - ay) / panels;
    double total = 0.0;
    for (int px = 0; px < panels; ++px) {
        const double x0 = ax + px * hx;
        for (int py = 0; py < panels; ++py) {
            const double y0 = ay + py * hy;
            double s = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                const double x = x0 + 0.5 * hx * (rule.nodes[i] + 1.0);
                double row = 0.0;
                for (size_t j = 0; j < rule.nodes.size(); ++j) {
                    const double y = y0 + 0.5 * hy * (rule.nodes[j] + 1.0);
                    row += rule.weights[j] * f(x, y);
                }
                s += rule.weights[i] * row;
            }
            total += 0.25 * hx * hy * s;
        }
    }
    return total;
}

} // namespace

double gauss2d(const std::function<double(double, double)> &f, double ax, double bx,
               double ay, double by, double abs_tol, int points, int max_level) {
    const GaussRule &rule = gauss_legendre(points);
    double prev = gauss2d_panels(f, ax, bx, ay, by, 1, rule);
    int panels = 2;
    for (int level = 1; level <= max_level; ++level, panels *= 2) {
        const double cur = gauss2d_panels(f, ax, bx, ay, by, panels, rule);
        if (std::abs(cur - prev) < abs_tol)
            return cur;
        prev = cur;
    }
    return prev;
}

} // namespace quad
} // namespace passkit
