// SPDX-License-Identifier: Apache-2.0

#include "passkit/capacity.hpp"

#include <algorithm>
#include <cmath>

namespace passkit {

namespace {

double cross(const RatePair &o, const RatePair &a, const RatePair &b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

void require_two_users(const Scenario &s) {
    if (s.users.size() != 2)
        throw Error("capacity: two-user scenarios only");
    if (s.waveguides.empty())
        throw Error("capacity: scenario has no waveguide");
}

double rate(double snr) { return std::log2(1.0 + snr); }

} // namespace

std::vector<RatePair> convex_hull(const std::vector<RatePair> &points) {
    if (points.empty())
        throw Error("convex_hull: need at least one point");
    std::vector<RatePair> pts;
    pts.reserve(3 * points.size() + 1);
    pts.push_back({0.0, 0.0});
    for (const auto &p : points) {
        if (p.r1 < -1e-12 || p.r2 < -1e-12)
            throw Error("convex_hull: rates must be non-negative");
        pts.push_back(p);
        pts.push_back({p.r1, 0.0}); // downward closure via axis projections
        pts.push_back({0.0, p.r2});
    }
    std::sort(pts.begin(), pts.end(), [](const RatePair &a, const RatePair &b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const RatePair &a, const RatePair &b) {
                              return a.r1 == b.r1 && a.r2 == b.r2;
                          }),
              pts.end());
    if (pts.size() <= 2)
        return pts;

    // monotone chain
    std::vector<RatePair> lower, upper;
    for (const auto &p : pts) {
        while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), p) <= 0.0)
            lower.pop_back();
        lower.push_back(p);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), *it) <= 0.0)
            upper.pop_back();
        upper.push_back(*it);
    }
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    // rotate so the origin leads
    auto org = std::min_element(lower.begin(), lower.end(),
                                [](const RatePair &a, const RatePair &b) {
                                    return a.r1 + a.r2 < b.r1 + b.r2;
                                });
    std::rotate(lower.begin(), org, lower.end());
    return lower;
}

RateRegion RateRegion::from_points(std::vector<RatePair> pts) {
    RateRegion r;
    r.hull = convex_hull(pts);
    r.points = std::move(pts);
    return r;
}

double RateRegion::area() const {
    double acc = 0.0;
    for (size_t i = 0; i < hull.size(); ++i) {
        const RatePair &a = hull[i];
        const RatePair &b = hull[(i + 1) % hull.size()];
        acc += a.r1 * b.r2 - b.r1 * a.r2;
    }
    return 0.5 * std::abs(acc);
}

double RateRegion::max_r1() const {
    double v = 0.0;
    for (const auto &p : hull)
        v = std::max(v, p.r1);
    return v;
}

double RateRegion::max_r2() const {
    double v = 0.0;
    for (const auto &p : hull)
        v = std::max(v, p.r2);
    return v;
}

bool RateRegion::contains(const RatePair &p, double tol) const {
    if (p.r1 < -tol || p.r2 < -tol)
        return false;
    if (hull.size() == 1)
        return p.r1 <= hull[0].r1 + tol && p.r2 <= hull[0].r2 + tol;
    if (hull.size() == 2) {
        // degenerate segment region: inside its bounding box (downward closed)
        const double m1 = std::max(hull[0].r1, hull[1].r1);
        const double m2 = std::max(hull[0].r2, hull[1].r2);
        // point must lie under the segment (or the box edge when axis-aligned)
        if (p.r1 > m1 + tol || p.r2 > m2 + tol)
            return false;
        return true;
    }
    for (size_t i = 0; i < hull.size(); ++i) {
        const RatePair &a = hull[i];
        const RatePair &b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < -tol * std::max(1.0, std::abs(b.r1 - a.r1) + std::abs(b.r2 - a.r2)))
            return false;
    }
    return true;
}

bool region_subset(const RateRegion &inner, const RateRegion &outer, double tol) {
    for (const auto &v : inner.hull)
        if (!outer.contains(v, tol))
            return false;
    return true;
}

double uplink_gain2(const Scenario &s, const std::vector<double> &x, size_t user) {
    // receive_power uses equal power fractions 1/M, i.e. the 1/sqrt(M)
    // amplitude normalization of the uplink effective gain
    return receive_power(s, 0, x, user) / s.constants.transmit_power;
}

RateRegion uplink_pentagon(const Scenario &s, const std::vector<double> &x, double p1,
                           double p2) {
    require_two_users(s);
    if (p1 < 0.0 || p2 < 0.0)
        throw Error("uplink_pentagon: powers must be >= 0");
    const double sigma2 = s.constants.noise_power;
    const double g1 = uplink_gain2(s, x, 0);
    const double g2 = uplink_gain2(s, x, 1);
    const double c1 = rate(p1 * g1 / sigma2);
    const double c2 = rate(p2 * g2 / sigma2);
    const double csum = rate((p1 * g1 + p2 * g2) / sigma2);
    RateRegion r;
    r.points = {{0.0, 0.0},
                {c1, 0.0},
                {c1, csum - c1},
                {csum - c2, c2},
                {0.0, c2}};
    r.hull = convex_hull(r.points);
    return r;
}

RateRegion single_pinch_capacity(const Scenario &s, double p1, double p2, int grid_res) {
    require_two_users(s);
    if (grid_res < 1)
        throw Error("single_pinch_capacity: grid_res must be >= 1");
    const double lo = std::clamp(std::min(s.users[0].x, s.users[1].x), 0.0,
                                 s.waveguides[0].length);
    const double hi = std::clamp(std::max(s.users[0].x, s.users[1].x), 0.0,
                                 s.waveguides[0].length);
    std::vector<RatePair> pts;
    for (int i = 0; i < grid_res; ++i) {
        const double x =
            grid_res == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(grid_res - 1);
        const RateRegion pent = uplink_pentagon(s, {x}, p1, p2);
        pts.insert(pts.end(), pent.points.begin(), pent.points.end());
    }
    return RateRegion::from_points(std::move(pts));
}

namespace {

struct SicRates {
    double first;  // rate of the first decoded user (interference limited)
    double second; // rate of the second decoded user (after cancellation)
};

SicRates sic_rates(const Scenario &s, const std::vector<double> &x, double p1, double p2,
                   const DecodingOrder &order) {
    const double sigma2 = s.constants.noise_power;
    const double pw[2] = {p1, p2};
    const double gf = uplink_gain2(s, x, order.first);
    const double gs = uplink_gain2(s, x, order.second);
    const double r_first = rate(pw[order.first] * gf / (pw[order.second] * gs + sigma2));
    const double r_second = rate(pw[order.second] * gs / sigma2);
    return {r_first, r_second};
}

std::vector<std::vector<double>> profile_inits(const Scenario &s, int num_pas) {
    std::vector<std::vector<double>> inits;
    inits.push_back(position_refinement(s, 0, 0, num_pas).x);
    inits.push_back(position_refinement(s, 0, 1, num_pas).x);
    // midpoint init
    Scenario mid = s;
    mid.users[0].x = 0.5 * (s.users[0].x + s.users[1].x);
    inits.push_back(position_refinement(mid, 0, 0, num_pas).x);
    return inits;
}

} // namespace

std::vector<RatePair> rate_profile_boundary(const Scenario &s, double p1, double p2,
                                            int num_pas, const DecodingOrder &order,
                                            const std::vector<double> &alphas,
                                            const CapacitySettings &settings) {
    require_two_users(s);
    if (order.first == order.second || order.first < 0 || order.first > 1 || order.second < 0 ||
        order.second > 1)
        throw Error("rate_profile_boundary: order must be a permutation of {0, 1}");

    const auto inits = profile_inits(s, num_pas);
    std::vector<RatePair> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        if (alpha < 0.0 || alpha > 1.0)
            throw Error("rate_profile_boundary: alpha must lie in [0, 1]");
        // max R s.t. R_first >= alpha R, R_second >= (1-alpha) R is, for fixed
        // x, exactly min(R_first/alpha, R_second/(1-alpha))
        auto profile_value = [&](const std::vector<std::vector<double>> &pos) {
            const SicRates r = sic_rates(s, pos[0], p1, p2, order);
            if (alpha <= 0.0)
                return r.second;
            if (alpha >= 1.0)
                return r.first;
            return std::min(r.first / alpha, r.second / (1.0 - alpha));
        };
        double best_val = -1.0;
        std::vector<double> best_x;
        for (const auto &init : inits) {
            std::vector<std::vector<double>> pos = {init};
            const double v = elementwise_optimize(s, pos, profile_value, settings.search);
            if (v > best_val) {
                best_val = v;
                best_x = pos[0];
            }
        }
        const SicRates r = sic_rates(s, best_x, p1, p2, order);
        RatePair pair;
        (order.first == 0 ? pair.r1 : pair.r2) = r.first;
        (order.second == 0 ? pair.r1 : pair.r2) = r.second;
        out.push_back(pair);
    }
    return out;
}

namespace {

std::vector<double> alpha_grid(int n) {
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i)
        a[i] = i / static_cast<double>(n - 1);
    return a;
}

} // namespace

RateRegion capacity_region(const Scenario &s, double p1, double p2, int num_pas,
                           const CapacitySettings &settings) {
    require_two_users(s);
    if (num_pas == 1)
        return single_pinch_capacity(s, p1, p2, settings.single_pinch_grid);
    const auto alphas = alpha_grid(settings.alpha_points);
    std::vector<RatePair> pts;
    for (const DecodingOrder order : {DecodingOrder{1, 0}, DecodingOrder{0, 1}}) {
        const auto b = rate_profile_boundary(s, p1, p2, num_pas, order, alphas, settings);
        pts.insert(pts.end(), b.begin(), b.end());
    }
    return RateRegion::from_points(std::move(pts));
}

RateRegion oma_region(const Scenario &s, double p1, double p2, int num_pas, OmaMode mode,
                      const CapacitySettings &settings) {
    require_two_users(s);
    const double sigma2 = s.constants.noise_power;

    // per-user optimal positions (the OMA slots/bands can be reconfigured)
    const std::vector<double> x1 = single_waveguide_optimize(s, 0, 0, num_pas, settings.search).x;
    const std::vector<double> x2 = single_waveguide_optimize(s, 0, 1, num_pas, settings.search).x;
    const double c1 = rate(p1 * uplink_gain2(s, x1, 0) / sigma2);
    const double c2 = rate(p2 * uplink_gain2(s, x2, 1) / sigma2);

    if (mode == OmaMode::Tdma) {
        // time sharing of the two single-user optima; hulling does the rest
        return RateRegion::from_points({{c1, 0.0}, {0.0, c2}});
    }

    // FDMA: bandwidth split b with shared positions; rate_k = b_k log2(1 +
    // P_k g_k / (b_k sigma^2)). Boundary traced with the rate-profile trick.
    const auto inits = profile_inits(s, num_pas);
    std::vector<RatePair> pts = {{c1, 0.0}, {0.0, c2}};
    const auto alphas = alpha_grid(settings.alpha_points);
    for (double alpha : alphas) {
        if (alpha <= 0.0 || alpha >= 1.0)
            continue;
        auto best_over_b = [&](const std::vector<std::vector<double>> &pos, double *b_out) {
            const double g1 = uplink_gain2(s, pos[0], 0);
            const double g2 = uplink_gain2(s, pos[0], 1);
            double best = -1.0, best_b = 0.5;
            for (int i = 1; i < settings.bandwidth_grid - 1; ++i) {
                const double b = i / static_cast<double>(settings.bandwidth_grid - 1);
                const double r1 = b * rate(p1 * g1 / (b * sigma2));
                const double r2 = (1.0 - b) * rate(p2 * g2 / ((1.0 - b) * sigma2));
                const double v = std::min(r1 / alpha, r2 / (1.0 - alpha));
                if (v > best) {
                    best = v;
                    best_b = b;
                }
            }
            if (b_out)
                *b_out = best_b;
            return best;
        };
        double best_val = -1.0;
        std::vector<double> best_x;
        for (const auto &init : inits) {
            std::vector<std::vector<double>> pos = {init};
            const double v = elementwise_optimize(
                s, pos,
                [&](const std::vector<std::vector<double>> &p) {
                    return best_over_b(p, nullptr);
                },
                settings.search);
            if (v > best_val) {
                best_val = v;
                best_x = pos[0];
            }
        }
        double b = 0.5;
        std::vector<std::vector<double>> pos = {best_x};
        best_over_b(pos, &b);
        const double g1 = uplink_gain2(s, best_x, 0);
        const double g2 = uplink_gain2(s, best_x, 1);
        pts.push_back({b * rate(p1 * g1 / (b * sigma2)),
                       (1.0 - b) * rate(p2 * g2 / ((1.0 - b) * sigma2))});
    }
    return RateRegion::from_points(std::move(pts));
}

RateRegion downlink_region(const Scenario &s, double total_power, int num_pas,
                           int split_points, const CapacitySettings &settings) {
    require_two_users(s);
    if (split_points < 1)
        throw Error("downlink_region: need at least one power split");
    if (!(total_power > 0.0))
        throw Error("downlink_region: total power must be > 0");
    std::vector<RatePair> pts;
    for (int i = 0; i < split_points; ++i) {
        const double t =
            split_points == 1 ? 0.5 : i / static_cast<double>(split_points - 1);
        const RateRegion up =
            capacity_region(s, t * total_power, (1.0 - t) * total_power, num_pas, settings);
        pts.insert(pts.end(), up.hull.begin(), up.hull.end());
    }
    return RateRegion::from_points(std::move(pts));
}

RateRegion fixed_antenna_region(const Scenario &s, double x_fixed, double p1, double p2) {
    return uplink_pentagon(s, {x_fixed}, p1, p2);
}

} // namespace passkit
