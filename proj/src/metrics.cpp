// SPDX-License-Identifier: Apache-2.0

#include "passkit/metrics.hpp"

#include <cmath>
#include <random>

#include "passkit/quad.hpp"
#include "passkit/rng.hpp"

namespace passkit {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_positive(double v, const char *name) {
    if (!(v > 0.0))
        throw Error(std::string("metrics: ") + name + " must be > 0");
}

double log2p1(double x) { return std::log1p(x) / kLn2; }

} // namespace

void ServiceRegion::validate() const {
    if (!(dx > 0.0) || !(dy > 0.0))
        throw Error("service region: side lengths must be > 0");
}

double ergodic_rate_pass(double d, double z_g, double snr, double eta) {
    check_positive(d, "D");
    check_positive(z_g, "z_G");
    if (snr < 0.0 || eta <= 0.0)
        throw Error("metrics: snr must be >= 0 and eta > 0");
    const double s = snr * eta;
    // even integrand: integrate the half range
    const double half = quad::adaptive_simpson(
        [&](double y) { return log2p1(s / (y * y + z_g * z_g)); }, 0.0, 0.5 * d, 1e-10 * d);
    return 2.0 * half / d;
}

double ergodic_rate_fixed(double d, double z_g, double snr, double eta) {
    check_positive(d, "D");
    check_positive(z_g, "z_G");
    const double s = snr * eta;
    // symmetric in both axes: one quadrant suffices
    const double quadrant = quad::gauss2d(
        [&](double x, double y) { return log2p1(s / (x * x + y * y + z_g * z_g)); }, 0.0,
        0.5 * d, 0.0, 0.5 * d, 1e-9 * d * d);
    return 4.0 * quadrant / (d * d);
}

double high_snr_gap_bound(double d, double z_g) {
    check_positive(d, "D");
    check_positive(z_g, "z_G");
    const double ratio = d / (2.0 * z_g);
    return 1.0 / kLn2 - (4.0 * z_g / (d * kLn2)) * std::atan(ratio) +
           (4.0 * z_g * z_g / (d * d)) * std::log2(1.0 + ratio * ratio);
}

double coverage_pass(double d, double z_g, double snr, double eta, double gamma0) {
    check_positive(d, "D");
    check_positive(z_g, "z_G");
    check_positive(gamma0, "gamma0");
    const double rad2 = snr * eta / gamma0 - z_g * z_g;
    if (rad2 <= 0.0)
        return 0.0;
    const double y_half = std::min(0.5 * d, std::sqrt(rad2));
    return 2.0 * y_half / d;
}

McEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0)
        throw Error("wilson_interval: no trials");
    const double z = 2.5758293035489004; // 99%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double center = (p + 0.5 * z2n) / (1.0 + z2n);
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / (1.0 + z2n);
    McEstimate e;
    e.p = p;
    e.lo = std::max(0.0, center - half);
    e.hi = std::min(1.0, center + half);
    e.trials = trials;
    return e;
}

McEstimate coverage_fixed_mc(double d, double z_g, double snr, double eta, double gamma0,
                             std::uint64_t trials, std::uint64_t seed) {
    check_positive(d, "D");
    check_positive(gamma0, "gamma0");
    std::uint64_t covered = 0;
    constexpr std::uint64_t batch = 1 << 16;
    std::uint64_t done = 0;
    for (std::uint64_t b = 0; done < trials; ++b) {
        auto gen = rng::engine(seed, b);
        std::uniform_real_distribution<double> u(-0.5 * d, 0.5 * d);
        const std::uint64_t todo = std::min(batch, trials - done);
        for (std::uint64_t i = 0; i < todo; ++i) {
            const double x = u(gen), y = u(gen);
            const double r2 = x * x + y * y + z_g * z_g;
            if (snr * eta / r2 > gamma0)
                ++covered;
        }
        done += todo;
    }
    return wilson_interval(covered, trials);
}

OutageResult outage_pass(const ServiceRegion &region, double z_g, double snr, double eta,
                         double beta, double r_target) {
    region.validate();
    check_positive(z_g, "z_G");
    check_positive(r_target, "R_target");
    if (beta < 0.0)
        throw Error("metrics: beta must be >= 0");
    const double dy = region.dy;
    const double tau1_sq = snr * eta / (std::exp2(r_target) - 1.0);

    auto surv = [&](double y) { return std::exp(-beta * std::hypot(y, z_g)); };
    // blockage term over the whole strip (even integrand, half range)
    const double blocked =
        2.0 / dy *
        quad::adaptive_simpson([&](double y) { return 1.0 - surv(y); }, 0.0, 0.5 * dy,
                               1e-11 * dy);

    OutageResult res;
    res.high_snr = blocked;

    double snr_term = 0.0;
    if (tau1_sq <= z_g * z_g) {
        // even the best position misses the SNR target everywhere
        snr_term = 2.0 / dy *
                   quad::adaptive_simpson(surv, 0.0, 0.5 * dy, 1e-11 * dy);
    } else {
        const double y_tau = std::sqrt(tau1_sq - z_g * z_g);
        if (y_tau < 0.5 * dy)
            snr_term = 2.0 / dy *
                       quad::adaptive_simpson(surv, y_tau, 0.5 * dy, 1e-11 * dy);
    }
    res.outage = blocked + snr_term;
    return res;
}

McEstimate outage_pass_mc(const ServiceRegion &region, double z_g, double snr, double eta,
                          double beta, double r_target, std::uint64_t trials,
                          std::uint64_t seed) {
    region.validate();
    const double thr = std::exp2(r_target) - 1.0;
    std::uint64_t outages = 0;
    constexpr std::uint64_t batch = 1 << 16;
    std::uint64_t done = 0;
    for (std::uint64_t b = 0; done < trials; ++b) {
        auto gen = rng::engine(seed, b);
        std::uniform_real_distribution<double> uy(-0.5 * region.dy, 0.5 * region.dy);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const std::uint64_t todo = std::min(batch, trials - done);
        for (std::uint64_t i = 0; i < todo; ++i) {
            const double y = uy(gen);
            const double r = std::hypot(y, z_g);
            const bool los = u01(gen) < std::exp(-beta * r);
            if (!los || snr * eta / (r * r) < thr)
                ++outages;
        }
        done += todo;
    }
    return wilson_interval(outages, trials);
}

double outage_fixed_highsnr(const ServiceRegion &region, double z_g, double beta) {
    region.validate();
    check_positive(z_g, "z_G");
    // symmetric in both axes
    const double quadrant = quad::gauss2d(
        [&](double x, double y) {
            return 1.0 - std::exp(-beta * std::sqrt(x * x + y * y + z_g * z_g));
        },
        0.0, 0.5 * region.dx, 0.0, 0.5 * region.dy, 1e-10 * region.dx * region.dy);
    return 4.0 * quadrant / (region.dx * region.dy);
}

McEstimate outage_fixed_mc(const ServiceRegion &region, double z_g, double snr, double eta,
                           double beta, double r_target, std::uint64_t trials,
                           std::uint64_t seed) {
    region.validate();
    const double thr = std::exp2(r_target) - 1.0;
    std::uint64_t outages = 0;
    constexpr std::uint64_t batch = 1 << 16;
    std::uint64_t done = 0;
    for (std::uint64_t b = 0; done < trials; ++b) {
        auto gen = rng::engine(seed, b + (1ULL << 32));
        std::uniform_real_distribution<double> ux(-0.5 * region.dx, 0.5 * region.dx);
        std::uniform_real_distribution<double> uy(-0.5 * region.dy, 0.5 * region.dy);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const std::uint64_t todo = std::min(batch, trials - done);
        for (std::uint64_t i = 0; i < todo; ++i) {
            const double x = ux(gen), y = uy(gen);
            const double r2 = x * x + y * y + z_g * z_g;
            const bool los = u01(gen) < std::exp(-beta * std::sqrt(r2));
            if (!los || snr * eta / r2 < thr)
                ++outages;
        }
        done += todo;
    }
    return wilson_interval(outages, trials);
}

} // namespace passkit
