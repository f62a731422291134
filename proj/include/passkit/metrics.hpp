// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "passkit/common.hpp"

namespace passkit {

// Stochastic-geometry performance of a single-PA link serving a uniformly
// distributed user: ergodic rate, coverage, and blockage-aware outage, for
// PASS (antenna slides to the user's projection) versus a fixed center
// antenna. `snr` is P/sigma^2 and `eta` the reference power gain at 1 m.

struct ServiceRegion {
    double dx = 0.0; // side along the x-axis, m
    double dy = 0.0; // side along the waveguide (y) axis, m
    static ServiceRegion square(double d) { return {d, d}; }
    void validate() const;
};

struct BlockageModel {
    double beta = 0.0; // LoS survives with probability e^{-beta r}
};

/// (1/D) Int log2(1 + snr eta / (y^2 + z^2)) dy over y in [-D/2, D/2].
double ergodic_rate_pass(double d, double z_g, double snr, double eta);

/// (1/D^2) Int Int log2(1 + snr eta / (x^2 + y^2 + z^2)) dx dy.
double ergodic_rate_fixed(double d, double z_g, double snr, double eta);

/// Closed-form lower bound on the high-SNR rate gap between the two systems.
double high_snr_gap_bound(double d, double z_g);

/// Closed-form coverage probability of the PASS link for threshold gamma0.
double coverage_pass(double d, double z_g, double snr, double eta, double gamma0);

struct McEstimate {
    double p = 0.0;      // point estimate
    double lo = 0.0;     // Wilson 99% interval
    double hi = 1.0;
    std::uint64_t trials = 0;
};

/// Monte Carlo coverage of the fixed-antenna link (no closed form is known).
McEstimate coverage_fixed_mc(double d, double z_g, double snr, double eta, double gamma0,
                             std::uint64_t trials, std::uint64_t seed);

struct OutageResult {
    double outage = 0.0;    // exact two-term quadrature
    double high_snr = 0.0;  // blockage-only approximation
};

/// Blockage-aware outage of the PASS link by quadrature (domain split at the
/// SNR-threshold boundary).
OutageResult outage_pass(const ServiceRegion &region, double z_g, double snr, double eta,
                         double beta, double r_target);

McEstimate outage_pass_mc(const ServiceRegion &region, double z_g, double snr, double eta,
                          double beta, double r_target, std::uint64_t trials,
                          std::uint64_t seed);

/// High-SNR outage of the fixed-antenna link by 2-D quadrature.
double outage_fixed_highsnr(const ServiceRegion &region, double z_g, double beta);

McEstimate outage_fixed_mc(const ServiceRegion &region, double z_g, double snr, double eta,
                           double beta, double r_target, std::uint64_t trials,
                           std::uint64_t seed);

/// Wilson score interval at 99% confidence.
McEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials);

} // namespace passkit
