// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "passkit/beamforming.hpp"
#include "passkit/geometry.hpp"

namespace passkit {

// OFDM over PASS: single-mode band limits, dispersion-aware channels, cyclic
// prefix sizing, and frequency-dependent pinching beamforming.

struct WaveguideDispersion {
    double r_o = 0.0; // core radius, m
    double n_o = 0.0; // core refractive index
    double n_c = 1.0; // cladding refractive index
    // monotone table of (normalized frequency V, n_eff)
    std::vector<double> v;
    std::vector<double> n_eff;

    void validate() const;
    double v_of(double f) const; // V = 2 pi f r_o sqrt(n_o^2 - n_c^2) / c

    /// Bundled default curve: n_eff rises from the cladding index toward the
    /// core index as the normalized frequency grows (dominant-mode shape).
    static WaveguideDispersion default_curve(double r_o, double n_o, double n_c);

    /// 2-column CSV (V, n_eff) loader for datasheet/simulation tables.
    static WaveguideDispersion from_csv(const std::string &path, double r_o, double n_o,
                                        double n_c);
};

/// Single-mode upper band edge 0.3828 c / (r_o sqrt(n_o^2 - n_c^2)).
double single_mode_max_frequency(double r_o, double n_o, double n_c);

/// Alternative band-limit rule: dominant-mode cutoff c / (2a) of a metallic
/// rectangular guide of width a.
double te10_lower_cutoff(double width);

/// Monotone-cubic interpolation of the dispersion table at V(f), clamped to
/// [n_c, n_o]. Throws when V(f) falls outside the table span.
double n_eff_at(double f, const WaveguideDispersion &d);

struct OfdmGrid {
    std::vector<double> f;     // subcarrier frequencies, Hz
    double f_center = 0.0;     // carrier reference for dispersion spread
    int l_cp = 0;              // cyclic prefix length, samples
    double sample_rate = 0.0;  // Hz

    size_t num_subcarriers() const { return f.size(); }
    void validate() const;
    static OfdmGrid uniform(double f_center, double bandwidth, int q, double sample_rate);
};

/// Every subcarrier must lie in [lower_cutoff, single-mode edge] and within
/// the dispersion table span.
void validate_band(const OfdmGrid &grid, const WaveguideDispersion &d,
                   double lower_cutoff = 0.0);

/// CP sample count covering multipath, array-geometry and dispersion delays:
/// ceil(sample_rate * (tau_mp + tau_spatial + tau_dispersion)).
int cp_length(const OfdmGrid &grid, const WaveguideDispersion &d,
              const std::vector<std::vector<double>> &positions, const Scenario &s,
              double multipath_delay_spread);

/// OFDM achievable rate (1/(L_CP+Q)) sum_q log2(1 + |h^H g|^2 P_t / sigma^2)
/// with eta(f) = c/(4 pi f) and n_eff(f) from the dispersion table.
double ofdm_rate(const std::vector<double> &x, const OfdmGrid &grid,
                 const WaveguideDispersion &d, const Scenario &s, size_t user = 0);

struct WidebandResult {
    std::vector<double> x;
    double rate = 0.0;          // ofdm_rate at x
    double sum_objective = 0.0; // subcarrier-sum objective value
};

/// Element-wise search on the subcarrier-sum objective. The solution of the
/// center-frequency narrowband problem is one of the starting points, so the
/// result never falls below it.
WidebandResult wideband_optimize(const OfdmGrid &grid, const WaveguideDispersion &d,
                                 const Scenario &s, int num_pas,
                                 const SearchSettings &settings = {}, size_t user = 0);

/// PA positions optimized for the center frequency only (narrowband baseline).
std::vector<double> narrowband_center_positions(const OfdmGrid &grid,
                                                const WaveguideDispersion &d,
                                                const Scenario &s, int num_pas,
                                                const SearchSettings &settings = {},
                                                size_t user = 0);

} // namespace passkit
