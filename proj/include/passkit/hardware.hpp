// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "passkit/common.hpp"

namespace passkit {

// Physically consistent power radiation: directional-coupler power exchange,
// cascaded radiation rules, and the three-port network transfer function
// under imperfect impedance matching.

struct CouplerSpec {
    double omega0 = 0.0;  // mode-overlap coefficient, 1/m
    double gamma0 = 0.0;  // transverse decay constant, 1/m
    double n_clad = 1.0;  // cladding refractive index
    double spacing = 0.0; // waveguide-PA spacing S_m, m
    double length = 0.0;  // coupling length L_m, m
};

struct ScatteringSpec {
    Eigen::Matrix3cd S = Eigen::Matrix3cd::Zero();
    cplx gamma_s = 0.0; // source reflection coefficient
    cplx gamma_l = 0.0; // termination reflection coefficient
    cplx gamma_r = 0.0; // radiation-load reflection coefficient
    cplx gamma_g = 0.0; // waveguide propagation coefficient, 1/m
    double l1 = 0.0;    // waveguide length up to port 1, m
    double l2 = 0.0;    // waveguide length after port 2, m

    void validate() const;
};

/// Coupling coefficient kappa = Omega0 exp(-sqrt(gamma0^2 - 4 pi^2 n_clad^2 / lambda^2) S).
/// Throws when the exponent would be imaginary (gamma0 too small for lambda).
double coupling_coefficient(const CouplerSpec &spec, double wavelength);

struct CouplerSplit {
    double through; // P_G = cos^2(kappa L)
    double radiated; // P_P = sin^2(kappa L)
};
CouplerSplit coupler_split(double kappa, double length);

/// Cascaded radiation: P_m = delta_m^2 prod_{i<m}(1 - delta_i^2).
std::vector<double> cascade_radiation(const std::vector<double> &delta);

/// Power remaining in the guide after the last PA: prod_m (1 - delta_m^2).
double residual_power(const std::vector<double> &delta);

/// Per-PA coupling amplitudes delta_m that radiate P_eq from every PA.
/// P_eq defaults to 1/M (all power radiated).
std::vector<double> equal_power_deltas(int num_pas, double p_eq = -1.0);

/// Geometric radiation profile P_m = delta_eq^2 (1 - delta_eq^2)^{m-1}.
std::vector<double> proportional_power(double delta_eq, int num_pas);

/// In-waveguide propagation coefficient gamma_G = alpha + j 2 pi n_eff /
/// lambda with the attenuation given in dB/m (default 0.01 dB/m, pass 0 for a
/// lossless line).
cplx waveguide_gamma(double wavelength, double n_eff, double attenuation_db_per_m = 0.01);

/// Complex transfer T with y_rad = T * s for the three-port model under
/// imperfect matching. Throws when I - Gamma*S is numerically singular.
cplx multiport_transfer(const ScatteringSpec &spec);

/// Per-PA radiated transfers of a chain of three-port blocks, cascaded under
/// the no-re-reflection approximation (each block sees a matched downstream
/// line, so only the forward port-2 wave feeds the next block).
std::vector<cplx> multiport_chain(const std::vector<ScatteringSpec> &specs);

struct ScatteringCheck {
    bool pass;
    double sigma_max;
};
/// Energy-conservation check: pass iff sigma_max(S) <= 1 + 1e-12.
ScatteringCheck validate_scattering(const Eigen::Matrix3cd &S);

/// Load a 3x3 complex scattering matrix from CSV (row-major "re,im" pairs,
/// six numbers per row), as exported by EM simulators and VNAs.
Eigen::Matrix3cd scattering_from_csv(const std::string &path);

} // namespace passkit
