// SPDX-License-Identifier: Apache-2.0

#include "passkit/hardware.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <sstream>

namespace passkit {

void ScatteringSpec::validate() const {
    const auto check = validate_scattering(S);
    if (!check.pass)
        throw Error("scattering spec: S violates energy conservation (sigma_max = " +
                    std::to_string(check.sigma_max) + ")");
    for (cplx g : {gamma_s, gamma_l, gamma_r})
        if (std::abs(g) > 1.0 + 1e-12)
            throw Error("scattering spec: reflection coefficient magnitude > 1");
    if (l1 < 0.0 || l2 < 0.0)
        throw Error("scattering spec: section lengths must be >= 0");
}

double coupling_coefficient(const CouplerSpec &spec, double wavelength) {
    if (!(spec.omega0 > 0.0))
        throw Error("coupling_coefficient: omega0 must be > 0");
    if (spec.spacing < 0.0)
        throw Error("coupling_coefficient: spacing must be >= 0");
    const double k_clad = 2.0 * constants::pi * spec.n_clad / wavelength;
    const double arg = spec.gamma0 * spec.gamma0 - k_clad * k_clad;
    if (arg < 0.0)
        throw Error("coupling_coefficient: gamma0^2 < (2 pi n_clad / lambda)^2, "
                    "transverse decay exponent would be imaginary");
    return spec.omega0 * std::exp(-std::sqrt(arg) * spec.spacing);
}

CouplerSplit coupler_split(double kappa, double length) {
    if (kappa < 0.0 || length < 0.0)
        throw Error("coupler_split: kappa and length must be >= 0");
    const double c = std::cos(kappa * length);
    const double s = std::sin(kappa * length);
    return {c * c, s * s};
}

std::vector<double> cascade_radiation(const std::vector<double> &delta) {
    std::vector<double> power(delta.size());
    double remaining = 1.0;
    for (size_t m = 0; m < delta.size(); ++m) {
        const double d = delta[m];
        if (d < 0.0 || d > 1.0)
            throw Error("cascade_radiation: delta entries must lie in [0, 1]");
        power[m] = d * d * remaining;
        remaining *= 1.0 - d * d;
    }
    return power;
}

double residual_power(const std::vector<double> &delta) {
    double remaining = 1.0;
    for (double d : delta)
        remaining *= 1.0 - d * d;
    return remaining;
}

std::vector<double> equal_power_deltas(int num_pas, double p_eq) {
    if (num_pas < 1)
        throw Error("equal_power_deltas: need at least one PA");
    if (p_eq < 0.0)
        p_eq = 1.0 / num_pas;
    if ((num_pas - 1) * p_eq >= 1.0)
        throw Error("equal_power_deltas: (M-1) * P_eq must be < 1");
    std::vector<double> delta(num_pas);
    for (int m = 1; m <= num_pas; ++m) {
        const double denom = 1.0 - (m - 1) * p_eq;
        delta[m - 1] = std::sqrt(std::min(1.0, p_eq / denom));
    }
    return delta;
}

std::vector<double> proportional_power(double delta_eq, int num_pas) {
    if (delta_eq < 0.0 || delta_eq > 1.0)
        throw Error("proportional_power: delta_eq must lie in [0, 1]");
    if (num_pas < 1)
        throw Error("proportional_power: need at least one PA");
    std::vector<double> power(num_pas);
    const double d2 = delta_eq * delta_eq;
    double remaining = 1.0;
    for (int m = 0; m < num_pas; ++m) {
        power[m] = d2 * remaining;
        remaining *= 1.0 - d2;
    }
    return power;
}

namespace {

// Direct 3x3 inverse via the adjugate, with a condition-number guard. The
// acceptance oracle solves the same system through a general LU path, so the
// two routes stay independent.
Eigen::Matrix3cd inverse3(const Eigen::Matrix3cd &a) {
    Eigen::Matrix3cd adj;
    adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cplx det = a(0, 0) * adj(0, 0) + a(0, 1) * adj(1, 0) + a(0, 2) * adj(2, 0);
    if (std::abs(det) == 0.0)
        throw Error("multiport_transfer: I - Gamma*S is singular (resonant mismatch)");
    const Eigen::Matrix3cd inv = adj / det;
    const double cond = a.cwiseAbs().rowwise().sum().maxCoeff() *
                        inv.cwiseAbs().rowwise().sum().maxCoeff();
    if (cond > 1e12)
        throw Error("multiport_transfer: I - Gamma*S is numerically singular "
                    "(condition estimate > 1e12)");
    return inv;
}

struct BlockTransfer {
    cplx radiated; // port-3 total voltage per unit source voltage
    cplx through;  // forward wave handed to the next block per unit source voltage
};

BlockTransfer block_transfer(const ScatteringSpec &spec) {
    spec.validate();
    const cplx e1a = std::exp(-spec.gamma_g * spec.l1);
    const cplx e2a = std::exp(-spec.gamma_g * spec.l2);
    Eigen::Matrix3cd gamma = Eigen::Matrix3cd::Zero();
    gamma(0, 0) = spec.gamma_s * e1a * e1a;
    gamma(1, 1) = spec.gamma_l * e2a * e2a;
    gamma(2, 2) = spec.gamma_r;

    const Eigen::Matrix3cd inv = inverse3(Eigen::Matrix3cd::Identity() - gamma * spec.S);
    const Eigen::Vector3cd vp = inv.col(0); // incident waves per unit e^{-gamma l1} v0
    const Eigen::Vector3cd vm = spec.S * vp;

    // all three measured per unit incident wave e^{-gamma l1} v0
    const cplx v_s = vp(0) / e1a + e1a * vm(0); // source voltage
    const cplx v_r = vp(2) + vm(2);             // total port-3 voltage
    const cplx fwd = e2a * vm(1);               // wave leaving port 2 after the l2 section
    return {v_r / v_s, fwd / v_s};
}

} // namespace

cplx waveguide_gamma(double wavelength, double n_eff, double attenuation_db_per_m) {
    if (!(wavelength > 0.0) || !(n_eff >= 1.0) || attenuation_db_per_m < 0.0)
        throw Error("waveguide_gamma: invalid arguments");
    const double alpha = attenuation_db_per_m * std::log(10.0) / 20.0; // Np/m
    return {alpha, 2.0 * constants::pi * n_eff / wavelength};
}

cplx multiport_transfer(const ScatteringSpec &spec) {
    return block_transfer(spec).radiated;
}

std::vector<cplx> multiport_chain(const std::vector<ScatteringSpec> &specs) {
    std::vector<cplx> radiated;
    radiated.reserve(specs.size());
    cplx upstream = 1.0;
    for (const auto &spec : specs) {
        const BlockTransfer t = block_transfer(spec);
        radiated.push_back(upstream * t.radiated);
        upstream *= t.through;
    }
    return radiated;
}

ScatteringCheck validate_scattering(const Eigen::Matrix3cd &S) {
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(S);
    const double sigma_max = svd.singularValues()(0);
    return {sigma_max <= 1.0 + 1e-12, sigma_max};
}

Eigen::Matrix3cd scattering_from_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scattering CSV: " + path);
    Eigen::Matrix3cd S;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (row >= 3)
            throw Error("scattering CSV: more than 3 data rows");
        std::istringstream ss(line);
        std::string cell;
        double vals[6];
        for (int k = 0; k < 6; ++k) {
            if (!std::getline(ss, cell, ','))
                throw Error("scattering CSV: expected 6 comma-separated numbers per row");
            vals[k] = std::stod(cell);
        }
        for (int c = 0; c < 3; ++c)
            S(row, c) = cplx(vals[2 * c], vals[2 * c + 1]);
        ++row;
    }
    if (row != 3)
        throw Error("scattering CSV: expected exactly 3 data rows");
    return S;
}

} // namespace passkit
