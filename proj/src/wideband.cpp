// SPDX-License-Identifier: Apache-2.0

#include "passkit/wideband.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace passkit {

void WaveguideDispersion::validate() const {
    if (!(r_o > 0.0))
        throw Error("dispersion: core radius must be > 0");
    if (!(n_o > n_c) || !(n_c >= 1.0))
        throw Error("dispersion: need n_o > n_c >= 1");
    if (v.size() != n_eff.size() || v.size() < 2)
        throw Error("dispersion: table needs at least 2 (V, n_eff) rows");
    for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0 && v[i] <= v[i - 1])
            throw Error("dispersion: V column must be strictly increasing");
        if (i > 0 && n_eff[i] < n_eff[i - 1])
            throw Error("dispersion: n_eff column must be non-decreasing");
        if (n_eff[i] < n_c - 1e-12 || n_eff[i] > n_o + 1e-12)
            throw Error("dispersion: n_eff outside [n_c, n_o]");
    }
}

double WaveguideDispersion::v_of(double f) const {
    return 2.0 * constants::pi * f * r_o * std::sqrt(n_o * n_o - n_c * n_c) / constants::c0;
}

WaveguideDispersion WaveguideDispersion::default_curve(double r_o, double n_o, double n_c) {
    WaveguideDispersion d;
    d.r_o = r_o;
    d.n_o = n_o;
    d.n_c = n_c;
    // dominant-mode shape: n_eff climbs from the cladding index toward the
    // core index with normalized frequency
    for (int i = 0; i <= 40; ++i) {
        const double v = 0.1 + 10.0 * i / 40.0;
        const double frac = v * v / (v * v + 4.0);
        d.v.push_back(v);
        d.n_eff.push_back(n_c + (n_o - n_c) * frac);
    }
    d.validate();
    return d;
}

WaveguideDispersion WaveguideDispersion::from_csv(const std::string &path, double r_o,
                                                  double n_o, double n_c) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open dispersion CSV: " + path);
    WaveguideDispersion d;
    d.r_o = r_o;
    d.n_o = n_o;
    d.n_c = n_c;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw Error("dispersion CSV: expected 'V,n_eff' rows");
        d.v.push_back(std::stod(a));
        d.n_eff.push_back(std::stod(b));
    }
    d.validate();
    return d;
}

double single_mode_max_frequency(double r_o, double n_o, double n_c) {
    if (!(r_o > 0.0) || !(n_o > n_c))
        throw Error("single_mode_max_frequency: need r_o > 0 and n_o > n_c");
    return 0.3828 * constants::c0 / (r_o * std::sqrt(n_o * n_o - n_c * n_c));
}

double te10_lower_cutoff(double width) {
    if (!(width > 0.0))
        throw Error("te10_lower_cutoff: width must be > 0");
    return constants::c0 / (2.0 * width);
}

double n_eff_at(double f, const WaveguideDispersion &d) {
    d.validate();
    const double vq = d.v_of(f);
    const size_t n = d.v.size();
    if (vq < d.v.front() - 1e-12 || vq > d.v.back() + 1e-12)
        throw Error("n_eff_at: frequency outside the dispersion table span");

    // Fritsch-Carlson monotone cubic through the table
    std::vector<double> h(n - 1), slope(n - 1), m(n);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = d.v[i + 1] - d.v[i];
        slope[i] = (d.n_eff[i + 1] - d.n_eff[i]) / h[i];
    }
    m[0] = slope[0];
    m[n - 1] = slope[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0)
            m[i] = 0.0;
        else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    size_t i = std::min(
        static_cast<size_t>(std::upper_bound(d.v.begin(), d.v.end(), vq) - d.v.begin()),
        n - 1);
    i = i > 0 ? i - 1 : 0;
    if (i >= n - 1)
        i = n - 2;
    const double t = std::clamp((vq - d.v[i]) / h[i], 0.0, 1.0);
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * d.n_eff[i] + (t3 - 2 * t2 + t) * h[i] * m[i] +
                       (-2 * t3 + 3 * t2) * d.n_eff[i + 1] + (t3 - t2) * h[i] * m[i + 1];
    return std::clamp(val, d.n_c, d.n_o);
}

void OfdmGrid::validate() const {
    if (f.empty())
        throw Error("ofdm grid: need at least one subcarrier");
    for (double fq : f)
        if (!(fq > 0.0))
            throw Error("ofdm grid: frequencies must be > 0");
    if (l_cp < 0)
        throw Error("ofdm grid: CP length must be >= 0");
    if (!(f_center > 0.0))
        throw Error("ofdm grid: center frequency must be > 0");
}

OfdmGrid OfdmGrid::uniform(double f_center, double bandwidth, int q, double sample_rate) {
    if (q < 1 || !(f_center > 0.0) || bandwidth < 0.0)
        throw Error("ofdm grid: invalid parameters");
    OfdmGrid g;
    g.f_center = f_center;
    g.sample_rate = sample_rate;
    for (int i = 0; i < q; ++i) {
        const double frac = q == 1 ? 0.0 : i / static_cast<double>(q - 1) - 0.5;
        g.f.push_back(f_center + frac * bandwidth);
    }
    return g;
}

void validate_band(const OfdmGrid &grid, const WaveguideDispersion &d, double lower_cutoff) {
    grid.validate();
    const double f_max = single_mode_max_frequency(d.r_o, d.n_o, d.n_c);
    for (double fq : grid.f) {
        if (fq > f_max)
            throw Error("band check: subcarrier above the single-mode edge");
        if (fq < lower_cutoff)
            throw Error("band check: subcarrier below the lower cutoff");
        n_eff_at(fq, d); // throws outside the table span
    }
}

int cp_length(const OfdmGrid &grid, const WaveguideDispersion &d,
              const std::vector<std::vector<double>> &positions, const Scenario &s,
              double multipath_delay_spread) {
    grid.validate();
    if (multipath_delay_spread < 0.0)
        throw Error("cp_length: multipath delay spread must be >= 0");

    double tau_spatial = 0.0;
    for (size_t u = 0; u < s.users.size(); ++u) {
        double r_min = 1e300, r_max = 0.0;
        for (size_t n = 0; n < positions.size(); ++n)
            for (double x : positions[n]) {
                const double r = pa_user_distance(x, s.waveguides[n], s.users[u]);
                r_min = std::min(r_min, r);
                r_max = std::max(r_max, r);
            }
        if (r_max > 0.0)
            tau_spatial = std::max(tau_spatial, (r_max - r_min) / constants::c0);
    }

    double x_max = 0.0;
    for (const auto &w : s.waveguides)
        x_max = std::max(x_max, w.length);
    const double n_center = n_eff_at(grid.f_center, d);
    double tau_disp = 0.0;
    for (double fq : grid.f)
        tau_disp = std::max(tau_disp,
                            x_max * std::abs(n_eff_at(fq, d) - n_center) / constants::c0);

    const double total = multipath_delay_spread + tau_spatial + tau_disp;
    return static_cast<int>(std::ceil(grid.sample_rate * total));
}

namespace {

double subcarrier_gain2(const std::vector<double> &x, double f, double n_eff_f,
                        const Scenario &s, size_t user) {
    const Waveguide &w = s.waveguides[0];
    const UserPosition &u = s.users[user];
    const double zeta2 = (w.y - u.y) * (w.y - u.y) + (w.z - u.z) * (w.z - u.z);
    const double eta_f = constants::c0 / (4.0 * constants::pi * f);
    const double rho = 1.0 / static_cast<double>(x.size());
    cplx acc = 0.0;
    for (double xm : x) {
        const double r = std::sqrt((xm - u.x) * (xm - u.x) + zeta2);
        const double phase = -2.0 * constants::pi * f * (r + n_eff_f * xm) / constants::c0;
        acc += std::polar(std::sqrt(rho) * eta_f / r, phase);
    }
    return std::norm(acc);
}

double sum_objective(const std::vector<double> &x, const OfdmGrid &grid,
                     const std::vector<double> &n_eff_q, const Scenario &s, size_t user) {
    const double p_t = s.constants.transmit_power;
    const double sigma2 = s.constants.noise_power;
    double acc = 0.0;
    for (size_t q = 0; q < grid.f.size(); ++q)
        acc += std::log2(1.0 + subcarrier_gain2(x, grid.f[q], n_eff_q[q], s, user) * p_t /
                                   sigma2);
    return acc;
}

std::vector<double> table_n_eff(const OfdmGrid &grid, const WaveguideDispersion &d) {
    std::vector<double> n_eff_q;
    n_eff_q.reserve(grid.f.size());
    for (double fq : grid.f)
        n_eff_q.push_back(n_eff_at(fq, d));
    return n_eff_q;
}

} // namespace

double ofdm_rate(const std::vector<double> &x, const OfdmGrid &grid,
                 const WaveguideDispersion &d, const Scenario &s, size_t user) {
    grid.validate();
    if (x.empty())
        throw Error("ofdm_rate: empty position vector");
    const auto n_eff_q = table_n_eff(grid, d);
    const double q = static_cast<double>(grid.f.size());
    return sum_objective(x, grid, n_eff_q, s, user) / (grid.l_cp + q);
}

std::vector<double> narrowband_center_positions(const OfdmGrid &grid,
                                                const WaveguideDispersion &d,
                                                const Scenario &s, int num_pas,
                                                const SearchSettings &settings, size_t user) {
    Scenario nb = s;
    nb.constants.wavelength = constants::c0 / grid.f_center;
    nb.constants.n_eff = n_eff_at(grid.f_center, d);
    nb.constants.eta = constants::c0 / (4.0 * constants::pi * grid.f_center);
    return single_waveguide_optimize(nb, 0, user, num_pas, settings).x;
}

WidebandResult wideband_optimize(const OfdmGrid &grid, const WaveguideDispersion &d,
                                 const Scenario &s, int num_pas,
                                 const SearchSettings &settings, size_t user) {
    grid.validate();
    const auto n_eff_q = table_n_eff(grid, d);
    auto objective = [&](const std::vector<std::vector<double>> &pos) {
        return sum_objective(pos[0], grid, n_eff_q, s, user);
    };

    std::vector<std::vector<double>> inits;
    inits.push_back(narrowband_center_positions(grid, d, s, num_pas, settings, user));
    {
        Scenario nb = s;
        nb.constants.wavelength = constants::c0 / grid.f_center;
        inits.push_back(position_refinement(nb, 0, user, num_pas).x);
    }

    WidebandResult res;
    double best = -1.0;
    for (const auto &init : inits) {
        std::vector<std::vector<double>> pos = {init};
        const double v = elementwise_optimize(s, pos, objective, settings);
        if (v > best) {
            best = v;
            res.x = pos[0];
        }
    }
    res.sum_objective = best;
    res.rate = ofdm_rate(res.x, grid, d, s, user);
    return res;
}

} // namespace passkit
