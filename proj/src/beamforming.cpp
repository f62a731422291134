// SPDX-License-Identifier: Apache-2.0

#include "passkit/beamforming.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace passkit {

void SearchSettings::validate() const {
    if (grid_points < 2)
        throw Error("search settings: grid_points must be >= 2");
    if (refine_passes < 1)
        throw Error("search settings: refine_passes must be >= 1");
    if (!(tolerance > 0.0))
        throw Error("search settings: tolerance must be > 0");
    if (max_sweeps < 1)
        throw Error("search settings: max_sweeps must be >= 1");
}

namespace {

// Received amplitude of one waveguide, equal power fractions rho.
cplx waveguide_amplitude(const Scenario &s, size_t wg, const std::vector<double> &x,
                         const std::vector<double> &rho, size_t user) {
    const Waveguide &w = s.waveguides[wg];
    const UserPosition &u = s.users[user];
    const double lambda = s.constants.wavelength;
    const double n_eff = s.constants.n_eff;
    const double eta = s.constants.eta_amp();
    const double zeta2 = (w.y - u.y) * (w.y - u.y) + (w.z - u.z) * (w.z - u.z);
    cplx acc = 0.0;
    for (size_t m = 0; m < x.size(); ++m) {
        const double r = std::sqrt((x[m] - u.x) * (x[m] - u.x) + zeta2);
        const double phase = -2.0 * constants::pi * (r + n_eff * x[m]) / lambda;
        acc += std::polar(std::sqrt(rho[m]) * eta / r, phase);
    }
    return acc;
}

std::vector<double> equal_rho(size_t m) {
    return std::vector<double>(m, m ? 1.0 / static_cast<double>(m) : 0.0);
}

// Uniform delta_min array centered on the user projection, shifted into range.
std::vector<double> uniform_centered(const Scenario &s, size_t wg, size_t user, int m) {
    const Waveguide &w = s.waveguides[wg];
    const double aperture = (m - 1) * w.delta_min;
    if (aperture > w.length + 1e-12)
        throw Error("beamforming: infeasible instance, (M-1) delta_min > x_max");
    double x0 = s.users[user].x - 0.5 * aperture;
    x0 = std::clamp(x0, 0.0, w.length - aperture);
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i)
        x[i] = x0 + i * w.delta_min;
    return x;
}

} // namespace

double receive_power(const Scenario &s, size_t waveguide, const std::vector<double> &x,
                     const std::vector<double> &rho, size_t user) {
    if (x.size() != rho.size())
        throw Error("receive_power: position/power length mismatch");
    const cplx a = waveguide_amplitude(s, waveguide, x, rho, user);
    return std::norm(a) * s.constants.transmit_power;
}

double receive_power(const Scenario &s, size_t waveguide, const std::vector<double> &x,
                     size_t user) {
    return receive_power(s, waveguide, x, equal_rho(x.size()), user);
}

SearchResult elementwise_search(const Scenario &s, size_t waveguide, size_t user, int num_pas,
                                const SearchSettings &settings,
                                const std::optional<std::vector<double>> &init) {
    settings.validate();
    if (num_pas < 1)
        throw Error("elementwise_search: need at least one PA");
    const Waveguide &w = s.waveguides[waveguide];
    std::vector<double> x = init ? *init : uniform_centered(s, waveguide, user, num_pas);
    if (static_cast<int>(x.size()) != num_pas)
        throw Error("elementwise_search: init length mismatch");
    const std::vector<double> rho = equal_rho(x.size());

    SearchResult res;
    double obj = receive_power(s, waveguide, x, rho, user);
    res.trace.push_back(obj);

    std::vector<size_t> order = settings.sweep_order;
    if (order.empty())
        for (int i = 0; i < num_pas; ++i)
            order.push_back(i);

    for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
        const double before = obj;
        for (size_t idx : order) {
            if (idx >= x.size())
                throw Error("elementwise_search: sweep order index out of range");
            const double lo = idx == 0 ? 0.0 : x[idx - 1] + w.delta_min;
            const double hi = idx + 1 < x.size() ? x[idx + 1] - w.delta_min : w.length;
            if (lo > hi)
                continue;
            double center = std::clamp(x[idx], lo, hi);
            double width = hi - lo;
            double best_pos = x[idx];
            for (int pass = 0; pass <= settings.refine_passes; ++pass) {
                const double a = std::max(lo, center - 0.5 * width);
                const double b = std::min(hi, center + 0.5 * width);
                for (int g = 0; g < settings.grid_points; ++g) {
                    const double cand =
                        a + (b - a) * g / static_cast<double>(settings.grid_points - 1);
                    const double old = x[idx];
                    x[idx] = cand;
                    const double val = receive_power(s, waveguide, x, rho, user);
                    if (val > obj) {
                        obj = val;
                        best_pos = cand;
                        res.trace.push_back(obj);
                    }
                    x[idx] = old;
                }
                center = best_pos;
                width /= 10.0;
            }
            x[idx] = best_pos;
        }
        res.sweeps = sweep + 1;
        if (obj - before <= settings.tolerance * std::max(before, 1e-300))
            break;
    }
    res.x = std::move(x);
    res.power = obj;
    return res;
}

namespace {

// Total phase (free space + in-waveguide) accumulated by a PA at x, radians.
double total_phase(const Scenario &s, size_t wg, size_t user, double x) {
    const Waveguide &w = s.waveguides[wg];
    const UserPosition &u = s.users[user];
    const double zeta2 = (w.y - u.y) * (w.y - u.y) + (w.z - u.z) * (w.z - u.z);
    const double r = std::sqrt((x - u.x) * (x - u.x) + zeta2);
    return 2.0 * constants::pi * (r + s.constants.n_eff * x) / s.constants.wavelength;
}

// Solve total_phase(x) = value on [lo, hi]; the phase is strictly increasing.
double solve_phase(const Scenario &s, size_t wg, size_t user, double value, double lo,
                   double hi) {
    double a = lo, b = hi;
    for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        if (total_phase(s, wg, user, m) < value)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

} // namespace

SearchResult position_refinement(const Scenario &s, size_t waveguide, size_t user,
                                 int num_pas) {
    const Waveguide &w = s.waveguides[waveguide];
    const std::vector<double> uniform = uniform_centered(s, waveguide, user, num_pas);
    const std::vector<double> rho = equal_rho(uniform.size());

    // align every PA's total phase with the PA nearest the user projection
    size_t center = 0;
    for (size_t m = 1; m < uniform.size(); ++m)
        if (std::abs(uniform[m] - s.users[user].x) < std::abs(uniform[center] - s.users[user].x))
            center = m;
    const double target = total_phase(s, waveguide, user, uniform[center]);
    const double two_pi = 2.0 * constants::pi;

    std::vector<double> x(uniform.size());
    for (size_t m = 0; m < uniform.size(); ++m) {
        const double lo = m == 0 ? 0.0 : x[m - 1] + w.delta_min;
        const double hi = w.length - (uniform.size() - 1 - m) * w.delta_min;
        const double anchor = std::clamp(uniform[m], lo, hi);
        const double k_min = std::ceil((total_phase(s, waveguide, user, lo) - target) / two_pi);
        const double k_max = std::floor((total_phase(s, waveguide, user, hi) - target) / two_pi);
        if (k_min > k_max) {
            x[m] = anchor; // no aligned position fits; keep the anchor
            continue;
        }
        const double k_anchor =
            std::round((total_phase(s, waveguide, user, anchor) - target) / two_pi);
        const double k = std::clamp(k_anchor, k_min, k_max);
        x[m] = solve_phase(s, waveguide, user, target + k * two_pi, lo, hi);
    }

    SearchResult res;
    const double refined = receive_power(s, waveguide, x, rho, user);
    const double plain = receive_power(s, waveguide, uniform, rho, user);
    if (refined >= plain) {
        res.x = std::move(x);
        res.power = refined;
        res.trace = {plain, refined};
    } else {
        res.x = uniform;
        res.power = plain;
        res.trace = {plain};
    }
    res.sweeps = 1;
    return res;
}

SearchResult single_waveguide_optimize(const Scenario &s, size_t waveguide, size_t user,
                                       int num_pas, const SearchSettings &settings) {
    SearchResult best = position_refinement(s, waveguide, user, num_pas);
    const SearchResult polished =
        elementwise_search(s, waveguide, user, num_pas, settings, best.x);
    if (polished.power > best.power)
        best = polished;
    const SearchResult fresh = elementwise_search(s, waveguide, user, num_pas, settings);
    if (fresh.power > best.power)
        best = fresh;
    return best;
}

double f_ub(double x) {
    if (!(x > 0.0))
        throw Error("f_ub: argument must be > 0");
    const double l = std::log(std::sqrt(1.0 + x * x) + x);
    return l * l / x;
}

double max_power_approx(int num_pas, double delta_min, double zeta, double eta, double p_t) {
    if (num_pas < 1 || !(delta_min > 0.0) || !(zeta > 0.0))
        throw Error("max_power_approx: invalid arguments");
    const double arg = num_pas * delta_min / (2.0 * zeta);
    return 2.0 * eta * eta * p_t / (zeta * delta_min) * f_ub(arg);
}

OptimalPas optimal_num_pas(double zeta, double delta_min) {
    if (!(zeta > 0.0) || !(delta_min > 0.0))
        throw Error("optimal_num_pas: invalid arguments");
    const double raw = 6.64 * zeta / delta_min;
    const int formula = std::max(2, 2 * static_cast<int>(std::llround(raw / 2.0)));
    const int m_hi = 2 * static_cast<int>(std::ceil(raw));
    int argmax = 2;
    double best = -1.0;
    for (int m = 2; m <= m_hi; m += 2) {
        const double v = f_ub(m * delta_min / (2.0 * zeta));
        if (v > best) {
            best = v;
            argmax = m;
        }
    }
    return {formula, argmax};
}

std::vector<ScalingPoint> scaling_law_curve(const Scenario &s, size_t waveguide, size_t user,
                                            const std::vector<int> &num_pas_list) {
    const double zeta = lateral_offset(s.waveguides[waveguide], s.users[user]);
    const double eta = s.constants.eta_amp();
    std::vector<ScalingPoint> out;
    out.reserve(num_pas_list.size());
    for (int m : num_pas_list) {
        ScalingPoint pt;
        pt.num_pas = m;
        pt.p_opt = position_refinement(s, waveguide, user, m).power;
        pt.p_approx = max_power_approx(m, s.waveguides[waveguide].delta_min, zeta, eta,
                                       s.constants.transmit_power);
        const double lm = std::log(static_cast<double>(m));
        pt.scaled = m > 1 ? pt.p_opt * m / (lm * lm) : pt.p_opt;
        out.push_back(pt);
    }
    return out;
}

cvec mrt(const cvec &h_eff, double p_t) {
    double norm2 = 0.0;
    for (cplx e : h_eff)
        norm2 += std::norm(e);
    if (norm2 <= 0.0)
        throw Error("mrt: zero effective channel");
    const double scale = std::sqrt(p_t / norm2);
    cvec w(h_eff.size());
    for (size_t n = 0; n < h_eff.size(); ++n)
        w[n] = scale * std::conj(h_eff[n]);
    return w;
}

cvec effective_gains(const Scenario &s, const std::vector<std::vector<double>> &positions,
                     size_t user) {
    if (positions.size() != s.waveguides.size())
        throw Error("effective_gains: waveguide count mismatch");
    cvec e(positions.size());
    for (size_t n = 0; n < positions.size(); ++n)
        e[n] = waveguide_amplitude(s, n, positions[n], equal_rho(positions[n].size()), user);
    return e;
}

SubConnectedResult subconnected_optimize(const Scenario &s, size_t user, int num_pas,
                                         const SearchSettings &settings) {
    SubConnectedResult res;
    res.positions.resize(s.waveguides.size());
    for (size_t n = 0; n < s.waveguides.size(); ++n)
        res.positions[n] = single_waveguide_optimize(s, n, user, num_pas, settings).x;
    const cvec e = effective_gains(s, res.positions, user);
    res.w = mrt(e, s.constants.transmit_power);
    cplx amp = 0.0;
    for (size_t n = 0; n < e.size(); ++n)
        amp += e[n] * res.w[n];
    res.p_r = std::norm(amp);
    return res;
}

namespace {

double fc_power(const cvec &e, const Eigen::MatrixXcd &w_rf, const Eigen::VectorXcd &w_bb) {
    cplx amp = 0.0;
    for (int n = 0; n < w_rf.rows(); ++n) {
        cplx row = 0.0;
        for (int j = 0; j < w_rf.cols(); ++j)
            row += w_rf(n, j) * w_bb(j);
        amp += e[n] * row;
    }
    return std::norm(amp);
}

} // namespace

FullyConnectedResult fullyconnected_optimize(const Scenario &s, size_t user, int num_pas,
                                             int num_rf, const SearchSettings &settings) {
    if (num_rf < 1)
        throw Error("fullyconnected_optimize: need at least one RF chain");
    const int n = static_cast<int>(s.waveguides.size());
    const double p_t = s.constants.transmit_power;

    FullyConnectedResult res;
    const SubConnectedResult sub = subconnected_optimize(s, user, num_pas, settings);
    res.positions = sub.positions;
    const cvec e = effective_gains(s, res.positions, user);

    // full-dimensional MRT reference to approximate with W_RF w_BB
    const cvec w_opt_v = mrt(e, p_t);
    Eigen::VectorXcd w_opt(n);
    for (int i = 0; i < n; ++i)
        w_opt(i) = w_opt_v[i];

    const double mod = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Eigen::MatrixXcd> inits;
    {
        // phase-profile init: first column carries the MRT phases
        Eigen::MatrixXcd w_rf(n, num_rf);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < num_rf; ++j) {
                const double ph = j == 0 ? std::arg(w_opt(i))
                                         : 2.0 * constants::pi * i * j / n;
                w_rf(i, j) = std::polar(mod, ph);
            }
        inits.push_back(w_rf);
    }
    {
        // DFT init: orthonormal columns, exact for num_rf = n
        Eigen::MatrixXcd w_rf(n, num_rf);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < num_rf; ++j)
                w_rf(i, j) = std::polar(mod, -2.0 * constants::pi * i * j / n);
        inits.push_back(w_rf);
    }

    double best = -1.0;
    for (const Eigen::MatrixXcd &init : inits) {
        Eigen::MatrixXcd w_rf = init;
        Eigen::VectorXcd w_bb;
        for (int iter = 0; iter < 60; ++iter) {
            w_bb = w_rf.colPivHouseholderQr().solve(w_opt);
            if (w_bb.norm() > 0.0)
                w_bb *= std::sqrt(p_t) / w_bb.norm();
            const double got = fc_power(e, w_rf, w_bb);
            if (got > best) {
                best = got;
                res.w_rf = w_rf;
                res.w_bb = w_bb;
            }
            // unit-modulus phase projection toward the MRT target
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < num_rf; ++j)
                    w_rf(i, j) = std::polar(mod, std::arg(w_opt(i) * std::conj(w_bb(j))));
        }
    }
    res.p_r = best;
    return res;
}

double elementwise_optimize(const Scenario &s, std::vector<std::vector<double>> &positions,
                            const std::function<double(const std::vector<std::vector<double>> &)>
                                &objective,
                            const SearchSettings &settings, std::vector<double> *trace) {
    settings.validate();
    double obj = objective(positions);
    if (trace)
        trace->push_back(obj);
    for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
        const double before = obj;
        for (size_t nw = 0; nw < positions.size(); ++nw) {
            const Waveguide &w = s.waveguides[nw];
            auto &x = positions[nw];
            for (size_t idx = 0; idx < x.size(); ++idx) {
                const double lo = idx == 0 ? 0.0 : x[idx - 1] + w.delta_min;
                const double hi = idx + 1 < x.size() ? x[idx + 1] - w.delta_min : w.length;
                if (lo > hi)
                    continue;
                double center = std::clamp(x[idx], lo, hi);
                double width = hi - lo;
                double best_pos = x[idx];
                for (int pass = 0; pass <= settings.refine_passes; ++pass) {
                    const double a = std::max(lo, center - 0.5 * width);
                    const double b = std::min(hi, center + 0.5 * width);
                    for (int g = 0; g < settings.grid_points; ++g) {
                        const double cand =
                            a + (b - a) * g / static_cast<double>(settings.grid_points - 1);
                        const double old = x[idx];
                        x[idx] = cand;
                        const double val = objective(positions);
                        if (val > obj) {
                            obj = val;
                            best_pos = cand;
                            if (trace)
                                trace->push_back(obj);
                        }
                        x[idx] = old;
                    }
                    center = best_pos;
                    width /= 10.0;
                }
                x[idx] = best_pos;
            }
        }
        if (obj - before <= settings.tolerance * std::max(std::abs(before), 1e-300))
            break;
    }
    return obj;
}

namespace {

std::vector<double> default_weights(size_t k, const std::vector<double> &weights) {
    if (weights.empty())
        return std::vector<double>(k, 1.0);
    if (weights.size() != k)
        throw Error("multi-user: weights length must equal the number of users");
    for (double w : weights)
        if (!(w > 0.0))
            throw Error("multi-user: weights must be > 0");
    return weights;
}

std::vector<std::vector<double>> per_user_init(const Scenario &s, int num_pas,
                                               const std::vector<size_t> &assignment) {
    std::vector<std::vector<double>> x(s.waveguides.size());
    for (size_t n = 0; n < s.waveguides.size(); ++n)
        x[n] = position_refinement(s, n, assignment[n], num_pas).x;
    return x;
}

} // namespace

MuResult ws_wsr(const Scenario &s, const std::vector<double> &weights, int num_pas,
                const SearchSettings &settings) {
    const size_t k = s.users.size();
    const std::vector<double> om = default_weights(k, weights);
    const double p_t = s.constants.transmit_power;
    const double sigma2 = s.constants.noise_power;

    auto wsr_of = [&](const std::vector<std::vector<double>> &x) {
        double acc = 0.0;
        for (size_t u = 0; u < k; ++u) {
            const cvec e = effective_gains(s, x, u);
            double g2 = 0.0;
            for (cplx v : e)
                g2 += std::norm(v);
            acc += om[u] / static_cast<double>(k) * std::log2(1.0 + p_t * g2 / sigma2);
        }
        return acc;
    };

    MuResult best;
    best.wsr = -1.0;
    for (size_t pivot = 0; pivot < k; ++pivot) {
        std::vector<std::vector<double>> x =
            per_user_init(s, num_pas, std::vector<size_t>(s.waveguides.size(), pivot));
        std::vector<double> trace;
        const double v = elementwise_optimize(s, x, wsr_of, settings, &trace);
        if (v > best.wsr) {
            best.wsr = v;
            best.positions = std::move(x);
            best.trace = std::move(trace);
        }
    }
    best.w.resize(k);
    best.user_rates.resize(k);
    for (size_t u = 0; u < k; ++u) {
        const cvec e = effective_gains(s, best.positions, u);
        best.w[u] = mrt(e, p_t);
        double g2 = 0.0;
        for (cplx v : e)
            g2 += std::norm(v);
        best.user_rates[u] =
            std::log2(1.0 + p_t * g2 / sigma2) / static_cast<double>(k);
    }
    best.beamformer = "mrt";
    return best;
}

namespace {

// Per-user desired/cross power gains for WD: gain(k, i) = |h_k(x_i)^H g_i|^2.
Eigen::MatrixXd wd_gain_matrix(const Scenario &s,
                               const std::vector<std::vector<double>> &x) {
    const size_t k = s.users.size();
    Eigen::MatrixXd g(k, k);
    for (size_t u = 0; u < k; ++u) {
        const cvec e = effective_gains(s, x, u);
        for (size_t i = 0; i < k; ++i)
            g(u, i) = std::norm(e[i]);
    }
    return g;
}

double wd_wsr_value(const Eigen::MatrixXd &gain, const std::vector<double> &nu,
                    const std::vector<double> &om, double sigma2) {
    double acc = 0.0;
    const size_t k = nu.size();
    for (size_t u = 0; u < k; ++u) {
        double interf = sigma2;
        for (size_t i = 0; i < k; ++i)
            if (i != u)
                interf += gain(u, i) * nu[i];
        acc += om[u] * std::log2(1.0 + gain(u, u) * nu[u] / interf);
    }
    return acc;
}

// Weighted water-filling under fixed interference: nu_k(mu) =
// max(0, om_k / (mu ln 2) - c_k / a_k), with mu bisected to meet the power
// budget (the KKT stationarity is scalar in mu).
std::vector<double> wd_waterfill(const Eigen::VectorXd &a, const Eigen::VectorXd &c,
                                 const std::vector<double> &om, double p_t) {
    const size_t k = om.size();
    auto total = [&](double mu) {
        double sum = 0.0;
        for (size_t u = 0; u < k; ++u)
            sum += std::max(0.0, om[u] / (mu * std::log(2.0)) - c(u) / a(u));
        return sum;
    };
    double mu_hi = 0.0;
    for (size_t u = 0; u < k; ++u)
        mu_hi = std::max(mu_hi, om[u] * a(u) / (c(u) * std::log(2.0)));
    double lo = mu_hi * 1e-12, hi = mu_hi;
    for (int it = 0; it < 200 && (hi - lo) > 1e-8 * mu_hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total(mid) > p_t)
            lo = mid;
        else
            hi = mid;
    }
    const double mu = 0.5 * (lo + hi);
    std::vector<double> nu(k);
    for (size_t u = 0; u < k; ++u)
        nu[u] = std::max(0.0, om[u] / (mu * std::log(2.0)) - c(u) / a(u));
    return nu;
}

} // namespace

MuResult wd_wsr(const Scenario &s, const std::vector<double> &weights, int num_pas,
                const SearchSettings &settings) {
    const size_t k = s.users.size();
    if (k != s.waveguides.size())
        throw Error("wd_wsr: waveguide division requires K = N");
    const std::vector<double> om = default_weights(k, weights);
    const double p_t = s.constants.transmit_power;
    const double sigma2 = s.constants.noise_power;

    std::vector<size_t> assign(k);
    for (size_t n = 0; n < k; ++n)
        assign[n] = n;
    std::vector<std::vector<double>> x = per_user_init(s, num_pas, assign);
    std::vector<double> nu(k, p_t / static_cast<double>(k));

    MuResult res;
    double obj = wd_wsr_value(wd_gain_matrix(s, x), nu, om, sigma2);
    res.trace.push_back(obj);

    for (int outer = 0; outer < 20; ++outer) {
        const double before = obj;

        // power allocation step under frozen interference, accepted only on
        // improvement
        for (int inner = 0; inner < 15; ++inner) {
            const Eigen::MatrixXd gain = wd_gain_matrix(s, x);
            Eigen::VectorXd a(k), c(k);
            for (size_t u = 0; u < k; ++u) {
                a(u) = gain(u, u);
                double interf = sigma2;
                for (size_t i = 0; i < k; ++i)
                    if (i != u)
                        interf += gain(u, i) * nu[i];
                c(u) = interf;
            }
            const std::vector<double> cand = wd_waterfill(a, c, om, p_t);
            const double v = wd_wsr_value(gain, cand, om, sigma2);
            if (v > obj) {
                nu = cand;
                obj = v;
                res.trace.push_back(obj);
            } else {
                break;
            }
        }

        // position step on the exact WSR objective
        auto wsr_of = [&](const std::vector<std::vector<double>> &pos) {
            return wd_wsr_value(wd_gain_matrix(s, pos), nu, om, sigma2);
        };
        obj = elementwise_optimize(s, x, wsr_of, settings, &res.trace);

        if (obj - before <= settings.tolerance * std::max(before, 1e-300))
            break;
    }

    res.positions = x;
    res.power_alloc = nu;
    res.wsr = obj;
    res.user_rates.resize(k);
    const Eigen::MatrixXd gain = wd_gain_matrix(s, x);
    res.w.resize(k);
    for (size_t u = 0; u < k; ++u) {
        double interf = sigma2;
        for (size_t i = 0; i < k; ++i)
            if (i != u)
                interf += gain(u, i) * nu[i];
        res.user_rates[u] = std::log2(1.0 + gain(u, u) * nu[u] / interf);
        cvec w(k, cplx(0.0, 0.0));
        w[u] = std::sqrt(nu[u]);
        res.w[u] = w;
    }
    res.beamformer = "power-allocation";
    return res;
}

namespace {

Eigen::MatrixXcd wm_heuristic(const Eigen::MatrixXcd &h_eff, const std::string &kind,
                              double p_t, double sigma2) {
    const int k = static_cast<int>(h_eff.rows());
    const int n = static_cast<int>(h_eff.cols());
    Eigen::MatrixXcd w(n, k);
    if (kind == "mrt") {
        w = h_eff.adjoint();
    } else if (kind == "zf") {
        w = h_eff.adjoint() *
            (h_eff * h_eff.adjoint()).ldlt().solve(Eigen::MatrixXcd::Identity(k, k));
    } else if (kind == "mmse") {
        const Eigen::MatrixXcd reg =
            h_eff * h_eff.adjoint() +
            (k * sigma2 / p_t) * Eigen::MatrixXcd::Identity(k, k);
        w = h_eff.adjoint() * reg.ldlt().solve(Eigen::MatrixXcd::Identity(k, k));
    } else {
        throw Error("wm_wsr: unknown heuristic " + kind);
    }
    for (int u = 0; u < k; ++u) {
        const double norm = w.col(u).norm();
        if (norm > 0.0)
            w.col(u) *= std::sqrt(p_t / k) / norm;
    }
    return w;
}

double wm_wsr_value(const Eigen::MatrixXcd &h_eff, const Eigen::MatrixXcd &w,
                    const std::vector<double> &om, double sigma2,
                    std::vector<double> *rates = nullptr) {
    const int k = static_cast<int>(h_eff.rows());
    const Eigen::MatrixXcd rx = h_eff * w; // rx(u, i): user u hears stream i
    double acc = 0.0;
    for (int u = 0; u < k; ++u) {
        double interf = sigma2;
        for (int i = 0; i < k; ++i)
            if (i != u)
                interf += std::norm(rx(u, i));
        const double rate = std::log2(1.0 + std::norm(rx(u, u)) / interf);
        if (rates)
            (*rates)[u] = rate;
        acc += om[u] * rate;
    }
    return acc;
}

} // namespace

MuResult wm_wsr(const Scenario &s, const std::vector<double> &weights, int num_pas,
                const SearchSettings &settings) {
    const size_t k = s.users.size();
    const size_t n = s.waveguides.size();
    const std::vector<double> om = default_weights(k, weights);
    const double p_t = s.constants.transmit_power;
    const double sigma2 = s.constants.noise_power;

    auto h_eff_of = [&](const std::vector<std::vector<double>> &x) {
        Eigen::MatrixXcd h(k, n);
        for (size_t u = 0; u < k; ++u) {
            const cvec e = effective_gains(s, x, u);
            for (size_t i = 0; i < n; ++i)
                h(u, i) = e[i];
        }
        return h;
    };

    std::vector<std::string> kinds = {"mrt", "mmse"};
    if (k <= n)
        kinds.insert(kinds.begin() + 1, "zf"); // ZF needs K <= N

    MuResult best;
    best.wsr = -1.0;
    for (const std::string &kind : kinds) {
        std::vector<size_t> assign(n);
        for (size_t i = 0; i < n; ++i)
            assign[i] = i % k;
        std::vector<std::vector<double>> x = per_user_init(s, num_pas, assign);
        auto wsr_of = [&](const std::vector<std::vector<double>> &pos) {
            const Eigen::MatrixXcd h = h_eff_of(pos);
            return wm_wsr_value(h, wm_heuristic(h, kind, p_t, sigma2), om, sigma2);
        };
        std::vector<double> trace;
        const double v = elementwise_optimize(s, x, wsr_of, settings, &trace);
        if (v > best.wsr) {
            best.wsr = v;
            best.positions = std::move(x);
            best.trace = std::move(trace);
            best.beamformer = kind;
        }
    }

    const Eigen::MatrixXcd h = h_eff_of(best.positions);
    const Eigen::MatrixXcd w = wm_heuristic(h, best.beamformer, p_t, sigma2);
    best.user_rates.resize(k);
    best.wsr = wm_wsr_value(h, w, om, sigma2, &best.user_rates);
    best.w.resize(k);
    for (size_t u = 0; u < k; ++u) {
        cvec col(n);
        for (size_t i = 0; i < n; ++i)
            col[i] = w(i, u);
        best.w[u] = col;
    }
    return best;
}

} // namespace passkit
