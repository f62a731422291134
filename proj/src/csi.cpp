// SPDX-License-Identifier: Apache-2.0

#include "passkit/csi.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "passkit/beamforming.hpp"
#include "passkit/rng.hpp"

namespace passkit {

Eigen::MatrixXcd inwaveguide_matrix(const Scenario &s, const PinchConfig &c) {
    c.validate(s);
    const size_t total = c.total_pas();
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(total, c.num_waveguides());
    size_t off = 0;
    for (size_t n = 0; n < c.num_waveguides(); ++n) {
        const cvec gn = waveguide_vector(c.positions[n], c.power[n], s.constants);
        for (size_t m = 0; m < gn.size(); ++m)
            g(off + m, n) = gn[m];
        off += gn.size();
    }
    return g;
}

Eigen::VectorXcd stacked_channel(const Scenario &s, const PinchConfig &c, size_t user) {
    const cvec h = los_channel(s, c, user);
    Eigen::VectorXcd v(h.size());
    for (size_t i = 0; i < h.size(); ++i)
        v(i) = h[i];
    return v;
}

EquivalentPilot equivalent_pilot_matrix(const cvec &pilots, const Eigen::MatrixXcd &g_h) {
    if (pilots.empty())
        throw Error("equivalent_pilot_matrix: need at least one pilot symbol");
    const Eigen::Index n = g_h.rows();
    const Eigen::Index mn = g_h.cols();
    const Eigen::Index t = static_cast<Eigen::Index>(pilots.size());
    EquivalentPilot out;
    out.matrix.resize(n * t, mn);
    for (Eigen::Index i = 0; i < t; ++i)
        out.matrix.middleRows(i * n, n) = pilots[i] * g_h;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.matrix);
    const auto &sv = svd.singularValues();
    const double thresh = 1e-10 * sv(0);
    out.rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh)
            ++out.rank;
    return out;
}

SequentialLsResult ls_sequential(const Scenario &s,
                                 const std::vector<std::vector<double>> &candidates,
                                 const Eigen::MatrixXcd &h_true, const cvec &pilots,
                                 double noise_power, std::uint64_t seed) {
    const size_t n_wg = s.waveguides.size();
    if (candidates.size() != n_wg)
        throw Error("ls_sequential: candidate grid must cover every waveguide");
    const size_t m_cand = candidates[0].size();
    for (const auto &c : candidates)
        if (c.size() != m_cand)
            throw Error("ls_sequential: ragged candidate grids are not supported");
    if (h_true.rows() != static_cast<Eigen::Index>(n_wg) ||
        h_true.cols() != static_cast<Eigen::Index>(m_cand))
        throw Error("ls_sequential: h_true must be N x M");
    if (pilots.empty())
        throw Error("ls_sequential: empty pilot sequence");

    const size_t t_len = pilots.size();
    double s_energy = 0.0;
    for (cplx p : pilots)
        s_energy += std::norm(p);
    if (s_energy <= 0.0)
        throw Error("ls_sequential: zero pilot energy");

    auto gen = rng::engine(seed, 0);
    const double noise_scale = std::sqrt(noise_power);

    SequentialLsResult res;
    res.h_hat.resize(n_wg, m_cand);
    res.residuals.resize(m_cand);
    res.slots = static_cast<int>(m_cand);

    for (size_t m = 0; m < m_cand; ++m) {
        // slot m: candidate m of every waveguide radiates at full power
        Eigen::VectorXcd g_m(n_wg);
        for (size_t n = 0; n < n_wg; ++n) {
            const double phase = -2.0 * constants::pi * s.constants.n_eff *
                                 candidates[n][m] / s.constants.wavelength;
            g_m(n) = std::polar(1.0, phase);
        }
        if (g_m.cwiseAbs().minCoeff() <= 0.0)
            throw Error("ls_sequential: singular per-slot in-waveguide matrix");

        Eigen::MatrixXcd y(n_wg, t_len);
        for (size_t tt = 0; tt < t_len; ++tt)
            for (size_t n = 0; n < n_wg; ++n)
                y(n, tt) = std::conj(g_m(n)) * h_true(n, m) * pilots[tt] +
                           noise_scale * rng::std_complex_gaussian(gen);

        // LS over the pilot block, then per-waveguide division by conj(g)
        Eigen::VectorXcd corr = Eigen::VectorXcd::Zero(n_wg);
        for (size_t tt = 0; tt < t_len; ++tt)
            corr += y.col(tt) * std::conj(pilots[tt]);
        corr /= s_energy;
        for (size_t n = 0; n < n_wg; ++n)
            res.h_hat(n, m) = corr(n) / std::conj(g_m(n));

        double resid = 0.0;
        for (size_t tt = 0; tt < t_len; ++tt)
            for (size_t n = 0; n < n_wg; ++n)
                resid += std::norm(y(n, tt) - std::conj(g_m(n)) * res.h_hat(n, m) * pilots[tt]);
        res.residuals[m] = std::sqrt(resid);
    }

    const double err = (res.h_hat - h_true).squaredNorm();
    const double ref = h_true.squaredNorm();
    res.nmse = ref > 0.0 ? err / ref : 0.0;
    return res;
}

Dictionary planar_dictionary(const Scenario &s, const PinchConfig &c, int atoms) {
    const size_t total = c.total_pas();
    if (atoms <= 0)
        atoms = static_cast<int>(4 * total);
    if (atoms < static_cast<int>(total))
        throw Error("planar_dictionary: need L >= MN atoms");
    Dictionary d;
    d.psi.resize(total, atoms);
    d.sin_theta.resize(atoms);
    const double k0 = 2.0 * constants::pi / s.constants.wavelength;
    const double norm = 1.0 / std::sqrt(static_cast<double>(total));
    for (int l = 0; l < atoms; ++l) {
        const double st = -1.0 + 2.0 * (l + 0.5) / atoms;
        d.sin_theta[l] = st;
        size_t row = 0;
        for (const auto &xs : c.positions)
            for (double x : xs)
                d.psi(row++, l) = std::polar(norm, -k0 * x * st);
    }
    return d;
}

OmpResult omp_recover(const Eigen::VectorXcd &y, const Eigen::MatrixXcd &sensing,
                      const Eigen::MatrixXcd &dictionary, const OmpStop &stop) {
    if (sensing.cols() != dictionary.rows())
        throw Error("omp_recover: sensing/dictionary dimension mismatch");
    if (stop.sparsity <= 0 && stop.residual < 0.0)
        throw Error("omp_recover: no stop rule given");

    const Eigen::MatrixXcd a = sensing * dictionary;
    const Eigen::Index luns = a.cols();
    Eigen::VectorXd col_norm(luns);
    for (Eigen::Index j = 0; j < luns; ++j)
        col_norm(j) = std::max(a.col(j).norm(), 1e-300);

    OmpResult res;
    Eigen::VectorXcd residual = y;
    res.residual_trace.push_back(residual.norm());
    const int max_iter =
        stop.sparsity > 0 ? stop.sparsity
                          : static_cast<int>(std::min<Eigen::Index>(a.rows(), luns));

    for (int it = 0; it < max_iter; ++it) {
        if (stop.residual >= 0.0 && residual.norm() <= stop.residual)
            break;
        // greedy atom: largest normalized correlation not already chosen
        int best = -1;
        double best_corr = -1.0;
        for (Eigen::Index j = 0; j < luns; ++j) {
            if (std::find(res.support.begin(), res.support.end(), static_cast<int>(j)) !=
                res.support.end())
                continue;
            const double corr = std::abs(a.col(j).dot(residual)) / col_norm(j);
            if (corr > best_corr) {
                best_corr = corr;
                best = static_cast<int>(j);
            }
        }
        if (best < 0)
            break;
        res.support.push_back(best);

        Eigen::MatrixXcd sub(a.rows(), res.support.size());
        for (size_t k = 0; k < res.support.size(); ++k)
            sub.col(k) = a.col(res.support[k]);
        res.coeffs = sub.colPivHouseholderQr().solve(y);
        residual = y - sub * res.coeffs;
        res.residual_trace.push_back(residual.norm());
    }

    res.residual_norm = residual.norm();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(luns);
    for (size_t k = 0; k < res.support.size(); ++k)
        x(res.support[k]) = res.coeffs(k);
    res.h_hat = dictionary * x;
    return res;
}

cplx los_point_response(const RfConstants &constants, double x, double x_r, double zeta) {
    const double r = std::hypot(x - x_r, zeta);
    if (r < 1e-9)
        throw Error("los_point_response: degenerate distance");
    const double phase =
        -2.0 * constants::pi * (r + constants.n_eff * x) / constants.wavelength;
    return std::polar(constants.eta_amp() / r, phase);
}

cvec probe_sweep(const Scenario &s, const std::vector<double> &probe_x, size_t user,
                 double noise_power, std::uint64_t seed) {
    const double zeta = lateral_offset(s.waveguides[0], s.users[user]);
    auto gen = rng::engine(seed, 1);
    const double scale = std::sqrt(noise_power);
    cvec y;
    y.reserve(probe_x.size());
    for (double x : probe_x)
        y.push_back(los_point_response(s.constants, x, s.users[user].x, zeta) +
                    scale * rng::std_complex_gaussian(gen));
    return y;
}

namespace {

double sense_residual(const Scenario &s, const std::vector<double> &probe_x, const cvec &y,
                      double x_r, double zeta) {
    double acc = 0.0;
    for (size_t j = 0; j < probe_x.size(); ++j)
        acc += std::norm(y[j] - los_point_response(s.constants, probe_x[j], x_r, zeta));
    return acc;
}

// golden-section minimization of a unimodal-ish 1-D slice
double golden_min(const std::function<double(double)> &f, double lo, double hi, int iters) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

namespace {

// amplitude-only misfit: smooth in (x_R, zeta), used to localize the basin of
// the phase-aware residual (which oscillates on the wavelength scale)
double amplitude_residual(const Scenario &s, const std::vector<double> &probe_x,
                          const cvec &y, double x_r, double zeta) {
    const double eta = s.constants.eta_amp();
    double acc = 0.0;
    for (size_t j = 0; j < probe_x.size(); ++j) {
        const double r = std::hypot(probe_x[j] - x_r, zeta);
        const double d = std::abs(y[j]) - eta / std::max(r, 1e-9);
        acc += d * d;
    }
    return acc;
}

} // namespace

ParameterSenseResult parameter_sense(const Scenario &s, const std::vector<double> &probe_x,
                                     const cvec &y, const SenseSettings &settings) {
    if (probe_x.size() != y.size() || probe_x.size() < 2)
        throw Error("parameter_sense: need at least two probe measurements");
    const Waveguide &w = s.waveguides[0];
    const double lambda = s.constants.wavelength;

    // stage 1: coarse amplitude-only grid over the full parameter ranges
    double best = 1e300;
    double x_r = 0.0, zeta = settings.zeta_min;
    for (int i = 0; i < settings.xr_points; ++i) {
        const double xr = w.length * i / static_cast<double>(settings.xr_points - 1);
        for (int j = 0; j < settings.zeta_points; ++j) {
            const double zt = settings.zeta_min +
                              (settings.zeta_max - settings.zeta_min) * j /
                                  static_cast<double>(settings.zeta_points - 1);
            const double r = amplitude_residual(s, probe_x, y, xr, zt);
            if (r < best) {
                best = r;
                x_r = xr;
                zeta = zt;
            }
        }
    }

    // stage 2: phase-aware fine grid around the amplitude winner; the basin of
    // the complex residual is about half a wavelength wide in each parameter,
    // while the amplitude stage localizes to a few grid cells under noise
    const double span_x =
        std::max({12.0 * lambda, 4.0 * w.length / settings.xr_points, 0.3});
    const double span_z =
        std::max({12.0 * lambda,
                  4.0 * (settings.zeta_max - settings.zeta_min) / settings.zeta_points, 0.3});
    const double pitch = lambda / 8.0;
    best = 1e300;
    double fx = x_r, fz = zeta;
    for (double xr = std::max(0.0, x_r - span_x); xr <= std::min(w.length, x_r + span_x);
         xr += pitch)
        for (double zt = std::max(settings.zeta_min, zeta - span_z);
             zt <= std::min(settings.zeta_max, zeta + span_z); zt += pitch) {
            const double r = sense_residual(s, probe_x, y, xr, zt);
            if (r < best) {
                best = r;
                fx = xr;
                fz = zt;
            }
        }
    x_r = fx;
    zeta = fz;

    // stage 3: alternating golden-section polish inside the basin
    double win = pitch;
    for (int round = 0; round < settings.refine_rounds; ++round) {
        x_r = golden_min(
            [&](double v) { return sense_residual(s, probe_x, y, v, zeta); },
            std::max(0.0, x_r - win), std::min(w.length, x_r + win), settings.golden_iters);
        zeta = golden_min(
            [&](double v) { return sense_residual(s, probe_x, y, x_r, v); },
            std::max(settings.zeta_min, zeta - win),
            std::min(settings.zeta_max, zeta + win), settings.golden_iters);
        win *= 0.5;
    }

    ParameterSenseResult res;
    res.x_r = x_r;
    res.zeta = zeta;
    res.residual = std::sqrt(sense_residual(s, probe_x, y, x_r, zeta));
    return res;
}

BeamTrainResult beam_train_exhaustive(const Scenario &s, const Codebooks &codebooks,
                                      size_t user, double noise_power, std::uint64_t seed) {
    if (codebooks.positions.empty() || codebooks.beams.empty())
        throw Error("beam_train_exhaustive: empty codebook");
    auto gen = rng::engine(seed, 2);
    const double scale = std::sqrt(noise_power);

    BeamTrainResult res;
    double best = -1.0;
    for (size_t i = 0; i < codebooks.positions.size(); ++i) {
        const cvec e = effective_gains(s, codebooks.positions[i], user);
        for (size_t j = 0; j < codebooks.beams.size(); ++j) {
            const cvec &wj = codebooks.beams[j];
            if (wj.size() != e.size())
                throw Error("beam_train_exhaustive: beam length mismatch");
            cplx amp = 0.0;
            for (size_t n = 0; n < e.size(); ++n)
                amp += e[n] * wj[n];
            const double measured = std::norm(amp + scale * rng::std_complex_gaussian(gen));
            ++res.measurements;
            if (measured > best) {
                best = measured;
                res.best_position = i;
                res.best_beam = j;
                res.measured_gain = measured;
                res.true_gain = std::norm(amp);
            }
        }
    }
    return res;
}

namespace {

struct Probe {
    double x, y, measured, truth;
};

Probe measure(const std::function<double(double, double)> &gain, double x, double y,
              double scale, std::mt19937_64 &gen) {
    const double truth = gain(x, y);
    const cplx amp = std::sqrt(std::max(0.0, truth)) + scale * rng::std_complex_gaussian(gen);
    return {x, y, std::norm(amp), truth};
}

} // namespace

HierarchicalResult beam_train_hierarchical(const std::function<double(double, double)> &gain,
                                           const HierarchicalSpec &spec, double noise_power,
                                           std::uint64_t seed) {
    if (spec.cells_x < 1 || spec.cells_y < 1 || spec.fine_x < 1 || spec.fine_y < 1)
        throw Error("beam_train_hierarchical: invalid cell counts");
    if (!(spec.x_hi > spec.x_lo) || !(spec.y_hi > spec.y_lo))
        throw Error("beam_train_hierarchical: empty served region");
    auto gen = rng::engine(seed, 3);
    const double scale = std::sqrt(noise_power);
    const double wx = (spec.x_hi - spec.x_lo) / spec.cells_x;
    const double wy = (spec.y_hi - spec.y_lo) / spec.cells_y;

    HierarchicalResult res;
    Probe best{0, 0, -1.0, 0.0};
    auto consider = [&](const Probe &p) {
        ++res.measurements;
        if (p.measured > best.measured)
            best = p;
    };

    auto cell_center_x = [&](int ix) { return spec.x_lo + (ix + 0.5) * wx; };
    auto cell_center_y = [&](int iy) { return spec.y_lo + (iy + 0.5) * wy; };

    // stage 1: binary-refined search along x at the region's y midline
    const double y_mid = 0.5 * (spec.y_lo + spec.y_hi);
    int lo = 0, hi = spec.cells_x; // [lo, hi)
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        const Probe left = measure(gain, cell_center_x((lo + mid) / 2), y_mid, scale, gen);
        const Probe right = measure(gain, cell_center_x((mid + hi) / 2), y_mid, scale, gen);
        consider(left);
        consider(right);
        if (left.measured >= right.measured)
            hi = mid;
        else
            lo = mid;
    }
    const int ix = lo;

    // stage 2: y-search at the winning x column
    lo = 0;
    hi = spec.cells_y;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        const Probe down = measure(gain, cell_center_x(ix), cell_center_y((lo + mid) / 2),
                                   scale, gen);
        const Probe up = measure(gain, cell_center_x(ix), cell_center_y((mid + hi) / 2),
                                 scale, gen);
        consider(down);
        consider(up);
        if (down.measured >= up.measured)
            hi = mid;
        else
            lo = mid;
    }
    const int iy = lo;

    // stage 3: exhaustive fine grid inside the winning cell
    const double cx = spec.x_lo + ix * wx;
    const double cy = spec.y_lo + iy * wy;
    for (int fx = 0; fx < spec.fine_x; ++fx)
        for (int fy = 0; fy < spec.fine_y; ++fy)
            consider(measure(gain, cx + (fx + 0.5) * wx / spec.fine_x,
                             cy + (fy + 0.5) * wy / spec.fine_y, scale, gen));

    res.x = best.x;
    res.y = best.y;
    res.measured_gain = best.measured;
    res.true_gain = best.truth;
    return res;
}

std::function<double(double, double)> pa_placement_gain(const Scenario &s, size_t user) {
    const double z_g = s.waveguides[0].z;
    const double eta = s.constants.eta_amp();
    const double p_t = s.constants.transmit_power;
    const UserPosition u = s.users[user];
    return [=](double x, double y) {
        const double d2 =
            (x - u.x) * (x - u.x) + (y - u.y) * (y - u.y) + (z_g - u.z) * (z_g - u.z);
        return p_t * eta * eta / d2;
    };
}

} // namespace passkit
