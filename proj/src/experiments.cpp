// SPDX-License-Identifier: Apache-2.0

#include "passkit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <future>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "passkit/beamforming.hpp"
#include "passkit/capacity.hpp"
#include "passkit/csi.hpp"
#include "passkit/metrics.hpp"
#include "passkit/rng.hpp"
#include "passkit/wideband.hpp"

namespace passkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string &path, const std::vector<std::string> &header) : path_(path) {
        out_.open(path, std::ios::binary); // binary keeps LF endings everywhere
        if (!out_)
            throw Error("cannot open output CSV: " + path);
        write_row(header);
    }
    void write_row(const std::vector<std::string> &cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    void write(const std::vector<double> &cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double v : cells)
            s.push_back(fmt(v));
        write_row(s);
    }
    const std::string &path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
};

struct ParamReader {
    const std::map<std::string, std::string> &params;
    mutable json used = json::object();

    double get(const std::string &key, double def) const {
        auto it = params.find(key);
        const double v = it == params.end() ? def : std::stod(it->second);
        used[key] = v;
        return v;
    }
    int geti(const std::string &key, int def) const {
        return static_cast<int>(std::llround(get(key, def)));
    }
    std::string gets(const std::string &key, const std::string &def) const {
        auto it = params.find(key);
        const std::string v = it == params.end() ? def : it->second;
        used[key] = v;
        return v;
    }
    std::vector<double> list(const std::string &key, const std::string &def) const {
        std::vector<double> out;
        std::istringstream ss(gets(key, def));
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(std::stod(cell));
        return out;
    }
};

struct MeanEstimate {
    double mean, lo, hi;
};

// sample-mean confidence interval at 99% (normal approximation); batches use
// independent seed streams and are merged in batch order, so the result does
// not depend on the worker count
template <typename F>
MeanEstimate mc_mean(F &&sample, std::uint64_t trials, std::uint64_t seed,
                     std::uint64_t stream, int threads = 1) {
    constexpr std::uint64_t batch = 1 << 16;
    const std::uint64_t batches = (trials + batch - 1) / batch;
    std::vector<std::pair<double, double>> partial(batches);
    auto run_batch = [&](std::uint64_t b) {
        auto gen = rng::engine(seed, stream * 65536 + b);
        const std::uint64_t todo = std::min(batch, trials - b * batch);
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = 0; i < todo; ++i) {
            const double v = sample(gen);
            s += v;
            s2 += v * v;
        }
        partial[b] = {s, s2};
    };
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < batches; ++b)
            run_batch(b);
    } else {
        std::vector<std::future<void>> jobs;
        std::atomic<std::uint64_t> next{0};
        for (int t = 0; t < threads; ++t)
            jobs.push_back(std::async(std::launch::async, [&]() {
                for (std::uint64_t b = next++; b < batches; b = next++)
                    run_batch(b);
            }));
        for (auto &j : jobs)
            j.get();
    }
    double sum = 0.0, sum2 = 0.0;
    for (const auto &p : partial) {
        sum += p.first;
        sum2 += p.second;
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    const double half = 2.5758293035489004 * std::sqrt(var / n);
    return {mean, mean - half, mean + half};
}

// ---------------------------------------------------------------------------
// individual experiments
// ---------------------------------------------------------------------------

struct Ctx {
    const ExperimentSpec &spec;
    const ParamReader &p;
    RunResult &result;
    Scenario scenario;
};

Scenario synthetic_single_wg(double zeta, double delta_min, double lambda, double n_eff,
                             double p_t, int max_pas) {
    Scenario s;
    s.constants.wavelength = lambda;
    s.constants.n_eff = n_eff;
    s.constants.noise_power = 1e-12;
    s.constants.transmit_power = p_t;
    Waveguide w;
    w.y = 0.0;
    w.z = zeta;
    w.delta_min = delta_min;
    w.length = std::max(1.0, 1.25 * (max_pas + 1) * delta_min);
    s.waveguides = {w};
    s.users = {{0.5 * w.length, 0.0, 0.0}};
    return s;
}

void run_scaling_law(Ctx &ctx) {
    const auto &p = ctx.p;
    const double zeta = p.get("zeta", 3.0);
    const double delta_min = p.get("delta_min", 0.005);
    const double lambda = p.get("lambda", 0.01);
    const double n_eff = p.get("n_eff", 1.4);
    const double p_t = p.get("p_t", 1.0);
    std::vector<double> ms = p.list("m_list", "4,8,16,32,64");

    std::vector<int> m_list;
    for (double m : ms)
        m_list.push_back(static_cast<int>(m));
    const int m_max = *std::max_element(m_list.begin(), m_list.end());
    const Scenario s = synthetic_single_wg(zeta, delta_min, lambda, n_eff, p_t, m_max);

    CsvWriter csv(ctx.spec.out_dir + "/scaling_law.csv", {"M", "P_opt", "P_approx", "ratio"});
    for (const ScalingPoint &pt : scaling_law_curve(s, 0, 0, m_list))
        csv.write({static_cast<double>(pt.num_pas), pt.p_opt, pt.p_approx,
                   pt.p_opt / pt.p_approx});
    ctx.result.csv_files.push_back(csv.path());
}

void run_ergodic(Ctx &ctx) {
    const auto &p = ctx.p;
    const double d = p.get("d", 10.0);
    const double z_g = p.get("z_g", 3.0);
    const double lambda = p.get("lambda", 0.01);
    const double eta = p.get("eta_pow", std::pow(lambda / (4 * constants::pi), 2));
    const double noise_dbm = p.get("noise_dbm", -90.0);
    const double p_lo = p.get("p_dbm_min", 0.0), p_hi = p.get("p_dbm_max", 40.0);
    const double p_step = p.get("p_dbm_step", 2.0);
    const auto trials = static_cast<std::uint64_t>(p.get("mc_trials", 1e5));

    const double gamma0 = p.get("gamma0", 2000.0);
    CsvWriter cp(ctx.spec.out_dir + "/ergodic_pass.csv", {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter cc(ctx.spec.out_dir + "/ergodic_con.csv", {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter mp(ctx.spec.out_dir + "/ergodic_pass_mc.csv",
                 {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter mc(ctx.spec.out_dir + "/ergodic_con_mc.csv",
                 {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter cvp(ctx.spec.out_dir + "/coverage_pass.csv",
                  {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter cvc(ctx.spec.out_dir + "/coverage_con_mc.csv",
                  {"param", "value", "ci_lo", "ci_hi"});

    std::uint64_t stream = 0;
    for (double p_dbm = p_lo; p_dbm <= p_hi + 1e-9; p_dbm += p_step) {
        const double snr = std::pow(10.0, (p_dbm - noise_dbm) / 10.0);
        const double rp = ergodic_rate_pass(d, z_g, snr, eta);
        const double rc = ergodic_rate_fixed(d, z_g, snr, eta);
        cp.write({p_dbm, rp, rp, rp});
        cc.write({p_dbm, rc, rc, rc});

        const double s = snr * eta;
        const auto pass = mc_mean(
            [&](std::mt19937_64 &gen) {
                std::uniform_real_distribution<double> u(-0.5 * d, 0.5 * d);
                const double y = u(gen);
                return std::log2(1.0 + s / (y * y + z_g * z_g));
            },
            trials, ctx.spec.seed, stream++, ctx.spec.threads);
        const auto con = mc_mean(
            [&](std::mt19937_64 &gen) {
                std::uniform_real_distribution<double> u(-0.5 * d, 0.5 * d);
                const double x = u(gen), y = u(gen);
                return std::log2(1.0 + s / (x * x + y * y + z_g * z_g));
            },
            trials, ctx.spec.seed, stream++, ctx.spec.threads);
        mp.write({p_dbm, pass.mean, pass.lo, pass.hi});
        mc.write({p_dbm, con.mean, con.lo, con.hi});

        const double cov = coverage_pass(d, z_g, snr, eta, gamma0);
        cvp.write({p_dbm, cov, cov, cov});
        const McEstimate cov_con = coverage_fixed_mc(
            d, z_g, snr, eta, gamma0, trials, rng::derive(ctx.spec.seed, stream++));
        cvc.write({p_dbm, cov_con.p, cov_con.lo, cov_con.hi});
    }
    for (auto *w : {&cp, &cc, &mp, &mc, &cvp, &cvc})
        ctx.result.csv_files.push_back(w->path());
}

void run_outage(Ctx &ctx) {
    const auto &p = ctx.p;
    const double dy = p.get("dy", 10.0);
    const double z_g = p.get("z_g", 3.0);
    const double beta = p.get("beta", 0.1);
    const double lambda = p.get("lambda", 0.01);
    const double eta = p.get("eta_pow", std::pow(lambda / (4 * constants::pi), 2));
    const double snr_db = p.get("snr_db", 120.0);
    const double snr = std::pow(10.0, snr_db / 10.0);
    const double r_target = p.get("r_target", 2.0);
    const auto trials = static_cast<std::uint64_t>(p.get("mc_trials", 1e6));
    const std::vector<double> dx_list = p.list("dx_list", "5,10,20,30");

    CsvWriter cp(ctx.spec.out_dir + "/outage_pass.csv", {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter cc(ctx.spec.out_dir + "/outage_con.csv", {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter cg(ctx.spec.out_dir + "/outage_gap.csv", {"param", "value", "ci_lo", "ci_hi"});
    CsvWriter cm(ctx.spec.out_dir + "/outage_pass_mc.csv",
                 {"param", "value", "ci_lo", "ci_hi"});

    std::uint64_t stream = 0;
    for (double dx : dx_list) {
        const ServiceRegion region{dx, dy};
        const OutageResult pass = outage_pass(region, z_g, snr, eta, beta, r_target);
        const double con = outage_fixed_highsnr(region, z_g, beta);
        cp.write({dx, pass.outage, pass.outage, pass.outage});
        cc.write({dx, con, con, con});
        cg.write({dx, con - pass.high_snr, 0.0, 0.0});
        const McEstimate mc =
            outage_pass_mc(region, z_g, snr, eta, beta, r_target,
                           trials, rng::derive(ctx.spec.seed, stream++));
        cm.write({dx, mc.p, mc.lo, mc.hi});
    }
    for (auto *w : {&cp, &cc, &cg, &cm})
        ctx.result.csv_files.push_back(w->path());
}

void write_region(CsvWriter &csv, const RateRegion &region, const std::string &tag) {
    for (const RatePair &v : region.hull)
        csv.write_row({fmt(v.r1), fmt(v.r2), tag});
}

void run_capacity(Ctx &ctx, int num_pas) {
    const auto &p = ctx.p;
    const Scenario &s = ctx.scenario;
    const double p1 = p.get("p1", s.constants.transmit_power);
    const double p2 = p.get("p2", s.constants.transmit_power);
    const double x_fixed = p.get("x_fixed", 0.5 * s.waveguides[0].length);
    num_pas = ctx.p.geti("num_pas", num_pas);

    CapacitySettings settings;
    settings.alpha_points = p.geti("alpha_points", 41);
    settings.single_pinch_grid = p.geti("single_pinch_grid", 801);

    CsvWriter csv(ctx.spec.out_dir + "/regions.csv", {"R1", "R2", "tag"});
    write_region(csv, capacity_region(s, p1, p2, num_pas, settings), "capacity");
    write_region(csv, oma_region(s, p1, p2, num_pas, OmaMode::Tdma, settings), "tdma");
    write_region(csv, oma_region(s, p1, p2, num_pas, OmaMode::Fdma, settings), "fdma");
    write_region(csv, fixed_antenna_region(s, x_fixed, p1, p2), "fixed-antenna");
    ctx.result.csv_files.push_back(csv.path());
}

void run_mu_wsr(Ctx &ctx) {
    const auto &p = ctx.p;
    const Scenario &s = ctx.scenario;
    const int num_pas = p.geti("num_pas", 2);
    const auto oracle_samples = static_cast<std::uint64_t>(p.get("oracle_samples", 1e4));
    SearchSettings settings;
    settings.grid_points = p.geti("grid_points", 200);
    settings.max_sweeps = p.geti("max_sweeps", 8);

    const size_t k = s.users.size();
    const std::vector<double> weights(k, 1.0);

    CsvWriter csv(ctx.spec.out_dir + "/mu_wsr.csv",
                  {"protocol", "wsr", "oracle_wsr", "ratio"});

    struct Row {
        const char *name;
        MuResult res;
    };
    std::vector<Row> rows;
    rows.push_back({"ws", ws_wsr(s, weights, num_pas, settings)});
    if (k == s.waveguides.size())
        rows.push_back({"wd", wd_wsr(s, weights, num_pas, settings)});
    rows.push_back({"wm", wm_wsr(s, weights, num_pas, settings)});

    std::uint64_t stream = 100;
    for (const Row &row : rows) {
        double oracle = 0.0;
        auto gen = rng::engine(ctx.spec.seed, stream++);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double sigma2 = s.constants.noise_power;
        const double p_t = s.constants.transmit_power;
        for (std::uint64_t t = 0; t < oracle_samples; ++t) {
            std::vector<std::vector<double>> x(s.waveguides.size());
            for (size_t n = 0; n < x.size(); ++n) {
                const Waveguide &w = s.waveguides[n];
                std::vector<double> xs;
                const double span = w.length - (num_pas - 1) * w.delta_min;
                for (int m = 0; m < num_pas; ++m)
                    xs.push_back(u01(gen) * span);
                std::sort(xs.begin(), xs.end());
                for (int m = 0; m < num_pas; ++m)
                    xs[m] += m * w.delta_min;
                x[n] = xs;
            }
            double wsr = 0.0;
            if (row.name == std::string("ws")) {
                for (size_t uu = 0; uu < k; ++uu) {
                    const cvec e = effective_gains(s, x, uu);
                    double g2 = 0.0;
                    for (cplx v : e)
                        g2 += std::norm(v);
                    wsr += std::log2(1.0 + p_t * g2 / sigma2) / static_cast<double>(k);
                }
            } else if (row.name == std::string("wd")) {
                std::vector<double> nu(k);
                double total = 0.0;
                for (size_t uu = 0; uu < k; ++uu)
                    total += (nu[uu] = u01(gen));
                for (auto &v : nu)
                    v *= p_t / total;
                for (size_t uu = 0; uu < k; ++uu) {
                    const cvec e = effective_gains(s, x, uu);
                    double interf = sigma2;
                    for (size_t i = 0; i < k; ++i)
                        if (i != uu)
                            interf += std::norm(e[i]) * nu[i];
                    wsr += std::log2(1.0 + std::norm(e[uu]) * nu[uu] / interf);
                }
            } else {
                // random beamformers with the full power budget
                std::vector<cvec> wv(k, cvec(s.waveguides.size()));
                double norm2 = 0.0;
                std::normal_distribution<double> g(0.0, 1.0);
                for (auto &wk : wv)
                    for (auto &c : wk) {
                        c = cplx(g(gen), g(gen));
                        norm2 += std::norm(c);
                    }
                const double scale = std::sqrt(p_t / norm2);
                for (auto &wk : wv)
                    for (auto &c : wk)
                        c *= scale;
                std::vector<cvec> e(k);
                for (size_t uu = 0; uu < k; ++uu)
                    e[uu] = effective_gains(s, x, uu);
                for (size_t uu = 0; uu < k; ++uu) {
                    cplx des = 0.0;
                    double interf = sigma2;
                    for (size_t i = 0; i < k; ++i) {
                        cplx amp = 0.0;
                        for (size_t n = 0; n < e[uu].size(); ++n)
                            amp += e[uu][n] * wv[i][n];
                        if (i == uu)
                            des = amp;
                        else
                            interf += std::norm(amp);
                    }
                    wsr += std::log2(1.0 + std::norm(des) / interf);
                }
            }
            oracle = std::max(oracle, wsr);
        }
        csv.write_row({row.name, fmt(row.res.wsr), fmt(oracle), fmt(row.res.wsr / oracle)});
    }
    ctx.result.csv_files.push_back(csv.path());
}

void run_wideband(Ctx &ctx) {
    const auto &p = ctx.p;
    const double r_o = p.get("r_o", 2e-3);
    const double n_o = p.get("n_o", 1.4);
    const double n_c = p.get("n_c", 1.0);
    const double f_c = p.get("f_center", 30e9);
    const double bw = p.get("bandwidth", 20e9);
    const int q = p.geti("subcarriers", 16);
    const int num_pas = p.geti("num_pas", 4);

    Scenario s = ctx.scenario;
    s.constants.wavelength = constants::c0 / f_c;

    const WaveguideDispersion disp = WaveguideDispersion::default_curve(r_o, n_o, n_c);
    OfdmGrid grid = OfdmGrid::uniform(f_c, bw, q, p.get("sample_rate", 2 * bw));
    validate_band(grid, disp, p.get("lower_cutoff", 0.0));

    SearchSettings settings;
    settings.grid_points = p.geti("grid_points", 300);

    const auto xnb = narrowband_center_positions(grid, disp, s, num_pas, settings);
    grid.l_cp = cp_length(grid, disp, {xnb}, s, p.get("multipath_delay", 0.0));
    const double rate_nb = ofdm_rate(xnb, grid, disp, s);
    const WidebandResult wb = wideband_optimize(grid, disp, s, num_pas, settings);

    CsvWriter csv(ctx.spec.out_dir + "/wideband.csv", {"variant", "rate", "sum_objective"});
    csv.write_row({"wideband_opt", fmt(wb.rate), fmt(wb.sum_objective)});
    {
        double sum_nb = wb.sum_objective; // recompute narrowband sum for the record
        sum_nb = rate_nb * (grid.l_cp + static_cast<double>(grid.f.size()));
        csv.write_row({"narrowband_center", fmt(rate_nb), fmt(sum_nb)});
        csv.write_row({"margin", fmt(wb.rate - rate_nb), fmt(wb.sum_objective - sum_nb)});
    }
    ctx.result.csv_files.push_back(csv.path());
}

void run_csi_nmse(Ctx &ctx) {
    const auto &p = ctx.p;
    const Scenario &s = ctx.scenario;
    const int trials = p.geti("trials", 10);
    const double snr_db = p.get("snr_db", 20.0);
    const int m_cand = p.geti("candidates", 16);
    const int pilot_len = p.geti("pilot_len", 4);
    const std::string only = p.gets("method", "all");

    CsvWriter csv(ctx.spec.out_dir + "/csi_nmse.csv",
                  {"seed", "method", "overhead", "nmse_db"});

    const Waveguide &w = s.waveguides[0];
    std::vector<std::vector<double>> cands(s.waveguides.size());
    for (size_t n = 0; n < cands.size(); ++n)
        for (int m = 0; m < m_cand; ++m)
            cands[n].push_back(w.length * (m + 0.5) / m_cand);

    PinchConfig grid_cfg;
    grid_cfg.positions = cands;
    for (auto &xs : cands)
        grid_cfg.power.emplace_back(xs.size(), 1.0 / xs.size());

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = rng::derive(ctx.spec.seed, t);
        // reference channel and noise level from the scenario user 0
        Eigen::MatrixXcd h_true(s.waveguides.size(), m_cand);
        {
            const Eigen::VectorXcd hv = stacked_channel(s, grid_cfg, 0);
            for (size_t n = 0; n < s.waveguides.size(); ++n)
                for (int m = 0; m < m_cand; ++m)
                    h_true(n, m) = hv(n * m_cand + m);
        }
        const double sig_pow = h_true.squaredNorm() / h_true.size();
        const double noise = sig_pow / std::pow(10.0, snr_db / 10.0);

        if (only == "all" || only == "seq") {
            cvec pilots(pilot_len, cplx(1.0, 0.0));
            const auto res = ls_sequential(s, cands, h_true, pilots, noise, seed);
            csv.write_row({std::to_string(seed), "seq", std::to_string(res.slots),
                           fmt(10.0 * std::log10(std::max(res.nmse, 1e-30)))});
        }
        if (only == "all" || only == "omp") {
            // sparse synthetic channel over a lambda/2 grid, sensed by random
            // half-active activation masks
            auto gen = rng::engine(seed, 7);
            Scenario dense = s;
            const int m_omp = 64;
            dense.waveguides.resize(1);
            dense.waveguides[0].delta_min = 0.5 * dense.constants.wavelength;
            dense.waveguides[0].length = m_omp * dense.waveguides[0].delta_min;
            PinchConfig dense_cfg;
            dense_cfg.positions.resize(1);
            for (int i = 0; i < m_omp; ++i)
                dense_cfg.positions[0].push_back(dense.waveguides[0].length * (i + 0.5) /
                                                 m_omp);
            dense_cfg.power.emplace_back(m_omp, 1.0 / m_omp);
            const Dictionary dict = planar_dictionary(dense, dense_cfg, m_omp);
            const Eigen::MatrixXcd gh = inwaveguide_matrix(dense, dense_cfg).adjoint();
            const int k_sparse = 3;
            Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dict.psi.cols());
            std::uniform_int_distribution<int> atom(0, static_cast<int>(dict.psi.cols()) - 1);
            std::normal_distribution<double> g(0.0, 1.0);
            for (int kk = 0; kk < k_sparse; ++kk)
                x(atom(gen)) = cplx(g(gen), g(gen)) + cplx(2.0, 0.0);
            const Eigen::VectorXcd h = dict.psi * x;
            const int slots = p.geti("omp_slots", 18);
            Eigen::MatrixXcd sensing = Eigen::MatrixXcd::Zero(slots, m_omp);
            std::vector<int> idx(m_omp);
            for (int c = 0; c < m_omp; ++c)
                idx[c] = c;
            for (int r = 0; r < slots; ++r) {
                std::shuffle(idx.begin(), idx.end(), gen);
                for (int c = 0; c < m_omp / 2; ++c)
                    sensing(r, idx[c]) =
                        std::conj(gh(0, idx[c])) / std::sqrt(m_omp / 2.0);
            }
            Eigen::VectorXcd y = sensing * h;
            for (int r = 0; r < slots; ++r)
                y(r) += std::sqrt(noise) * rng::std_complex_gaussian(gen);
            OmpStop stop;
            stop.sparsity = k_sparse;
            const OmpResult res = omp_recover(y, sensing, dict.psi, stop);
            const double nmse = (res.h_hat - h).squaredNorm() / h.squaredNorm();
            csv.write_row({std::to_string(seed), "omp", std::to_string(slots),
                           fmt(10.0 * std::log10(std::max(nmse, 1e-30)))});
        }
        if (only == "all" || only == "param") {
            const int probes = p.geti("probes", 12);
            std::vector<double> px;
            for (int i = 0; i < probes; ++i)
                px.push_back(w.length * (i + 0.5) / probes);
            const cvec y = probe_sweep(s, px, 0, noise, seed);
            const ParameterSenseResult res = parameter_sense(s, px, y);
            // NMSE of the reconstructed channel on a dense evaluation grid
            double err = 0.0, ref = 0.0;
            const double zeta_true = lateral_offset(w, s.users[0]);
            for (int i = 0; i < 64; ++i) {
                const double x = w.length * (i + 0.5) / 64;
                const cplx truth =
                    los_point_response(s.constants, x, s.users[0].x, zeta_true);
                const cplx fit = los_point_response(s.constants, x, res.x_r, res.zeta);
                err += std::norm(fit - truth);
                ref += std::norm(truth);
            }
            csv.write_row({std::to_string(seed), "param", std::to_string(probes),
                           fmt(10.0 * std::log10(std::max(err / ref, 1e-30)))});
        }
    }
    ctx.result.csv_files.push_back(csv.path());
}

void run_beam_train(Ctx &ctx) {
    const auto &p = ctx.p;
    const Scenario &s = ctx.scenario;
    const int trials = p.geti("trials", 10);
    const int cells = p.geti("cells", 64);
    const int fine = p.geti("fine", 8);
    const double snr_db = p.get("snr_db", 10.0);
    const std::string only = p.gets("method", "all");

    const Waveguide &w = s.waveguides[0];
    HierarchicalSpec spec;
    spec.x_lo = 0.0;
    spec.x_hi = w.length;
    spec.y_lo = p.get("y_lo", -5.0);
    spec.y_hi = p.get("y_hi", 5.0);
    spec.cells_x = spec.cells_y = cells;
    spec.fine_x = spec.fine_y = fine;

    CsvWriter csv(ctx.spec.out_dir + "/beam_train.csv",
                  {"seed", "method", "overhead", "top1", "gain_ratio"});

    const auto gain = pa_placement_gain(s, 0);
    // noiseless exhaustive winner over the cell-center codebook
    double best_true = 0.0;
    const double wx = (spec.x_hi - spec.x_lo) / cells;
    const double wy = (spec.y_hi - spec.y_lo) / cells;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j)
            best_true = std::max(
                best_true, gain(spec.x_lo + (i + 0.5) * wx, spec.y_lo + (j + 0.5) * wy));
    const double noise = best_true / std::pow(10.0, snr_db / 10.0);

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = rng::derive(ctx.spec.seed, 1000 + t);
        if (only == "all" || only == "exhaustive") {
            auto gen = rng::engine(seed, 4);
            double best_meas = -1.0, winner_true = 0.0;
            for (int i = 0; i < cells; ++i)
                for (int j = 0; j < cells; ++j) {
                    const double truth =
                        gain(spec.x_lo + (i + 0.5) * wx, spec.y_lo + (j + 0.5) * wy);
                    const double meas = std::norm(std::sqrt(truth) +
                                                  std::sqrt(noise) *
                                                      rng::std_complex_gaussian(gen));
                    if (meas > best_meas) {
                        best_meas = meas;
                        winner_true = truth;
                    }
                }
            csv.write_row({std::to_string(seed), "exhaustive",
                           std::to_string(cells * cells),
                           winner_true >= best_true * (1.0 - 1e-12) ? "1" : "0",
                           fmt(winner_true / best_true)});
        }
        if (only == "all" || only == "hierarchical") {
            const HierarchicalResult res =
                beam_train_hierarchical(gain, spec, noise, seed);
            csv.write_row({std::to_string(seed), "hierarchical",
                           std::to_string(res.measurements),
                           res.true_gain >= 0.99 * best_true ? "1" : "0",
                           fmt(res.true_gain / best_true)});
        }
    }
    ctx.result.csv_files.push_back(csv.path());
}

} // namespace

std::vector<std::string> list_experiments() {
    return {"scaling-law", "ergodic",  "outage",   "capacity-sp", "capacity-mp",
            "mu-wsr",      "wideband", "csi-nmse", "beam-train"};
}

Scenario default_two_user_scenario() {
    Scenario s;
    s.constants.wavelength = 0.01;
    s.constants.n_eff = 1.4;
    s.constants.noise_power = 1e-10;
    s.constants.transmit_power = 1e-3;
    Waveguide w;
    w.y = 0.0;
    w.z = 2.0;
    w.length = 10.0;
    w.delta_min = 0.05;
    s.waveguides = {w};
    s.users = {{3.0, 1.0, 0.0}, {7.0, -1.5, 0.0}};
    return s;
}

Scenario default_multiuser_scenario() {
    Scenario s;
    s.constants.wavelength = 0.01;
    s.constants.n_eff = 1.4;
    s.constants.noise_power = 1e-10;
    s.constants.transmit_power = 1e-3;
    Waveguide w0;
    w0.y = 0.0;
    w0.z = 2.0;
    w0.length = 10.0;
    w0.delta_min = 0.05;
    Waveguide w1 = w0;
    w1.y = 6.0;
    s.waveguides = {w0, w1};
    s.users = {{3.0, 0.5, 0.0}, {7.0, 5.5, 0.0}};
    return s;
}

RunResult run_experiment(const ExperimentSpec &spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto &ids = list_experiments();
    if (std::find(ids.begin(), ids.end(), spec.id) == ids.end())
        throw Error("unknown experiment '" + spec.id + "'; see list-experiments");
    if (!spec.out_dir.empty())
        fs::create_directories(spec.out_dir);

    RunResult result;
    ParamReader reader{spec.params, {}};
    Ctx ctx{spec, reader, result, {}};
    if (!spec.scenario_path.empty())
        ctx.scenario = scenario_from_file(spec.scenario_path);
    else if (spec.id == "mu-wsr")
        ctx.scenario = default_multiuser_scenario();
    else
        ctx.scenario = default_two_user_scenario();

    if (spec.id == "scaling-law")
        run_scaling_law(ctx);
    else if (spec.id == "ergodic")
        run_ergodic(ctx);
    else if (spec.id == "outage")
        run_outage(ctx);
    else if (spec.id == "capacity-sp")
        run_capacity(ctx, 1);
    else if (spec.id == "capacity-mp")
        run_capacity(ctx, 3);
    else if (spec.id == "mu-wsr")
        run_mu_wsr(ctx);
    else if (spec.id == "wideband")
        run_wideband(ctx);
    else if (spec.id == "csi-nmse")
        run_csi_nmse(ctx);
    else if (spec.id == "beam-train")
        run_beam_train(ctx);

    const auto t1 = std::chrono::steady_clock::now();
    result.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

    json manifest;
    manifest["experiment"] = spec.id;
    manifest["version"] = version();
    manifest["seed"] = spec.seed;
    manifest["scenario"] = spec.scenario_path.empty() ? "<bundled>" : spec.scenario_path;
    manifest["threads"] = spec.threads;
    manifest["wall_time_s"] = result.wall_seconds;
    manifest["params"] = reader.used;
    manifest["outputs"] = result.csv_files;
    if (spec.id == "ergodic")
        manifest["notes"] = {
            {"coverage_con", "Monte Carlo only; no closed form is known for the "
                             "fixed-antenna coverage probability"}};
    manifest["tolerances"] = {{"quadrature_1d", 1e-9},
                              {"quadrature_2d", 1e-8},
                              {"wd_bisection", 1e-8},
                              {"region_slack", 1e-9}};
    result.manifest_path = spec.out_dir + "/" + spec.id + "_manifest.json";
    std::ofstream mf(result.manifest_path, std::ios::binary);
    mf << manifest.dump(2) << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// verification checks
// ---------------------------------------------------------------------------

CsvTable read_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open CSV: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    if (t.header.empty())
        throw Error("empty CSV: " + path);
    return t;
}

int CsvTable::column(const std::string &name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return static_cast<int>(i);
    throw Error("CSV column not found: " + name);
}

double CsvTable::number(size_t row, int col) const {
    return std::stod(rows.at(row).at(col));
}

std::vector<std::string> list_checks() {
    return {"theorem1-5pct", "scaling-band4x", "delta-b-positive", "delta-b-monotone",
            "nesting"};
}

namespace {

RateRegion region_from_rows(const CsvTable &t, const std::string &tag) {
    const int c_r1 = t.column("R1"), c_r2 = t.column("R2"), c_tag = t.column("tag");
    std::vector<RatePair> pts;
    for (size_t i = 0; i < t.rows.size(); ++i)
        if (t.rows[i][c_tag] == tag)
            pts.push_back({t.number(i, c_r1), t.number(i, c_r2)});
    if (pts.empty())
        throw Error("nesting check: no rows tagged '" + tag + "'");
    return RateRegion::from_points(pts);
}

// worst-case signed distance of inner's hull vertices to outer's edges
// (non-negative when nested; vertices shared by both boundaries give 0)
double inclusion_margin(const RateRegion &inner, const RateRegion &outer) {
    double margin = 1e300;
    for (const RatePair &v : inner.hull) {
        double vm = 1e300;
        const size_t n = outer.hull.size();
        for (size_t i = 0; i < n; ++i) {
            const RatePair &a = outer.hull[i];
            const RatePair &b = outer.hull[(i + 1) % n];
            const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
            if (len <= 0.0)
                continue;
            const double c =
                ((b.r1 - a.r1) * (v.r2 - a.r2) - (b.r2 - a.r2) * (v.r1 - a.r1)) / len;
            vm = std::min(vm, c);
        }
        margin = std::min(margin, vm);
    }
    return margin;
}

} // namespace

VerifyResult verify_csv(const std::string &csv_path, const std::string &check_id) {
    const CsvTable t = read_csv(csv_path);
    VerifyResult res;

    if (check_id == "theorem1-5pct") {
        const int c_m = t.column("M"), c_opt = t.column("P_opt"), c_ap = t.column("P_approx");
        (void)c_m;
        double worst = 0.0;
        for (size_t i = 0; i < t.rows.size(); ++i) {
            const double opt = t.number(i, c_opt);
            worst = std::max(worst, std::abs(opt - t.number(i, c_ap)) / opt);
        }
        res.pass = worst <= 0.05;
        res.margin = 0.05 - worst;
        res.detail = "max relative error " + fmt(worst);
    } else if (check_id == "scaling-band4x") {
        const int c_m = t.column("M"), c_opt = t.column("P_opt");
        double lo = 1e300, hi = 0.0;
        for (size_t i = 0; i < t.rows.size(); ++i) {
            const double m = t.number(i, c_m);
            if (m < 64)
                continue;
            const double lm = std::log(m);
            const double scaled = t.number(i, c_opt) * m / (lm * lm);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        if (hi <= 0.0)
            throw Error("scaling-band4x: no rows with M >= 64");
        res.pass = hi / lo < 4.0;
        res.margin = 4.0 - hi / lo;
        res.detail = "band ratio " + fmt(hi / lo);
    } else if (check_id == "delta-b-positive") {
        const int c_v = t.column("value");
        double worst = 1e300;
        for (size_t i = 0; i < t.rows.size(); ++i)
            worst = std::min(worst, t.number(i, c_v));
        res.pass = worst > 0.0;
        res.margin = worst;
        res.detail = "min gap " + fmt(worst);
    } else if (check_id == "delta-b-monotone") {
        const int c_p = t.column("param"), c_v = t.column("value");
        double worst = 1e300;
        for (size_t i = 1; i < t.rows.size(); ++i) {
            if (t.number(i, c_p) <= t.number(i - 1, c_p))
                throw Error("delta-b-monotone: param column must increase");
            worst = std::min(worst, t.number(i, c_v) - t.number(i - 1, c_v));
        }
        res.pass = worst >= 0.0;
        res.margin = worst;
        res.detail = "min consecutive increase " + fmt(worst);
    } else if (check_id == "nesting") {
        const RateRegion cap = region_from_rows(t, "capacity");
        const RateRegion tdma = region_from_rows(t, "tdma");
        const RateRegion fdma = region_from_rows(t, "fdma");
        const double m1 = inclusion_margin(tdma, fdma);
        const double m2 = inclusion_margin(fdma, cap);
        res.margin = std::min(m1, m2);
        res.pass = region_subset(tdma, fdma, 1e-9) && region_subset(fdma, cap, 1e-9);
        res.detail = "tdma-in-fdma margin " + fmt(m1) + ", fdma-in-capacity margin " + fmt(m2);
    } else {
        throw Error("unknown check '" + check_id + "'; see list-experiments");
    }
    return res;
}

} // namespace passkit
