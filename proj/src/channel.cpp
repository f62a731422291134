// SPDX-License-Identifier: Apache-2.0

#include "passkit/channel.hpp"

#include <cmath>
#include <random>

#include "passkit/rng.hpp"

namespace passkit {

size_t PinchConfig::total_pas() const {
    size_t n = 0;
    for (const auto &x : positions)
        n += x.size();
    return n;
}

void PinchConfig::validate(const Scenario &s) const {
    if (positions.size() != s.waveguides.size())
        throw Error("pinch config: waveguide count mismatch");
    if (power.size() != positions.size())
        throw Error("pinch config: power/position shape mismatch");
    for (size_t n = 0; n < positions.size(); ++n) {
        const auto &x = positions[n];
        const auto &p = power[n];
        const Waveguide &w = s.waveguides[n];
        if (x.size() != p.size())
            throw Error("pinch config: power/position length mismatch");
        if (x.empty())
            throw Error("pinch config: waveguide without PAs");
        double sum = 0.0;
        for (size_t m = 0; m < x.size(); ++m) {
            if (x[m] < -1e-12 || x[m] > w.length + 1e-12)
                throw Error("pinch config: PA position outside [0, length]");
            if (m > 0 && x[m] - x[m - 1] < w.delta_min - 1e-9)
                throw Error("pinch config: PA spacing below delta_min");
            if (p[m] < 0.0 || p[m] > 1.0)
                throw Error("pinch config: power fraction outside [0, 1]");
            sum += p[m];
        }
        if (sum > 1.0 + 1e-9)
            throw Error("pinch config: radiated power fractions sum to > 1");
    }
}

PinchConfig PinchConfig::equal_power(std::vector<std::vector<double>> positions) {
    PinchConfig c;
    c.power.reserve(positions.size());
    for (const auto &x : positions)
        c.power.emplace_back(x.size(), x.empty() ? 0.0 : 1.0 / static_cast<double>(x.size()));
    c.positions = std::move(positions);
    return c;
}

cvec los_channel(const Scenario &s, const PinchConfig &c, size_t user) {
    if (user >= s.users.size())
        throw Error("los_channel: user index out of range");
    const double lambda = s.constants.wavelength;
    const double eta = s.constants.eta_amp();
    cvec h;
    h.reserve(c.total_pas());
    for (size_t n = 0; n < c.positions.size(); ++n) {
        for (double x : c.positions[n]) {
            const double r = pa_user_distance(x, s.waveguides[n], s.users[user]);
            const double phase = 2.0 * constants::pi * r / lambda;
            // conjugated storage: +phase here, so h^H carries e^{-j phase}
            h.emplace_back(std::polar(eta / r, phase));
        }
    }
    return h;
}

cvec waveguide_vector(const std::vector<double> &x, const std::vector<double> &power,
                      const RfConstants &constants) {
    if (x.size() != power.size())
        throw Error("waveguide_vector: length mismatch");
    cvec g;
    g.reserve(x.size());
    for (size_t m = 0; m < x.size(); ++m) {
        if (power[m] < 0.0 || power[m] > 1.0)
            throw Error("waveguide_vector: power fraction outside [0, 1]");
        const double phase = 2.0 * constants::pi * constants.n_eff * x[m] / constants.wavelength;
        g.emplace_back(std::polar(std::sqrt(power[m]), -phase));
    }
    return g;
}

cplx multipath_gain(const Scenario &s, double x_m, size_t waveguide, size_t user,
                    const std::vector<NlosPath> &paths) {
    const double lambda = s.constants.wavelength;
    const double eta = s.constants.eta_amp();
    const double r = pa_user_distance(x_m, s.waveguides[waveguide], s.users[user]);
    cplx h = std::polar(eta / r, -2.0 * constants::pi * r / lambda);
    for (const auto &p : paths)
        h += std::polar(p.amplitude, p.phase);
    return h;
}

std::vector<NlosPath> random_nlos_paths(int count, double rayleigh_scale,
                                        std::uint64_t seed) {
    if (count < 0 || rayleigh_scale < 0.0)
        throw Error("random_nlos_paths: invalid arguments");
    auto gen = rng::engine(seed, 42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<NlosPath> paths(count);
    for (auto &p : paths) {
        p.amplitude = rayleigh_scale * std::sqrt(-2.0 * std::log(std::max(u(gen), 1e-300)));
        p.phase = 2.0 * constants::pi * u(gen);
    }
    return paths;
}

ChannelState channel_state(const Scenario &s, const PinchConfig &c, size_t user) {
    c.validate(s);
    ChannelState st;
    st.h = los_channel(s, c, user);
    st.g.reserve(c.num_waveguides());
    size_t off = 0;
    for (size_t n = 0; n < c.num_waveguides(); ++n) {
        st.offsets.push_back(off);
        st.g.push_back(waveguide_vector(c.positions[n], c.power[n], s.constants));
        off += c.positions[n].size();
    }
    return st;
}

cplx effective_gain(const cvec &h, const cvec &g) {
    if (h.size() != g.size())
        throw Error("effective_gain: dimension mismatch");
    cplx acc = 0.0;
    for (size_t i = 0; i < h.size(); ++i)
        acc += std::conj(h[i]) * g[i];
    return acc;
}

cplx effective_gain(const ChannelState &st, const cvec &w) {
    if (w.size() != st.g.size())
        throw Error("effective_gain: beamformer length must equal waveguide count");
    cplx acc = 0.0;
    for (size_t n = 0; n < st.g.size(); ++n) {
        const size_t off = st.offsets[n];
        cplx per = 0.0;
        for (size_t m = 0; m < st.g[n].size(); ++m)
            per += std::conj(st.h[off + m]) * st.g[n][m];
        acc += per * w[n];
    }
    return acc;
}

} // namespace passkit
