// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "passkit/geometry.hpp"

namespace passkit {

// Free-space and in-waveguide channel evaluation. All functions are pure and
// embarrassingly parallel across users/configurations.

/// Per-waveguide PA positions and radiated power fractions. Positions must be
/// strictly increasing with gaps >= delta_min and lie in [0, length]; the
/// power fractions of one waveguide must sum to at most 1.
struct PinchConfig {
    // positions[n][m]: axial position of the m-th PA on waveguide n
    std::vector<std::vector<double>> positions;
    // power[n][m]: fraction of guided power radiated by that PA
    std::vector<std::vector<double>> power;

    size_t num_waveguides() const { return positions.size(); }
    size_t num_pas(size_t n) const { return positions[n].size(); }
    size_t total_pas() const;

    void validate(const Scenario &s) const;

    /// Equal power radiation (1/M per PA) at the given positions.
    static PinchConfig equal_power(std::vector<std::vector<double>> positions);
};

struct NlosPath {
    double amplitude = 0.0; // beta >= 0
    double phase = 0.0;     // xi in [0, 2*pi)
};

/// Channel evaluated for one user and one PinchConfig: the stacked free-space
/// vector h (length sum of M_n) and the block-diagonal in-waveguide structure,
/// stored as one vector g per waveguide.
struct ChannelState {
    cvec h;                         // stacked per waveguide; stored conjugated (see below)
    std::vector<cvec> g;            // g[n]: in-waveguide vector of waveguide n
    std::vector<size_t> offsets;    // start of waveguide n within h

    size_t dim() const { return h.size(); }
};

/// Free-space vector for one user, stacked per waveguide. Entries are stored
/// conjugated so that h^H G w is the received complex amplitude; the response
/// coefficient of PA (n,m) itself is conj(h[(n,m)]) = (eta/r) e^{-j 2 pi r / lambda}.
cvec los_channel(const Scenario &s, const PinchConfig &c, size_t user);

/// In-waveguide vector g with entries sqrt(P_m) e^{-j (2 pi / lambda) n_eff x_m}.
cvec waveguide_vector(const std::vector<double> &x, const std::vector<double> &power,
                      const RfConstants &constants);

/// Aggregated per-PA free-space gain with NLoS components:
/// (eta/r) e^{-j 2 pi r / lambda} + sum_l beta_l e^{j xi_l}.
cplx multipath_gain(const Scenario &s, double x_m, size_t waveguide, size_t user,
                    const std::vector<NlosPath> &paths);

/// Seeded NLoS path generator: Rayleigh amplitudes with the given scale,
/// phases uniform on [0, 2 pi).
std::vector<NlosPath> random_nlos_paths(int count, double rayleigh_scale,
                                        std::uint64_t seed);

/// Full channel state for one user.
ChannelState channel_state(const Scenario &s, const PinchConfig &c, size_t user);

/// Received complex amplitude h^H G w for a per-waveguide beamforming vector w
/// (length N). Throws on dimension mismatch.
cplx effective_gain(const ChannelState &st, const cvec &w);

/// Scalar effective gain of a single waveguide: h^H g.
cplx effective_gain(const cvec &h, const cvec &g);

} // namespace passkit
