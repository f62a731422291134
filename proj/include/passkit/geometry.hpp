// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "passkit/common.hpp"

namespace passkit {

// Scenario definition shared by every other module: waveguides, users and RF
// constants. All types are immutable after construction and safe to share
// across threads. Lengths in meters, powers in watts.

struct RfConstants {
    double wavelength = 0.01;     // carrier wavelength in free space, m
    double n_eff = 1.4;           // effective refractive index of the waveguide
    double eta = 0.0;             // free-space gain amplitude at 1 m; 0 = use wavelength/(4*pi)
    double noise_power = 1e-12;   // sigma^2, W
    double transmit_power = 1.0;  // P_t, W

    /// Reference amplitude gain at 1 m. Defaults to wavelength/(4*pi) unless
    /// overridden in the config.
    double eta_amp() const { return eta > 0.0 ? eta : wavelength / (4.0 * constants::pi); }
    void validate() const;
};

struct Waveguide {
    double y = 0.0;          // feed point y_G, m (feed sits at x = 0)
    double z = 0.0;          // feed point z_G, m
    double length = 10.0;    // deployable range x_max, m
    double delta_min = 0.0;  // minimum PA spacing, m

    void validate() const;
};

struct UserPosition {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct Scenario {
    RfConstants constants;
    std::vector<Waveguide> waveguides;
    std::vector<UserPosition> users;

    void validate() const;
    size_t num_waveguides() const { return waveguides.size(); }
    size_t num_users() const { return users.size(); }
};

/// Lateral offset between a waveguide axis and a user:
/// zeta = sqrt((y_G - y_R)^2 + (z_G - z_R)^2).
double lateral_offset(const Waveguide &w, const UserPosition &u);

/// Distance from a PA at axial position x_m on waveguide w to user u.
/// Throws if the distance falls below 1e-9 m (free-space gain singularity).
double pa_user_distance(double x_m, const Waveguide &w, const UserPosition &u);

// Scenario (de)serialization. The file format is a flat key-value config with
// one [constants] section and repeated [[waveguide]] / [[user]] blocks; see
// the bundled scenarios for the schema.
Scenario scenario_from_string(const std::string &text);
Scenario scenario_from_file(const std::string &path);
std::string scenario_to_string(const Scenario &s);

} // namespace passkit
