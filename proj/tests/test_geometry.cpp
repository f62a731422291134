// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "passkit/geometry.hpp"
#include "passkit/rng.hpp"

using namespace passkit;

namespace {
Waveguide wg(double y, double z, double length = 10.0, double dmin = 0.1) {
    Waveguide w;
    w.y = y;
    w.z = z;
    w.length = length;
    w.delta_min = dmin;
    return w;
}
} // namespace

TEST_CASE("lateral offset") {
    CHECK(lateral_offset(wg(0, 3), {0, 0, 0}) == doctest::Approx(3.0));
    CHECK(lateral_offset(wg(3, 4), {0, 0, 0}) == doctest::Approx(5.0));
    CHECK(lateral_offset(wg(1.2, 2.5), {0, 0.7, 0}) ==
          doctest::Approx(std::sqrt(0.25 + 6.25)).epsilon(1e-14));
}

TEST_CASE("pa-user distance") {
    UserPosition u{1.0, 0.7, 0.0};
    const Waveguide w = wg(1.2, 2.5);
    const double zeta = lateral_offset(w, u);
    CHECK(pa_user_distance(u.x, w, u) == doctest::Approx(zeta));
    CHECK(pa_user_distance(5.0, wg(0, 3), {1.0, 0, 0}) == doctest::Approx(5.0));
    CHECK(pa_user_distance(2.2, w, u) ==
          doctest::Approx(std::sqrt(1.44 + zeta * zeta)).epsilon(1e-14));
}

TEST_CASE("distance is minimized at the user projection") {
    const Waveguide w = wg(0.5, 2.0);
    UserPosition u{3.3, 0.0, 0.0};
    const double zeta = lateral_offset(w, u);
    double best = 1e300;
    double best_x = -1;
    for (int i = 0; i <= 2000; ++i) {
        const double x = 10.0 * i / 2000.0;
        const double r = pa_user_distance(x, w, u);
        if (r < best) {
            best = r;
            best_x = x;
        }
    }
    CHECK(best_x == doctest::Approx(u.x).epsilon(1e-3));
    CHECK(best == doctest::Approx(zeta).epsilon(1e-6));
    CHECK(pa_user_distance(u.x, w, u) <= best + 1e-12);
}

TEST_CASE("x-translation invariance") {
    const Waveguide w = wg(1.0, 2.0);
    for (double shift : {-2.0, 0.0, 3.7}) {
        UserPosition u{2.0 + shift, 0.3, 0.0};
        CHECK(pa_user_distance(2.5 + shift, w, u) ==
              doctest::Approx(pa_user_distance(2.5, w, {2.0, 0.3, 0.0})).epsilon(1e-14));
        CHECK(lateral_offset(w, u) ==
              doctest::Approx(lateral_offset(w, {2.0, 0.3, 0.0})).epsilon(1e-14));
    }
}

TEST_CASE("degenerate distance is an error") {
    Waveguide w = wg(0.0, 0.0);
    CHECK_THROWS_AS(pa_user_distance(1.0, w, {1.0, 0.0, 0.0}), Error);
}

TEST_CASE("scenario config round trip") {
    const char *text = R"(# sample
[constants]
wavelength = 0.01
n_eff = 1.4
noise_power = 1e-12
transmit_power = 0.5

[[waveguide]]
y = 0
z = 3
length = 10
delta_min = 0.05

[[user]]
x = 4
y = 1
z = 0

[[user]]
x = 6
y = -1
z = 0
)";
    const Scenario s = scenario_from_string(text);
    CHECK(s.constants.wavelength == 0.01);
    CHECK(s.constants.eta_amp() ==
          doctest::Approx(0.01 / (4 * constants::pi)).epsilon(1e-15));
    REQUIRE(s.waveguides.size() == 1);
    REQUIRE(s.users.size() == 2);
    CHECK(s.users[1].y == -1.0);

    const Scenario back = scenario_from_string(scenario_to_string(s));
    CHECK(back.users[0].x == s.users[0].x);
    CHECK(back.waveguides[0].delta_min == s.waveguides[0].delta_min);
}

TEST_CASE("scenario validation rejects bad inputs") {
    Scenario s;
    s.waveguides = {wg(0, 3), wg(0, 3)};
    s.users = {{1, 0, 0}};
    CHECK_THROWS_AS(s.validate(), Error); // duplicate (y, z)

    s.waveguides = {wg(0, 3)};
    s.users.clear();
    CHECK_THROWS_AS(s.validate(), Error); // no user

    CHECK_THROWS_AS(scenario_from_string("[constants]\nwavelength = -1\n"), Error);
    CHECK_THROWS_AS(scenario_from_string("[constants]\nbogus = 1\n"), Error);
    CHECK_THROWS_AS(scenario_from_string("wavelength = 1\n"), Error);
}

TEST_CASE("parser survives malformed inputs with errors, not crashes") {
    auto gen = rng::engine(99, 0);
    std::uniform_int_distribution<int> len(0, 60), chr(32, 126);
    const char *fragments[] = {"[constants]", "[[waveguide]]", "[[user]]",
                               "wavelength = ", "y = ", "#", "=", "[["};
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        std::uniform_int_distribution<int> lines(0, 12), frag(0, 7);
        for (int l = lines(gen); l > 0; --l) {
            text += fragments[frag(gen)];
            for (int c = len(gen); c > 0; --c)
                text += static_cast<char>(chr(gen));
            text += '\n';
        }
        try {
            scenario_from_string(text);
        } catch (const Error &) {
            // malformed input must surface as a parse error
        }
    }
}
