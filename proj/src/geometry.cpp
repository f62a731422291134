// SPDX-License-Identifier: Apache-2.0

#include "passkit/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace passkit {

namespace {
constexpr double kDegenerateDistance = 1e-9;

bool finite(double v) { return std::isfinite(v); }
} // namespace

void RfConstants::validate() const {
    if (!(wavelength > 0.0))
        throw Error("constants: wavelength must be > 0");
    if (!(n_eff >= 1.0))
        throw Error("constants: n_eff must be >= 1");
    if (eta < 0.0)
        throw Error("constants: eta must be >= 0");
    if (!(noise_power > 0.0))
        throw Error("constants: noise_power must be > 0");
    if (!(transmit_power > 0.0))
        throw Error("constants: transmit_power must be > 0");
}

void Waveguide::validate() const {
    if (!(length > 0.0))
        throw Error("waveguide: length must be > 0");
    if (!(delta_min > 0.0))
        throw Error("waveguide: delta_min must be > 0");
    if (delta_min > length)
        throw Error("waveguide: delta_min exceeds length");
    if (!finite(y) || !finite(z))
        throw Error("waveguide: feed coordinates must be finite");
}

void Scenario::validate() const {
    constants.validate();
    if (waveguides.empty())
        throw Error("scenario: at least one waveguide required");
    if (users.empty())
        throw Error("scenario: at least one user required");
    for (const auto &w : waveguides)
        w.validate();
    for (const auto &u : users)
        if (!finite(u.x) || !finite(u.y) || !finite(u.z))
            throw Error("scenario: user coordinates must be finite");
    for (size_t i = 0; i < waveguides.size(); ++i)
        for (size_t j = i + 1; j < waveguides.size(); ++j)
            if (waveguides[i].y == waveguides[j].y && waveguides[i].z == waveguides[j].z)
                throw Error("scenario: waveguides must be mutually distinct in (y, z)");
}

double lateral_offset(const Waveguide &w, const UserPosition &u) {
    return std::hypot(w.y - u.y, w.z - u.z);
}

double pa_user_distance(double x_m, const Waveguide &w, const UserPosition &u) {
    const double zeta = lateral_offset(w, u);
    const double r = std::hypot(x_m - u.x, zeta);
    if (r < kDegenerateDistance)
        throw Error("pa_user_distance: PA coincides with user (r < 1e-9 m)");
    return r;
}

namespace {

struct Parser {
    std::string section;
    Scenario out;
    bool have_wg = false;
    bool have_user = false;
    int lineno = 0;

    static std::string trim(const std::string &s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    [[noreturn]] void fail(const std::string &msg) const {
        throw Error("scenario parse error (line " + std::to_string(lineno) + "): " + msg);
    }

    double number(const std::string &v) const {
        try {
            size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size())
                fail("trailing characters in number '" + v + "'");
            return d;
        } catch (const std::invalid_argument &) {
            fail("expected a number, got '" + v + "'");
        } catch (const std::out_of_range &) {
            fail("number out of range: '" + v + "'");
        }
    }

    void line(const std::string &raw) {
        ++lineno;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty())
            return;
        if (s == "[constants]") {
            section = "constants";
            return;
        }
        if (s == "[[waveguide]]") {
            section = "waveguide";
            out.waveguides.emplace_back();
            have_wg = true;
            return;
        }
        if (s == "[[user]]") {
            section = "user";
            out.users.emplace_back();
            have_user = true;
            return;
        }
        if (s.front() == '[')
            fail("unknown section '" + s + "'");
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            fail("expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (section == "constants")
            constants_key(key, val);
        else if (section == "waveguide")
            waveguide_key(key, val);
        else if (section == "user")
            user_key(key, val);
        else
            fail("key '" + key + "' outside any section");
    }

    void constants_key(const std::string &key, const std::string &val) {
        RfConstants &c = out.constants;
        if (key == "wavelength")
            c.wavelength = number(val);
        else if (key == "n_eff")
            c.n_eff = number(val);
        else if (key == "eta")
            c.eta = number(val);
        else if (key == "noise_power")
            c.noise_power = number(val);
        else if (key == "transmit_power")
            c.transmit_power = number(val);
        else
            fail("unknown constants key '" + key + "'");
    }

    void waveguide_key(const std::string &key, const std::string &val) {
        Waveguide &w = out.waveguides.back();
        if (key == "y")
            w.y = number(val);
        else if (key == "z")
            w.z = number(val);
        else if (key == "length")
            w.length = number(val);
        else if (key == "delta_min")
            w.delta_min = number(val);
        else
            fail("unknown waveguide key '" + key + "'");
    }

    void user_key(const std::string &key, const std::string &val) {
        UserPosition &u = out.users.back();
        if (key == "x")
            u.x = number(val);
        else if (key == "y")
            u.y = number(val);
        else if (key == "z")
            u.z = number(val);
        else
            fail("unknown user key '" + key + "'");
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Scenario scenario_from_string(const std::string &text) {
    Parser p;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw))
        p.line(raw);
    p.out.validate();
    return p.out;
}

Scenario scenario_from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_string(buf.str());
}

std::string scenario_to_string(const Scenario &s) {
    std::ostringstream out;
    out << "[constants]\n";
    out << "wavelength = " << fmt(s.constants.wavelength) << "\n";
    out << "n_eff = " << fmt(s.constants.n_eff) << "\n";
    if (s.constants.eta > 0.0)
        out << "eta = " << fmt(s.constants.eta) << "\n";
    out << "noise_power = " << fmt(s.constants.noise_power) << "\n";
    out << "transmit_power = " << fmt(s.constants.transmit_power) << "\n";
    for (const auto &w : s.waveguides) {
        out << "\n[[waveguide]]\n";
        out << "y = " << fmt(w.y) << "\n";
        out << "z = " << fmt(w.z) << "\n";
        out << "length = " << fmt(w.length) << "\n";
        out << "delta_min = " << fmt(w.delta_min) << "\n";
    }
    for (const auto &u : s.users) {
        out << "\n[[user]]\n";
        out << "x = " << fmt(u.x) << "\n";
        out << "y = " << fmt(u.y) << "\n";
        out << "z = " << fmt(u.z) << "\n";
    }
    return out.str();
}

const char *version() {
#ifdef PASSKIT_VERSION
    return PASSKIT_VERSION;
#else
    return "0.1.0";
#endif
}

} // namespace passkit
