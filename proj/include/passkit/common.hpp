// SPDX-License-Identifier: Apache-2.0
//
// passkit: simulation and optimization toolkit for pinching-antenna systems.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace passkit {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Base class for all passkit errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c0 = 299792458.0; // speed of light in vacuum, m/s
} // namespace constants

/// Version string injected by the build (git describe when available).
const char *version();

} // namespace passkit
