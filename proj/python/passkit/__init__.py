# SPDX-License-Identifier: Apache-2.0
"""Simulation and optimization toolkit for pinching-antenna systems."""

try:
    from ._passkit import *  # noqa: F401,F403  (installed wheel layout)
    from ._passkit import __version__  # noqa: F401
except ImportError:  # development layout: module next to the build tree
    from _passkit import *  # noqa: F401,F403
    from _passkit import __version__  # noqa: F401
