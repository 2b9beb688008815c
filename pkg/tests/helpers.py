"""Shared constants and scene builders for the test suite."""

import math

from superres import Baseline, Scene

WAVELENGTH = 848.2e-9
D1 = 2.65e-3
D2 = -2.65e-3
BASELINE = Baseline(D1, D2)

#: k * (d1 - d2) for the reference geometry, about 3.926e4 rad per rad.
KD = 2.0 * math.pi / WAVELENGTH * (D1 - D2)


def scene_for(kd_theta: float, epsilon: float, x0: float = 0.0,
              z0: float = 1.0) -> Scene:
    """Scene whose phase difference k*d*theta equals ``kd_theta``."""
    return Scene(x0=x0, s=kd_theta / KD * z0, z0=z0, epsilon=epsilon,
                 wavelength=WAVELENGTH)
