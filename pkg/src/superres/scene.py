"""Source geometry and collector phases for a two-aperture interferometer.

A :class:`Scene` holds two incoherent point sources in a plane a distance
``z0`` from the collectors: a primary source at transverse position ``x0``
and a secondary source at ``x0 + s`` carrying a fraction ``epsilon`` of the
total intensity.  A :class:`Baseline` is the pair of collector positions
``d1`` and ``d2``.  Light from a point at transverse position ``x`` reaches
the two collectors with a relative path difference, so each source imprints
a definite phase between the collected modes; :func:`phases` evaluates those
phases exactly and in the small-angle (centroid-referenced) form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParaxialError

TWO_PI = 2.0 * math.pi

#: Transverse extents beyond this fraction of z0 invalidate the quadratic
#: expansion of the path difference.
PARAXIAL_LIMIT = 0.01


@dataclass(frozen=True)
class Scene:
    """Two incoherent point sources of unit total intensity.

    Args:
        x0: Transverse position of the primary source (m).
        s: Transverse offset of the secondary source, which sits at
            ``x0 + s`` (m).  Must be non-negative.
        z0: Distance from the source plane to the collector plane (m).
        epsilon: Fraction of the total intensity emitted by the secondary
            source, in ``[0, 1]``.  ``epsilon = 0`` is a single source.
        wavelength: Optical wavelength (m).
    """

    x0: float
    s: float
    z0: float
    epsilon: float
    wavelength: float

    def __post_init__(self) -> None:
        if self.z0 <= 0.0:
            raise ValueError(f"z0 must be positive, got {self.z0}")
        if self.s < 0.0:
            raise ValueError(f"s must be non-negative, got {self.s}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.wavelength <= 0.0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def k(self) -> float:
        """Wavenumber 2*pi/wavelength (rad/m)."""
        return TWO_PI / self.wavelength

    @property
    def theta(self) -> float:
        """Angular separation of the pair, s/z0 (rad)."""
        return self.s / self.z0


def angular_separation(scene: Scene) -> float:
    """Angular separation theta = s/z0 of the source pair (rad)."""
    return scene.theta


@dataclass(frozen=True)
class Baseline:
    """Transverse positions of the two collectors (m).  ``d1 != d2``."""

    d1: float
    d2: float

    def __post_init__(self) -> None:
        if self.d1 == self.d2:
            raise ValueError("collector positions d1 and d2 must differ")

    @property
    def separation(self) -> float:
        """Signed collector separation d1 - d2 (m)."""
        return self.d1 - self.d2

    def kappa(self, scene: Scene) -> float:
        """Source-independent phase offset k*(d2^2 - d1^2)/(2*z0) (rad).

        This is the part of the collector phase difference that comes from
        the quadratic (defocus-like) term alone; it vanishes for a
        symmetric pair ``d1 = -d2``.
        """
        return scene.k * (self.d2**2 - self.d1**2) / (2.0 * scene.z0)


@dataclass(frozen=True)
class PhasePair:
    """Relative phases between the collected modes, per source (rad).

    ``primary`` and ``secondary`` are exact (position-referenced) phases for
    the sources at ``x0`` and ``x0 + s``.  ``primary_small`` and
    ``secondary_small`` keep only the leading centroid-referenced term,
    +/- k*(d1-d2)*theta/2, which is the form the estimation and
    discrimination formulas use in the small-angle regime.
    """

    primary: float
    secondary: float
    primary_small: float
    secondary_small: float


def phases(scene: Scene, baseline: Baseline,
           paraxial_limit: float = PARAXIAL_LIMIT) -> PhasePair:
    """Collector phase pair for both sources of a scene.

    The exact phase for a source at transverse position x is
    ``kappa + k*(d1-d2)*x/z0`` with ``kappa`` the common quadratic offset,
    valid while transverse extents stay well below z0.

    Raises:
        ParaxialError: if ``(|x0| + s)/z0`` exceeds ``paraxial_limit``.
    """
    extent = (abs(scene.x0) + scene.s) / scene.z0
    if extent >= paraxial_limit:
        raise ParaxialError(
            f"transverse extent {extent:.3g} of z0 exceeds the small-angle "
            f"limit {paraxial_limit:g}; the quadratic phase model does not apply"
        )
    kd = scene.k * baseline.separation
    kappa = baseline.kappa(scene)
    half = 0.5 * kd * scene.theta
    return PhasePair(
        primary=kappa + kd * scene.x0 / scene.z0,
        secondary=kappa + kd * (scene.x0 + scene.s) / scene.z0,
        primary_small=half,
        secondary_small=-half,
    )


def optimal_alpha(scene: Scene, baseline: Baseline) -> float:
    """Interferometer phase that nulls the intensity-weighted source phase.

    Returns ``-kappa + k*(d1-d2)*(epsilon*(x0+s) + (1-epsilon)*x0)/z0``, the
    offset that points the measurement at the scene's intensity centroid:
    for ``epsilon = 0`` it tracks the primary source alone, for
    ``epsilon = 1`` the secondary alone.  With the primary on axis
    (``x0 = 0``, symmetric baseline) it equals ``epsilon`` times the phase
    difference ``k*(d1-d2)*theta``, the small offset from the bright fringe
    that maximizes the per-photon discrimination information at small
    separations.
    """
    kd = scene.k * baseline.separation
    centroid = scene.epsilon * (scene.x0 + scene.s) + (1.0 - scene.epsilon) * scene.x0
    return -baseline.kappa(scene) + kd * centroid / scene.z0
