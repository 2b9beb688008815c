"""Single-photon two-mode states and quantum information measures.

Everything here lives in the two-dimensional space spanned by the photon
arriving in collector mode 1 or mode 2, so density operators are 2x2 and
spectral decompositions are exact.  All entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import GridError
from .scene import Baseline, Scene, phases

#: Eigenvalues at or below this threshold are treated as zero support.
EIGENVALUE_FLOOR = 1e-12

#: Tolerance for norm / trace / hermiticity validation.
_VALIDATION_ATOL = 1e-10


@dataclass(frozen=True)
class PureState2:
    """Single-photon state c1|mode1> + c2|mode2>.

    The squared amplitudes must sum to 1 within 1e-12.
    """

    c1: complex
    c2: complex

    def __post_init__(self) -> None:
        norm_sq = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"squared norm is {norm_sq!r}, expected 1 within 1e-12")

    def density(self) -> "DensityMatrix2":
        """Rank-one density operator |psi><psi|."""
        vec = np.array([self.c1, self.c2], dtype=complex)
        return DensityMatrix2(np.outer(vec, vec.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """A validated 2x2 density operator.

    Args:
        matrix: 2x2 array, Hermitian with unit trace and eigenvalues
            in [0, 1] (all within 1e-10).
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=_VALIDATION_ATOL, rtol=0.0):
            raise ValueError("matrix is not Hermitian")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > _VALIDATION_ATOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -_VALIDATION_ATOL:
            raise ValueError("matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    def spectral(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (ascending, clipped to [0, 1]) and eigenvector columns."""
        vals, vecs = np.linalg.eigh(self.matrix)
        return np.clip(vals, 0.0, 1.0), vecs


def source_states(scene: Scene, baseline: Baseline) -> tuple[PureState2, PureState2]:
    """Pure collected states (primary, secondary) of the two sources.

    Each source at transverse position x produces
    ``(|mode1> + e^{i psi(x)} |mode2>)/sqrt(2)`` with the exact phase from
    :func:`superres.scene.phases`.
    """
    pair = phases(scene, baseline)
    inv = 1.0 / math.sqrt(2.0)
    primary = PureState2(inv, inv * np.exp(1j * pair.primary))
    secondary = PureState2(inv, inv * np.exp(1j * pair.secondary))
    return primary, secondary


def hypothesis_states(scene: Scene,
                      baseline: Baseline) -> tuple[DensityMatrix2, DensityMatrix2]:
    """Density operators (rho0, rho1) for the one- and two-source hypotheses.

    rho0 is the primary source alone; rho1 mixes in the secondary with
    weight ``scene.epsilon``.
    """
    primary, secondary = source_states(scene, baseline)
    rho0 = primary.density()
    rho1 = DensityMatrix2((1.0 - scene.epsilon) * rho0.matrix
                          + scene.epsilon * secondary.density().matrix)
    return rho0, rho1


def _support_log(vals: np.ndarray) -> np.ndarray:
    """log of eigenvalues on the support, 0 off it (for support-restricted logs)."""
    out = np.zeros_like(vals)
    on = vals > EIGENVALUE_FLOOR
    out[on] = np.log(vals[on])
    return out


def relative_entropy(rho: DensityMatrix2, sigma: DensityMatrix2) -> float:
    """Quantum relative entropy Tr[rho (ln rho - ln sigma)] in nats.

    Evaluated through the spectral decompositions of both operators.  If
    rho has weight outside the support of sigma the divergence is infinite
    and ``inf`` is returned.  Identical operators give exactly 0.0.
    """
    if np.array_equal(rho.matrix, sigma.matrix):
        return 0.0
    p, u = rho.spectral()
    q, v = sigma.spectral()
    # overlap[i, j] = |<u_i|v_j>|^2
    overlap = np.abs(u.conj().T @ v) ** 2
    sigma_kernel = q <= EIGENVALUE_FLOOR
    if np.any(sigma_kernel):
        leaked = float(p @ overlap[:, sigma_kernel].sum(axis=1))
        if leaked > 1e-10:
            return math.inf
    rho_support = p > EIGENVALUE_FLOOR
    entropy_term = float(p[rho_support] @ np.log(p[rho_support]))
    cross_term = float(p @ (overlap[:, ~sigma_kernel] @ np.log(q[~sigma_kernel])))
    return entropy_term - cross_term


def relative_entropy_variance(rho: DensityMatrix2, sigma: DensityMatrix2) -> float:
    """Quantum relative entropy variance Tr[rho (ln rho - ln sigma)^2] - D^2.

    Uses the same support conventions as :func:`relative_entropy` and
    returns ``inf`` when the divergence itself is infinite.  Values are
    clipped at zero to absorb rounding.
    """
    d = relative_entropy(rho, sigma)
    if math.isinf(d):
        return math.inf
    p, u = rho.spectral()
    q, v = sigma.spectral()
    log_rho = (u * _support_log(p)) @ u.conj().T
    log_sigma = (v * _support_log(q)) @ v.conj().T
    delta = log_rho - log_sigma
    second_moment = float(np.real(np.trace(rho.matrix @ delta @ delta)))
    return max(second_moment - d * d, 0.0)


def qre_small_angle(scene: Scene, baseline: Baseline) -> float:
    """Leading small-angle law for the one-vs-two-source relative entropy.

    Returns ``theta^2 k^2 epsilon (d1-d2)^2 / 4`` (nats), the quadratic-in-
    separation, linear-in-epsilon limit of
    ``relative_entropy(rho0, rho1)``.  The exact divergence exceeds this by
    a relative margin that grows roughly like ``epsilon * ln(1/epsilon)``,
    so the law is accurate only for faint secondaries.
    """
    kd = scene.k * baseline.separation
    return 0.25 * scene.theta**2 * kd**2 * scene.epsilon


def qre_exact(scene: Scene, baseline: Baseline) -> float:
    """Relative entropy between the scene's hypothesis states (nats)."""
    rho0, rho1 = hypothesis_states(scene, baseline)
    return relative_entropy(rho0, rho1)


def qfi_closed_form(scene: Scene, baseline: Baseline) -> float:
    """Quantum Fisher information for the angular separation, closed form.

    For an equal-brightness pair the value is ``k^2 (d1-d2)^2 / 4``,
    independent of the separation itself.
    """
    return 0.25 * (scene.k * baseline.separation) ** 2


def qfi_separation(scene: Scene, baseline: Baseline,
                   step: float | None = None) -> float:
    """Numerical quantum Fisher information for the angular separation.

    Differentiates the equal-brightness mixed state with a central
    difference in theta and assembles the Fisher information from the
    spectral decomposition at the midpoint,
    ``2 sum_ij |<e_i|d rho|e_j>|^2 / (p_i + p_j)``.  The derivative moves
    the two sources symmetrically about their (fixed, known) centroid;
    pinning one source instead would fold centroid motion into the
    parameter and overstate the information.

    Args:
        scene: must have ``epsilon = 0.5`` (equal-brightness pair).
        step: angular step h of the central difference; defaults to
            ``1e-3 / (k |d1-d2|)`` so the phase moves by 1e-3 rad.

    Raises:
        ValueError: if ``epsilon != 0.5`` or theta does not exceed h.
        GridError: if ``h * k * |d1-d2| > 0.1`` (difference too coarse).
    """
    if scene.epsilon != 0.5:
        raise ValueError("the separation QFI is defined for epsilon = 0.5")
    kd_abs = abs(scene.k * baseline.separation)
    h = 1e-3 / kd_abs if step is None else float(step)
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {h}")
    if h * kd_abs > 0.1:
        raise GridError(
            f"step {h:.3g} rad moves the phase by {h * kd_abs:.3g} rad; "
            "central differencing needs h*k*|d| <= 0.1"
        )
    if scene.theta <= h:
        raise ValueError(
            f"theta = {scene.theta:.3g} must exceed the step h = {h:.3g}"
        )

    centroid = scene.x0 + 0.5 * scene.s

    def state_at(theta: float) -> np.ndarray:
        s_new = theta * scene.z0
        shifted = replace(scene, x0=centroid - 0.5 * s_new, s=s_new)
        _, rho1 = hypothesis_states(shifted, baseline)
        return rho1.matrix

    d_rho = (state_at(scene.theta + h) - state_at(scene.theta - h)) / (2.0 * h)
    _, rho = hypothesis_states(scene, baseline)
    p, vecs = rho.spectral()
    elems = np.abs(vecs.conj().T @ d_rho @ vecs) ** 2
    denom = p[:, None] + p[None, :]
    keep = denom > EIGENVALUE_FLOOR
    return float(2.0 * np.sum(elems[keep] / denom[keep]))
