"""Binary interferometric measurements and their classical information.

The two collected modes interfere on a balanced combiner after a
controllable phase ``alpha`` is inserted in one arm; imperfections are
folded into a fringe visibility ``nu``.  A photon then lands in detector
``a`` or ``b``, so every source distribution maps to a two-outcome
probability vector.  This module evaluates those probabilities, the
classical relative entropies and Fisher information they carry, and a
direct-imaging reference model based on a Gaussian point-spread function.

Relative entropies are in nats throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import GridError
from .scene import Baseline, Scene, optimal_alpha, phases


@dataclass(frozen=True)
class Interferometer:
    """Measurement settings: inserted phase alpha (rad), visibility nu."""

    alpha: float
    nu: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"visibility nu must lie in [0, 1], got {self.nu}")


@dataclass(frozen=True)
class OutcomeDist:
    """Probabilities of the two detector outcomes, summing to 1 within 1e-9."""

    p_a: float
    p_b: float

    def __post_init__(self) -> None:
        if self.p_a < 0.0 or self.p_b < 0.0:
            raise ValueError(
                f"outcome probabilities must be non-negative, got "
                f"({self.p_a!r}, {self.p_b!r})"
            )
        total = self.p_a + self.p_b
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"outcome probabilities sum to {total!r}, expected 1")


def outcome_probs(sources: Iterable[tuple[float, float]],
                  ifo: Interferometer) -> OutcomeDist:
    """Detector statistics for a weighted incoherent mixture of sources.

    Args:
        sources: pairs ``(weight, phase)``; weights must be non-negative
            and sum to 1 within 1e-9.
        ifo: interferometer settings.

    Each source of phase psi sends a photon to detector ``a`` with
    probability ``(1 + nu cos(psi + alpha))/2``.
    """
    pairs = list(sources)
    if not pairs:
        raise ValueError("at least one (weight, phase) source is required")
    weights = np.array([w for w, _ in pairs], dtype=float)
    phis = np.array([phase for _, phase in pairs], dtype=float)
    if np.any(weights < 0.0):
        raise ValueError("source weights must be non-negative")
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"source weights sum to {total!r}, expected 1")
    fringes = ifo.nu * np.cos(phis + ifo.alpha)
    p_a = float(weights @ (0.5 * (1.0 + fringes)))
    p_b = float(weights @ (0.5 * (1.0 - fringes)))
    return OutcomeDist(min(max(p_a, 0.0), 1.0), min(max(p_b, 0.0), 1.0))


def fringe_probs(phi: float, r: float) -> OutcomeDist:
    """Equal-brightness-pair statistics ``p_a = (1 + r cos phi)/2``.

    ``phi = k (d1-d2) theta / 2`` is the half phase difference of the pair
    and ``r = nu cos(alpha)`` the fringe factor; ``|r| <= 1``.
    """
    if abs(r) > 1.0:
        raise ValueError(f"fringe factor must satisfy |r| <= 1, got {r}")
    p_a = 0.5 * (1.0 + r * math.cos(phi))
    return OutcomeDist(min(max(p_a, 0.0), 1.0), min(max(1.0 - p_a, 0.0), 1.0))


def hypothesis_probs(scene: Scene, baseline: Baseline,
                     ifo: Interferometer) -> tuple[OutcomeDist, OutcomeDist]:
    """Outcome distributions (single source, pair) under the two hypotheses."""
    pair = phases(scene, baseline)
    p0 = outcome_probs([(1.0, pair.primary)], ifo)
    p1 = outcome_probs(
        [(1.0 - scene.epsilon, pair.primary), (scene.epsilon, pair.secondary)], ifo)
    return p0, p1


def classical_relative_entropy(p: OutcomeDist, q: OutcomeDist) -> float:
    """Kullback-Leibler divergence D(p||q) in nats.

    Outcomes with ``p_x = 0`` contribute nothing; an outcome with
    ``p_x > 0`` but ``q_x = 0`` makes the divergence infinite.
    """
    total = 0.0
    for px, qx in ((p.p_a, q.p_a), (p.p_b, q.p_b)):
        if px == 0.0:
            continue
        if qx == 0.0:
            return math.inf
        total += px * (math.log(px) - math.log(qx))
    return total


def classical_relative_entropy_variance(p: OutcomeDist, q: OutcomeDist) -> float:
    """Variance under p of the log-likelihood ratio ln(p_x/q_x), in nats^2.

    Infinite whenever D(p||q) is infinite.
    """
    if math.isinf(classical_relative_entropy(p, q)):
        return math.inf
    mean = 0.0
    second = 0.0
    for px, qx in ((p.p_a, q.p_a), (p.p_b, q.p_b)):
        if px == 0.0:
            continue
        llr = math.log(px) - math.log(qx)
        mean += px * llr
        second += px * llr * llr
    return max(second - mean * mean, 0.0)


def cre_of_measurement(scene: Scene, baseline: Baseline,
                       ifo: Interferometer) -> float:
    """Classical relative entropy of the binary measurement (nats).

    D(p0 || p1) between the detector statistics of the single-source and
    two-source hypotheses at the given settings.  Bounded above by the
    quantum relative entropy for every choice of alpha and nu.
    """
    p0, p1 = hypothesis_probs(scene, baseline, ifo)
    return classical_relative_entropy(p0, p1)


def _cre_curve(scene: Scene, baseline: Baseline, nu: float,
               alphas: np.ndarray) -> np.ndarray:
    """Vectorized D(p0||p1) over an array of alpha settings."""
    pair = phases(scene, baseline)
    eps = scene.epsilon
    p0a = 0.5 * (1.0 + nu * np.cos(pair.primary + alphas))
    s1a = 0.5 * (1.0 + nu * np.cos(pair.secondary + alphas))
    p1a = (1.0 - eps) * p0a + eps * s1a
    out = np.zeros_like(alphas)
    for p0x, p1x in ((p0a, p1a), (1.0 - p0a, 1.0 - p1a)):
        p0x = np.clip(p0x, 0.0, 1.0)
        p1x = np.clip(p1x, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            term = p0x * (np.log(p0x) - np.log(p1x))
        term = np.where(p0x == 0.0, 0.0, term)
        term = np.where((p0x > 0.0) & (p1x == 0.0), np.inf, term)
        out = out + term
    return out


def maximize_cre(scene: Scene, baseline: Baseline, nu: float,
                 grid_points: int = 1024,
                 tol: float = 1e-6) -> tuple[float, float]:
    """Best alpha for discrimination and the divergence it achieves.

    Scans a uniform alpha grid over [-pi, pi) plus the analytic candidate
    from :func:`superres.scene.optimal_alpha`, then sharpens the winner by
    golden-section search until the bracket is narrower than ``tol``.

    Returns:
        ``(alpha_star, d_star)`` with ``d_star`` in nats.  Degenerate
        scenes (``epsilon`` of 0, or zero separation) return the analytic
        alpha with a divergence of 0.
    """
    if grid_points < 8:
        raise ValueError(f"grid_points must be at least 8, got {grid_points}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    analytic = optimal_alpha(scene, baseline)
    if scene.epsilon == 0.0 or scene.s == 0.0 or nu == 0.0:
        return analytic, 0.0
    grid = np.linspace(-math.pi, math.pi, grid_points, endpoint=False)
    wrapped = math.remainder(analytic, 2.0 * math.pi)
    alphas = np.append(grid, wrapped)
    values = _cre_curve(scene, baseline, nu, alphas)
    best = int(np.argmax(values))
    spacing = 2.0 * math.pi / grid_points
    lo = float(alphas[best]) - spacing
    hi = float(alphas[best]) + spacing

    def f(alpha: float) -> float:
        return float(_cre_curve(scene, baseline, nu, np.array([alpha]))[0])

    inv_phi = 0.5 * (math.sqrt(5.0) - 1.0)
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    alpha_star = 0.5 * (lo + hi)
    d_star = f(alpha_star)
    if d_star < values[best]:
        alpha_star, d_star = float(alphas[best]), float(values[best])
    return alpha_star, d_star


def classical_fisher_info(theta: float, visibility: float, kd: float) -> float:
    """Fisher information per photon about theta from the binary fringe.

    ``visibility`` is the fringe factor r = nu cos(alpha), ``kd`` the
    product k*(d1-d2).  The value is
    ``(kd/2)^2 r^2 sin^2(phi) / (1 - r^2 cos^2(phi))`` with
    ``phi = kd*theta/2``, written with the cancellation-free denominator
    ``(1-r)(1+r) + r^2 sin^2(phi)`` so that ``|r| = 1`` yields exactly
    ``(kd/2)^2`` at every separation.
    """
    if abs(visibility) > 1.0:
        raise ValueError(f"fringe factor must satisfy |r| <= 1, got {visibility}")
    phi = 0.5 * kd * theta
    sin_sq = math.sin(phi) ** 2
    num = 0.25 * kd * kd * visibility * visibility * sin_sq
    den = (1.0 - visibility) * (1.0 + visibility) + visibility * visibility * sin_sq
    if den == 0.0:
        # only reachable at |r| = 1 and sin(phi) = 0, where the information
        # attains its saturation value
        return 0.25 * kd * kd
    return num / den


@dataclass(frozen=True)
class PsfModel:
    """Gaussian point-spread function for the direct-imaging reference.

    Args:
        sigma: angular PSF width (rad).
        half_width: evaluation half-span in units of sigma, at least 8.
        n_points: grid size, at least 4096.
    """

    sigma: float
    half_width: float = 8.0
    n_points: int = 4096

    def __post_init__(self) -> None:
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.half_width < 8.0:
            raise ValueError(
                f"half_width must cover at least 8 sigma, got {self.half_width}")
        if self.n_points < 4096:
            raise ValueError(
                f"n_points must be at least 4096, got {self.n_points}")

    @classmethod
    def from_baseline(cls, scene: Scene, baseline: Baseline, **kwargs) -> "PsfModel":
        """Diffraction-limited width 0.42 * wavelength / |d1 - d2|."""
        sigma = 0.42 * scene.wavelength / abs(baseline.separation)
        return cls(sigma=sigma, **kwargs)

    def grid(self, lo: float, hi: float) -> np.ndarray:
        """Evaluation grid spanning [lo, hi], resolution-checked.

        Raises:
            GridError: if sigma spans fewer than 16 grid cells.
        """
        cell = (hi - lo) / (self.n_points - 1)
        if self.sigma / cell < 16.0:
            raise GridError(
                f"PSF width sigma = {self.sigma:.3g} rad spans only "
                f"{self.sigma / cell:.1f} grid cells; at least 16 are needed"
            )
        return np.linspace(lo, hi, self.n_points)


def _gauss(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    z = (x - mu) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def di_relative_entropy(theta: float, epsilon: float,
                        psf: PsfModel) -> tuple[float, float]:
    """Direct-imaging divergence between one and two sources (nats).

    The single source sits at angle 0, the secondary at ``theta``, and the
    image of each is a Gaussian of width ``psf.sigma``.

    Returns:
        ``(approx, numeric)``: the closed-form small-separation law
        ``(exp(theta^2/sigma^2) - 1) * epsilon^2 / 2`` and the numerically
        integrated divergence between the exact image densities.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if theta < 0.0:
        raise ValueError(f"theta must be non-negative, got {theta}")
    sig = psf.sigma
    approx = 0.5 * epsilon * epsilon * math.expm1((theta / sig) ** 2)
    xs = psf.grid(-psf.half_width * sig, theta + psf.half_width * sig)
    p0 = _gauss(xs, 0.0, sig)
    p1 = (1.0 - epsilon) * p0 + epsilon * _gauss(xs, theta, sig)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(p0 > 0.0, p0 * (np.log(p0) - np.log(p1)), 0.0)
    numeric = float(np.trapezoid(integrand, xs))
    return approx, numeric


def di_fisher_info(theta: float, psf: PsfModel) -> float:
    """Fisher information about theta in the direct image of an equal pair.

    Sources at ``+/- theta/2``; the density is the balanced Gaussian
    mixture and the derivative is taken analytically before integrating
    ``(dp/dtheta)^2 / p`` on the PSF grid.  Approaches ``1/(4 sigma^2)``
    for well-separated sources and falls to zero quadratically as the
    separation closes.
    """
    if theta < 0.0:
        raise ValueError(f"theta must be non-negative, got {theta}")
    sig = psf.sigma
    half = 0.5 * theta
    xs = psf.grid(-half - psf.half_width * sig, half + psf.half_width * sig)
    g_plus = _gauss(xs, half, sig)
    g_minus = _gauss(xs, -half, sig)
    p = 0.5 * (g_plus + g_minus)
    # d/dtheta of 0.5*[g(x - theta/2) + g(x + theta/2)]
    dp = 0.25 * ((xs - half) / sig**2 * g_plus - (xs + half) / sig**2 * g_minus)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(p > 0.0, dp * dp / p, 0.0)
    return float(np.trapezoid(integrand, xs))
