"""Deterministic photon-level simulation of the binary measurement.

All randomness flows through numpy's PCG64 generator seeded via
``SeedSequence``.  Derived streams (per trial, per sweep point) use the
spawn-key rule: the stream for sub-task ``i`` of root seed ``s`` is
``SeedSequence(s, spawn_key=(i,))``, which matches
``SeedSequence(s).spawn(...)[i]`` and is reproducible from the two
integers alone, independent of scheduling or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .measurement import OutcomeDist

GENERATOR_ID = "numpy-pcg64"

#: Sample floor below which the intensity-correlation estimate is refused.
MIN_G2_SAMPLES = 10_000

_TAG_NAMES = ("signal", "reference")
_OUTCOME_NAMES = ("a", "b")


def make_rng(seed: int, spawn_key: Sequence[int] = ()) -> np.random.Generator:
    """PCG64 generator for a root seed and optional spawn key."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(spawn_key))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True, eq=False)
class EventStream:
    """A recorded sequence of detector clicks.

    Args:
        outcomes: uint8 array, 0 for detector ``a`` and 1 for ``b``.
        pulse_tags: uint8 array of equal length, 0 for ``signal`` pulses
            and 1 for ``reference`` pulses.
        seed: root seed the stream was generated from.
        generator: identifier of the RNG algorithm.
    """

    outcomes: np.ndarray
    pulse_tags: np.ndarray
    seed: int
    generator: str = GENERATOR_ID

    def __post_init__(self) -> None:
        out = np.asarray(self.outcomes, dtype=np.uint8)
        tags = np.asarray(self.pulse_tags, dtype=np.uint8)
        if out.ndim != 1 or tags.ndim != 1:
            raise ValueError("outcomes and pulse_tags must be 1-d arrays")
        if out.shape != tags.shape:
            raise ValueError(
                f"outcomes ({out.shape[0]}) and pulse_tags ({tags.shape[0]}) "
                "must have equal length")
        if out.size and (out.max() > 1 or tags.max() > 1):
            raise ValueError("outcomes and pulse_tags must only contain 0 and 1")
        object.__setattr__(self, "outcomes", out)
        object.__setattr__(self, "pulse_tags", tags)

    @property
    def n_events(self) -> int:
        return int(self.outcomes.size)

    def counts(self, tag: str | None = None) -> tuple[int, int]:
        """Click totals ``(n_a, n_b)``, optionally for one pulse tag."""
        if tag is None:
            picked = self.outcomes
        elif tag in _TAG_NAMES:
            picked = self.outcomes[self.pulse_tags == _TAG_NAMES.index(tag)]
        else:
            raise ValueError(f"unknown tag {tag!r}, expected 'signal' or 'reference'")
        n_b = int(picked.sum())
        return picked.size - n_b, n_b

    def to_text(self) -> str:
        """Serialize to the line-oriented text format (round-trip exact)."""
        lines = [f"# seed={self.seed}",
                 f"# generator={self.generator}",
                 "index,tag,outcome"]
        for i in range(self.n_events):
            lines.append(f"{i},{_TAG_NAMES[self.pulse_tags[i]]},"
                         f"{_OUTCOME_NAMES[self.outcomes[i]]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EventStream":
        """Parse the format produced by :meth:`to_text`."""
        lines = text.splitlines()
        if len(lines) < 3 or not lines[0].startswith("# seed=") \
                or not lines[1].startswith("# generator="):
            raise ValueError("missing '# seed=' / '# generator=' header lines")
        try:
            seed = int(lines[0].removeprefix("# seed="))
        except ValueError:
            raise ValueError(f"unparseable seed line {lines[0]!r}") from None
        generator = lines[1].removeprefix("# generator=")
        if lines[2] != "index,tag,outcome":
            raise ValueError(f"unexpected column header {lines[2]!r}")
        outcomes = []
        tags = []
        for expected, line in enumerate(lines[3:]):
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"malformed event line {line!r}")
            idx, tag, outcome = parts
            if int(idx) != expected:
                raise ValueError(
                    f"event index {idx} out of order, expected {expected}")
            if tag not in _TAG_NAMES or outcome not in _OUTCOME_NAMES:
                raise ValueError(f"malformed event line {line!r}")
            tags.append(_TAG_NAMES.index(tag))
            outcomes.append(_OUTCOME_NAMES.index(outcome))
        return cls(np.array(outcomes, dtype=np.uint8),
                   np.array(tags, dtype=np.uint8), seed=seed, generator=generator)


def simulate_events(dist: OutcomeDist, n: int, seed: int,
                    spawn_key: Sequence[int] = ()) -> EventStream:
    """Draw ``n`` independent clicks from a two-outcome distribution.

    Event ``i`` is detector ``a`` when the i-th uniform draw is below
    ``dist.p_a``.  ``n = 0`` produces an empty stream with a valid header.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    rng = make_rng(seed, spawn_key)
    u = rng.random(n)
    outcomes = (u >= dist.p_a).astype(np.uint8)
    return EventStream(outcomes, np.zeros(n, dtype=np.uint8), seed=int(seed))


def interleaved_run(signal: OutcomeDist, reference: OutcomeDist,
                    n_pairs: int, seed: int,
                    detection_efficiency: float = 1.0,
                    spawn_key: Sequence[int] = ()) -> EventStream:
    """Alternating signal/reference pulse pairs with lossy detection.

    Each pair contributes a signal pulse then a reference pulse.  Every
    pulse survives detection independently with probability
    ``detection_efficiency``; surviving pulses draw their outcome from the
    corresponding distribution.  Draw order is fixed (all detection
    uniforms, then all outcome uniforms) so streams are reproducible.
    """
    if n_pairs < 0:
        raise ValueError(f"n_pairs must be non-negative, got {n_pairs}")
    if not 0.0 <= detection_efficiency <= 1.0:
        raise ValueError(
            f"detection_efficiency must lie in [0, 1], got {detection_efficiency}")
    rng = make_rng(seed, spawn_key)
    detect_u = rng.random((n_pairs, 2))
    outcome_u = rng.random((n_pairs, 2))
    p_a = np.array([signal.p_a, reference.p_a])
    outcomes = (outcome_u >= p_a).astype(np.uint8)
    tags = np.broadcast_to(np.array([0, 1], dtype=np.uint8), (n_pairs, 2))
    kept = (detect_u < detection_efficiency).ravel()
    return EventStream(outcomes.ravel()[kept], tags.ravel()[kept].copy(),
                       seed=int(seed))


@dataclass(frozen=True, eq=False)
class ThermalSample:
    """Sampled complex field amplitudes of a pseudo-thermal source."""

    amplitudes: np.ndarray
    nbar: float
    fixed_amplitude: bool
    seed: int

    @property
    def intensities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def sample_thermal(nbar: float, n_samples: int, seed: int,
                   fixed_amplitude: bool = False) -> ThermalSample:
    """Draw field amplitudes with mean intensity ``nbar``.

    The default is a circular complex Gaussian (true thermal statistics,
    intensity correlation g2(0) = 2).  With ``fixed_amplitude`` the modulus
    is pinned at ``sqrt(nbar)`` and only the phase is randomized, which is
    the laser-like case g2(0) = 1; phase randomization alone does not
    produce thermal counting statistics.
    """
    if nbar <= 0.0:
        raise ValueError(f"nbar must be positive, got {nbar}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be at least 1, got {n_samples}")
    rng = make_rng(seed)
    if fixed_amplitude:
        phases = rng.uniform(0.0, 2.0 * math.pi, n_samples)
        amps = math.sqrt(nbar) * np.exp(1j * phases)
    else:
        quad = rng.normal(0.0, math.sqrt(nbar / 2.0), size=(2, n_samples))
        amps = quad[0] + 1j * quad[1]
    return ThermalSample(amps, nbar=float(nbar),
                         fixed_amplitude=bool(fixed_amplitude), seed=int(seed))


def g2_zero(sample: ThermalSample) -> float:
    """Zero-delay intensity correlation <I^2> / <I>^2.

    Requires at least ``MIN_G2_SAMPLES`` samples for a stable estimate.
    """
    intensities = sample.intensities
    if intensities.size < MIN_G2_SAMPLES:
        raise ValueError(
            f"g2 estimation needs at least {MIN_G2_SAMPLES} samples, "
            f"got {intensities.size}")
    mean = float(intensities.mean())
    return float((intensities * intensities).mean()) / (mean * mean)


@dataclass(frozen=True)
class CalibrationEstimate:
    """Fringe-factor estimate from reference-pulse counts."""

    r_hat: float
    std_error: float


def estimate_calibration(counts: tuple[int, int]) -> CalibrationEstimate:
    """Estimate r = nu cos(alpha) from reference counts ``(n_a, n_b)``.

    The point estimate is ``(n_a - n_b)/(n_a + n_b)`` and the standard
    error is ``sqrt((1 - r^2)/n)``.  Empty counts are an error.
    """
    n_a, n_b = counts
    if n_a < 0 or n_b < 0:
        raise ValueError(f"counts must be non-negative, got {counts}")
    n = n_a + n_b
    if n == 0:
        raise ValueError("cannot calibrate from zero events")
    r_hat = (n_a - n_b) / n
    return CalibrationEstimate(r_hat, math.sqrt(max(1.0 - r_hat * r_hat, 0.0) / n))
