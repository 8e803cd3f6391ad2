"""Problem instances: a hard-wall box with point scatterers.

Natural units m = hbar = 1 throughout: the stationary equation is
-psi''/2 + V psi = E psi, a scatterer of strength h at y imposes the
derivative jump psi'(y+) - psi'(y-) = 2 h psi(y), and E = k^2 / 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np


class ModelError(ValueError):
    """Base class for invalid problem instances."""


class NonPositiveLength(ModelError):
    pass


class NonMonotonePositions(ModelError):
    pass


class PositionOutOfBox(ModelError):
    pass


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ScattererSet:
    """Box of length L with M delta scatterers at strictly increasing positions.

    Positions live in the closed interval [-L/2, L/2]; a scatterer sitting
    exactly on a wall is legal and inert (the wavefunction vanishes there).
    Instances are immutable and safe to share across workers.
    """

    L: float
    positions: np.ndarray
    heights: np.ndarray

    @property
    def M(self) -> int:
        return len(self.positions)

    def boundaries(self) -> np.ndarray:
        """Region boundaries: left wall, scatterer positions, right wall."""
        return np.concatenate(([-self.L / 2], self.positions, [self.L / 2]))

    def segment_lengths(self) -> np.ndarray:
        return np.diff(self.boundaries())

    def region_of(self, x: float) -> int:
        """0-based region index containing x; a scatterer position belongs
        to the region on its left."""
        return int(np.searchsorted(self.positions, x, side="left"))


@dataclass(frozen=True)
class Region:
    """One field-free interval between consecutive scatterers (or a wall)."""

    index: int  # 1-based, matching region subscripts
    left: float
    right: float


def regions(s: ScattererSet) -> Iterator[Region]:
    b = s.boundaries()
    for n in range(s.M + 1):
        yield Region(n + 1, float(b[n]), float(b[n + 1]))


def make_scatterer_set(L: float, positions: Sequence[float],
                       heights: Sequence[float]) -> ScattererSet:
    """Validate and build an instance. Positions are checked, never sorted."""
    if not np.isfinite(L) or L <= 0:
        raise NonPositiveLength(f"box length must be positive, got {L}")
    pos = np.asarray(positions, dtype=float)
    hts = np.asarray(heights, dtype=float)
    if pos.shape != hts.shape or pos.ndim > 1:
        raise ModelError(
            f"positions and heights must be equal-length 1d lists, "
            f"got shapes {pos.shape} and {hts.shape}")
    if pos.size and np.any(np.diff(pos) <= 0):
        raise NonMonotonePositions(f"positions must be strictly increasing: {pos}")
    if pos.size and (pos[0] < -L / 2 or pos[-1] > L / 2):
        raise PositionOutOfBox(
            f"positions must lie in [-{L / 2}, {L / 2}]: {pos}")
    return ScattererSet(float(L), _readonly(pos), _readonly(hts))


def uniform_lattice(L: float, M: int, h: float, delta: float = 0.0,
                    heights: Sequence[float] | None = None) -> ScattererSet:
    """Equidistant lattice of M scatterers with spacing L/M, rigidly shifted.

    y_n = -L/2 + (n + (delta-1)/2) * L/M for n = 1..M, delta in [-1, 1].
    At delta = +-1 the outermost scatterer coincides with a wall, which is
    allowed (it has no effect there). ``heights`` overrides the uniform h.
    """
    if M < 1:
        raise ModelError("uniform_lattice needs M >= 1")
    n = np.arange(1, M + 1)
    pos = -L / 2 + (n + (delta - 1) / 2) * (L / M)
    # guard rounding at the walls for |delta| = 1
    pos = np.clip(pos, -L / 2, L / 2)
    hts = np.full(M, h, dtype=float) if heights is None else np.asarray(heights, float)
    return make_scatterer_set(L, pos, hts)


def modulated_lattice(L: float, M: int, h_min: float, h_max: float,
                      phi: float) -> ScattererSet:
    """Equidistant lattice y_n = -L/2 + a n L, a = 1/(M+1), with heights
    modulated as h_n = h_min + (h_max - h_min) cos^2(2 pi phi (a n + 1/2)).

    The modulation is periodic in phi with period (M+1)/2 for odd M.
    """
    if M < 1:
        raise ModelError("modulated_lattice needs M >= 1")
    a = 1.0 / (M + 1)
    n = np.arange(1, M + 1)
    pos = -L / 2 + a * n * L
    hts = h_min + (h_max - h_min) * np.cos(2 * np.pi * phi * (a * n + 0.5)) ** 2
    return make_scatterer_set(L, pos, hts)


class SplitMix64:
    """Tiny named 64-bit generator (SplitMix64) for reproducible streams.

    state_{i+1} = state_i + 0x9E3779B97F4A7C15 (mod 2^64); each output is the
    finalized mix of the new state. Uniform doubles use the standard 53-bit
    mantissa construction (x >> 11) * 2^-53, so sequences are bit-exact on
    any platform and trivially portable to other languages.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self._MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


def random_heights(M: int, h_min: float, h_max: float, seed: int) -> np.ndarray:
    """M heights uniform in [h_min, h_max], bit-exact for a given seed."""
    if h_min > h_max:
        raise ModelError(f"need h_min <= h_max, got {h_min} > {h_max}")
    g = SplitMix64(seed)
    u = np.array([g.next_float() for _ in range(M)])
    return h_min + (h_max - h_min) * u


# ---------------------------------------------------------------------------
# JSON instance schema

def scatterer_set_from_config(cfg: dict) -> ScattererSet:
    """Build an instance from its JSON form.

    Explicit: {"L": number, "scatterers": [{"y": ..., "h": ...}, ...]}
    Shorthand: {"uniform": {"L","M","h","delta"}},
               {"modulated": {"L","M","h_min","h_max","phi"}},
               {"random": {"L","M","h_min","h_max","seed","delta"}}
    """
    if not isinstance(cfg, dict):
        raise ModelError(f"instance config must be an object, got {type(cfg).__name__}")
    keys = {"L", "scatterers", "uniform", "modulated", "random"} & set(cfg)
    try:
        if "uniform" in cfg:
            u = cfg["uniform"]
            return uniform_lattice(u["L"], int(u["M"]), u["h"], u.get("delta", 0.0))
        if "modulated" in cfg:
            m = cfg["modulated"]
            return modulated_lattice(m["L"], int(m["M"]), m["h_min"], m["h_max"], m["phi"])
        if "random" in cfg:
            r = cfg["random"]
            hts = random_heights(int(r["M"]), r["h_min"], r["h_max"], int(r["seed"]))
            return uniform_lattice(r["L"], int(r["M"]), 0.0, r.get("delta", 0.0), heights=hts)
        if "L" in cfg:
            sc = cfg.get("scatterers", [])
            return make_scatterer_set(cfg["L"], [s["y"] for s in sc], [s["h"] for s in sc])
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed instance config {cfg!r}: {exc}") from exc
    raise ModelError(f"instance config needs one of {{L, uniform, modulated, random}}, got keys {sorted(cfg)}")


def scatterer_set_to_config(s: ScattererSet) -> dict:
    return {
        "L": s.L,
        "scatterers": [{"y": float(y), "h": float(h)}
                       for y, h in zip(s.positions, s.heights)],
    }
