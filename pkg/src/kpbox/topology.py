"""Periodic-boundary counterpart and band topology over the (q, shift) torus.

One cell of length a carries the intra-cell scatterers; the dispersion is
cos(qa) = tr(T_cell(k))/2 with T_cell the cell transfer matrix, whose trace
is strictly monotone across each allowed band. The rigid shift of the cell
content is a genuine Hamiltonian parameter and plays the role of a second
momentum; Chern numbers come from discrete link variables on the
(q, shift) grid, and are exact integers by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _rootscan

#: plaquettes are oriented so that the lowest band of a repulsive comb
#: pumps one state per shift cycle toward positive x (chern = +1)
_ORIENT = 1.0

_EDGE_SCAN_DENSITY = 256   # grid points per pi/a when hunting band edges


class BandNotFound(RuntimeError):
    """Band-edge scan exhausted without locating the requested band."""


class GaugePinFailure(RuntimeError):
    """No sample large enough to pin the phase gauge."""


class GapClosure(RuntimeError):
    """Adjacent-state overlap collapsed: band touching or grid too coarse."""


@dataclass(frozen=True)
class UnitCell:
    """One period of length a with scatterers at positions in [0, a).

    ``delta`` is a rigid translation of the cell content by delta * a
    (periodically wrapped); delta and delta + 1 are the same cell.
    """

    a: float
    positions: np.ndarray
    heights: np.ndarray
    delta: float = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("cell length must be positive")
        pos = np.asarray(self.positions, dtype=float) % self.a
        hts = np.asarray(self.heights, dtype=float)
        if pos.shape != hts.shape:
            raise ValueError("positions and heights must have equal length")
        if len(pos) > 1:
            srt = np.sort(pos)
            gaps = np.append(np.diff(srt), srt[0] + self.a - srt[-1])
            if np.min(gaps) < 1e-9 * self.a:
                raise ValueError("cell positions must be distinct modulo a")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "heights", hts)

    def placed(self, delta: float = 0.0):
        """(positions, heights) after the total shift, sorted within [0, a)."""
        pos = (self.positions + (self.delta + delta) * self.a) % self.a
        order = np.argsort(pos)
        return pos[order], self.heights[order]


@dataclass(frozen=True)
class BlochState:
    q: float
    band: int
    k: float
    x: np.ndarray   # N_x uniform samples in [0, a)
    u: np.ndarray   # cell-periodic part, normalized, gauge-pinned


@dataclass(frozen=True)
class BerryGrid:
    band: int
    n_q: int
    n_delta: int
    states: list
    plaquette_field: np.ndarray
    chern: int
    min_overlap: float


def _cell_segments(a, pos):
    bounds = np.concatenate(([0.0], pos, [a]))
    return bounds, np.diff(bounds)


def discriminant(cell: UnitCell, k):
    """Half-trace of the cell transfer matrix; |value| <= 1 inside bands.

    Invariant under the rigid shift (cyclic reordering of the factors), so
    the dispersion never depends on delta. Vectorized over k.
    """
    k = np.asarray(k, dtype=float)
    pos, hts = cell.placed(0.0)
    _, ds = _cell_segments(cell.a, pos)
    t00 = np.ones(k.shape)
    t01 = np.zeros(k.shape)
    t10 = np.zeros(k.shape)
    t11 = np.ones(k.shape)
    for i, d in enumerate(ds):
        kd = k * d
        c, sn = np.cos(kd), np.sin(kd)
        t00, t01, t10, t11 = (c * t00 + (sn / k) * t10,
                              c * t01 + (sn / k) * t11,
                              -k * sn * t00 + c * t10,
                              -k * sn * t01 + c * t11)
        if i < len(hts):
            g = 2.0 * hts[i]
            t10 = t10 + g * t00
            t11 = t11 + g * t01
    half = 0.5 * (t00 + t11)
    return half if half.ndim else float(half)


def _cell_transfer(cell: UnitCell, k: float, delta: float) -> np.ndarray:
    pos, hts = cell.placed(delta)
    _, ds = _cell_segments(cell.a, pos)
    T = np.eye(2)
    for i, d in enumerate(ds):
        kd = k * d
        c, sn = np.cos(kd), np.sin(kd)
        T = np.array([[c, sn / k], [-k * sn, c]]) @ T
        if i < len(hts):
            T = np.array([[1.0, 0.0], [2.0 * hts[i], 1.0]]) @ T
    return T


def band_intervals(cell: UnitCell, n_bands: int,
                   k_min: float = 1e-6) -> list[tuple[float, float]]:
    """k-intervals of the lowest n_bands allowed bands.

    Band edges are the (possibly tangential, when a gap closes) zeros of
    discriminant -+ 1; intervals between consecutive edges are classified
    by the midpoint value.
    """
    a = cell.a
    k_hi = (n_bands + 1) * np.pi / a * 1.01 + k_min
    grid = np.linspace(k_min, k_hi,
                       int(_EDGE_SCAN_DENSITY * (k_hi - k_min) * a / np.pi) + 2)
    disc = discriminant(cell, grid)
    edges = [k_min, float(grid[-1])]
    for sign in (+1.0, -1.0):
        f = lambda k: discriminant(cell, k) - sign
        r, _, _ = _rootscan.scan_roots(f, grid, disc - sign,
                                       tangent_floor=1e-9,
                                       scale_window=_EDGE_SCAN_DENSITY,
                                       tangent_prefilter=0.05)
        edges.extend(r)
    edges = sorted(edges)
    bands = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo < 1e-12:
            continue
        mid = 0.5 * (lo + hi)
        if abs(discriminant(cell, mid)) <= 1.0:
            bands.append((float(lo), float(hi)))
            if len(bands) == n_bands:
                return bands
    raise BandNotFound(
        f"found only {len(bands)} of {n_bands} bands below k = {k_hi:.4g}")


def bloch_bands(cell: UnitCell, q: float, n_bands: int,
                intervals: list[tuple[float, float]] | None = None) -> list[float]:
    """The n_bands smallest k > 0 with tr(T_cell(k))/2 = cos(qa).

    Solved by bracketed root finding on the monotone discriminant within
    each band window; shift-independent.
    """
    if intervals is None:
        intervals = band_intervals(cell, n_bands)
    c = np.cos(q * cell.a)
    ks = []
    for lo, hi in intervals[:n_bands]:
        fa = float(discriminant(cell, lo)) - c
        fb = float(discriminant(cell, hi)) - c
        if fa == 0.0:
            ks.append(lo)
        elif fb == 0.0:
            ks.append(hi)
        elif fa * fb > 0:
            # target essentially at a band edge (cos(qa) = +-1 up to rounding)
            ks.append(lo if abs(fa) <= abs(fb) else hi)
        else:
            ks.append(float(brentq(lambda k: float(discriminant(cell, k)) - c,
                                   lo, hi, rtol=1e-14, xtol=1e-14)))
    return ks


def _bloch_eigvec(T: np.ndarray, mu: complex) -> np.ndarray:
    v1 = np.array([T[0, 1], mu - T[0, 0]], dtype=complex)
    v2 = np.array([mu - T[1, 1], T[1, 0]], dtype=complex)
    n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
    if max(n1, n2) < 1e-12:     # T is a multiple of the identity
        return np.array([1.0, 0.0], dtype=complex)
    return v1 / n1 if n1 >= n2 else v2 / n2


def bloch_state(cell: UnitCell, q: float, delta: float, band: int,
                N_x: int = 256, k: float | None = None,
                intervals=None) -> BlochState:
    """Cell-periodic u(x) = exp(-iqx) psi(x) on N_x uniform samples.

    band counts from 1. The gauge rotates the first sample of magnitude
    at least 1e-8 to the positive real axis, so overlaps between
    neighbouring grid states are well defined.
    """
    if k is None:
        k = bloch_bands(cell, q, band, intervals)[band - 1]
    pos, hts = cell.placed(delta)
    T = _cell_transfer(cell, k, delta)
    mu = np.exp(1j * q * cell.a)
    v = _bloch_eigvec(T, mu)

    xs = cell.a * np.arange(N_x) / N_x
    psi = np.empty(N_x, dtype=complex)
    bounds, _ = _cell_segments(cell.a, pos)
    w = v.copy()
    for n in range(len(pos) + 1):
        x0, x1 = bounds[n], bounds[n + 1]
        sel = (xs >= x0) & (xs < x1) if n < len(pos) else (xs >= x0)
        t = k * (xs[sel] - x0)
        psi[sel] = w[0] * np.cos(t) + (w[1] / k) * np.sin(t)
        # advance (psi, psi') to the next region boundary and apply the jump
        kd = k * (x1 - x0)
        c, sn = np.cos(kd), np.sin(kd)
        w = np.array([w[0] * c + (w[1] / k) * sn,
                      -k * sn * w[0] + c * w[1]])
        if n < len(pos):
            w[1] += 2.0 * hts[n] * w[0]
    u = np.exp(-1j * q * xs) * psi
    nrm = np.sqrt(np.sum(np.abs(u) ** 2) * cell.a / N_x)
    u = u / nrm
    pin = np.flatnonzero(np.abs(u) >= 1e-8)
    if pin.size == 0:
        raise GaugePinFailure("all samples below the pinning floor")
    u = u * (np.conj(u[pin[0]]) / np.abs(u[pin[0]]))
    return BlochState(q=float(q), band=band, k=float(k), x=xs, u=u)


def build_berry_grid(cell: UnitCell, band: int, N_q: int = 32,
                     N_delta: int = 32, N_x: int = 256) -> BerryGrid:
    """All Bloch states on the (q, delta) torus plus plaquette angles.

    q-links at the zone boundary connect u(q) to exp(-2i pi x / a) u(q_0),
    the same physical state expressed one reciprocal vector up; delta-links
    wrap trivially because delta + 1 is the same Hamiltonian. The plaquette
    angle sum is 2 pi times an exact integer.
    """
    if N_q < 8 or N_delta < 8:
        raise ValueError("need at least an 8 x 8 grid")
    a = cell.a
    intervals = band_intervals(cell, band)
    qs = -np.pi / a + 2 * np.pi * np.arange(N_q) / (a * N_q)
    ks = [bloch_bands(cell, q, band, intervals)[band - 1] for q in qs]
    deltas = np.arange(N_delta) / N_delta
    states = [[bloch_state(cell, qs[i], deltas[j], band, N_x, k=ks[i],
                           intervals=intervals)
               for j in range(N_delta)] for i in range(N_q)]

    u_grid = [[st.u for st in row] for row in states]
    F, min_ov = plaquette_field(u_grid, states[0][0].x, a)
    if min_ov < 0.1:
        raise GapClosure(
            f"minimum link overlap {min_ov:.3g} < 0.1: band {band} is not "
            f"isolated on this grid (or the grid is too coarse)")
    total = float(np.sum(F) / (2 * np.pi))
    c = int(round(total))
    if abs(total - c) > 1e-6:
        raise GapClosure(f"plaquette sum {total} is not an integer")
    return BerryGrid(band=band, n_q=N_q, n_delta=N_delta, states=states,
                     plaquette_field=F, chern=c, min_overlap=float(min_ov))


def plaquette_field(u_grid, xs: np.ndarray, a: float):
    """Plaquette angles and minimum link overlap from raw u samples.

    ``u_grid[i][j]`` is the cell-periodic state at (q_i, delta_j); the
    q-wrap applies the reciprocal-vector phase, the delta-wrap is trivial.
    Gauge invariant: any per-point phase drops out of the plaquette angle.
    """
    N_q, N_delta = len(u_grid), len(u_grid[0])
    twist = np.exp(-2j * np.pi * xs / a)
    U_q = np.empty((N_q, N_delta), dtype=complex)
    U_d = np.empty((N_q, N_delta), dtype=complex)
    min_ov = np.inf
    n_x = len(xs)
    for i in range(N_q):
        for j in range(N_delta):
            u = u_grid[i][j]
            nxt = u_grid[i + 1][j] if i + 1 < N_q else twist * u_grid[0][j]
            ov = np.vdot(u, nxt)
            U_q[i, j] = ov
            min_ov = min(min_ov, abs(ov) * a / n_x)
            ov = np.vdot(u, u_grid[i][(j + 1) % N_delta])
            U_d[i, j] = ov
            min_ov = min(min_ov, abs(ov) * a / n_x)
    U_q /= np.abs(U_q)
    U_d /= np.abs(U_d)
    F = _ORIENT * np.angle(U_q * np.roll(U_d, -1, axis=0)
                           * np.conj(np.roll(U_q, -1, axis=1)) * np.conj(U_d))
    return F, float(min_ov)


def chern_number(cell: UnitCell, band: int, N_q: int = 32, N_delta: int = 32,
                 N_x: int = 256) -> int:
    """Chern number of one band over the (q, delta) torus; exact integer."""
    return build_berry_grid(cell, band, N_q, N_delta, N_x).chern


def bulk_gaps(cell: UnitCell, n_bands: int) -> list[tuple[float, float]]:
    """Energy gaps (E_lo, E_hi) between consecutive bands; touching or
    overlapping bands contribute nothing."""
    iv = band_intervals(cell, n_bands)
    gaps = []
    for (lo1, hi1), (lo2, hi2) in zip(iv[:-1], iv[1:]):
        e_lo = 0.5 * hi1 ** 2
        e_hi = 0.5 * lo2 ** 2
        if e_hi > e_lo * (1 + 1e-12) + 1e-12:
            gaps.append((float(e_lo), float(e_hi)))
    return gaps
