"""Quasimomentum condition for the delta comb in a box.

Two evaluation routes for the same quantization condition:

* ``bethe_mismatch`` shoots the real pair (psi, psi'/k) from the left wall
  and returns psi at the right wall. It is the production root function:
  smooth in k, pole-free, and bounded (the scaled pair makes free
  propagation an exact rotation, so the box case is literally sin(kL)).
* ``bethe_polynomial_form`` evaluates the explicit ordered-subset sum
  sum_n 2^n xi_n k^(M-n); its zero set is identical (it equals
  k^M * bethe_mismatch) but the cost is 2^M, so it is a cross-check only.

The complex reflection/scattering recursion is kept as a tested secondary
path; it is what the eigenfunction assembly consumes.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .model import ScattererSet

#: denominators smaller than this (relative to the numerator) abort the
#: reflection recursion; below it the quotient is numerical noise.
POLE_FLOOR = 1e-12

#: cost cap for the explicit ordered-subset evaluation (2^M terms).
SUBSET_CAP = 12


class RecursionPole(ArithmeticError):
    """Reflection recursion hit a vanishing denominator; perturb k."""


class SubsetBlowup(ValueError):
    """Explicit-sum evaluation refused: 2^M terms above the configured cap."""


def bethe_mismatch(s: ScattererSet, k):
    """Right-wall residual whose zeros are the allowed quasimomenta.

    Accepts a scalar or an ndarray of k > 0 values. The state (psi, psi'/k)
    starts as (0, 1) at -L/2; each free segment applies an exact rotation
    and each scatterer the jump psi'/k += (2h/k) psi. The rescaled pair is
    a positive per-segment rescaling of the raw (psi, psi') propagation, so
    the zero set is untouched while magnitudes stay O(1) at large k.
    """
    k = np.asarray(k, dtype=float)
    ds = s.segment_lengths()
    hs = s.heights
    psi = np.zeros(k.shape)
    phi = np.ones(k.shape)
    for i, d in enumerate(ds):
        kd = k * d
        c, sn = np.cos(kd), np.sin(kd)
        psi, phi = psi * c + phi * sn, phi * c - psi * sn
        if i < len(hs):
            phi = phi + (2.0 * hs[i] / k) * psi
        # strong combs can grow hyperbolically inside gaps; renormalize by a
        # positive factor before anything overflows
        mag = np.abs(psi) + np.abs(phi)
        if np.any(mag > 1e100):
            scale = np.where(mag > 1e100, 1.0 / mag, 1.0)
            psi = psi * scale
            phi = phi * scale
    return psi if psi.ndim else float(psi)


def transfer_matrix(s: ScattererSet, k: float) -> np.ndarray:
    """Wall-to-wall transfer matrix acting on (psi, psi'); det = 1.

    Product of free segments [[cos kd, sin kd / k], [-k sin kd, cos kd]]
    and jumps [[1, 0], [2h, 1]], ordered left to right.
    """
    k = float(k)
    T = np.eye(2)
    hs = s.heights
    for i, d in enumerate(s.segment_lengths()):
        kd = k * d
        c, sn = np.cos(kd), np.sin(kd)
        T = np.array([[c, sn / k], [-k * sn, c]]) @ T
        if i < len(hs):
            T = np.array([[1.0, 0.0], [2.0 * hs[i], 1.0]]) @ T
    return T


def _reflect_across(h: float, y: float, k: float, R_prev: complex,
                    region: int) -> complex:
    """One step of the left reflection recursion across a scatterer."""
    num = -h * np.exp(2j * y * k) + (1j * k - h) * R_prev
    den = (1j * k + h) + h * np.exp(-2j * y * k) * R_prev
    if abs(den) < POLE_FLOOR * max(abs(num), 1.0):
        raise RecursionPole(
            f"reflection recursion pole at region {region}, k = {k!r}")
    return num / den


def _reflect_across_right(h: float, y: float, k: float, R_next: complex,
                          region: int) -> complex:
    """Mirror step: region-n ratio from the region-(n+1) ratio."""
    num = h * np.exp(2j * y * k) + (1j * k + h) * R_next
    den = (1j * k - h) - h * np.exp(-2j * y * k) * R_next
    if abs(den) < POLE_FLOOR * max(abs(num), 1.0):
        raise RecursionPole(
            f"right reflection recursion pole at region {region}, k = {k!r}")
    return num / den


def reflection_coefficients(s: ScattererSet, k: float) -> np.ndarray:
    """Per-region ratios R_n = A_n(-k)/A_n(k) at quasimomentum k.

    R_1 = -exp(-ikL) comes from the left wall; R_2..R_M follow the left
    recursion across scatterers 1..M-1. The last entry is the independent
    right-wall value -exp(+ikL) (not derived from the recursion), so
    callers can compare a recursed value against it: the two agree exactly
    when k is an allowed quasimomentum. For M = 0 the single region
    carries the left-wall value.
    """
    k = float(k)
    M = s.M
    R = np.empty(M + 1, dtype=complex)
    R[0] = -np.exp(-1j * k * s.L)
    for n in range(1, M):
        R[n] = _reflect_across(s.heights[n - 1], s.positions[n - 1], k,
                               R[n - 1], n + 1)
    if M >= 1:
        R[M] = -np.exp(1j * k * s.L)
    return R


def scattering_coefficients(s: ScattererSet, k: float,
                            R: np.ndarray | None = None) -> np.ndarray:
    """Amplitude ratios S_n = A_{n+1}(k)/A_n(k) across each scatterer.

    S_n = 1 + (h_n / ik) (1 + exp(-2i y_n k) R_n); transparent scatterers
    (h = 0) give exactly 1.
    """
    k = float(k)
    if R is None:
        R = reflection_coefficients(s, k)
    n = np.arange(s.M)
    return 1.0 + (s.heights / (1j * k)) * (
        1.0 + np.exp(-2j * s.positions * k) * R[n])


def bethe_polynomial_form(s: ScattererSet, k, cap: int = SUBSET_CAP):
    """Explicit-sum form sum_n 2^n xi_n k^(M-n) of the root condition.

    xi_n sums, over ordered scatterer subsets p_1 < ... < p_n, the height
    product times the chain of sines of consecutive gaps, with the walls as
    the outer chain points. Equals k^M * bethe_mismatch(k); exponential in
    M, hence the cap.
    """
    if s.M > cap:
        raise SubsetBlowup(f"M = {s.M} exceeds the 2^M evaluation cap {cap}")
    k = np.asarray(k, dtype=float)
    total = np.zeros(k.shape)
    for n in range(s.M + 1):
        for sub in combinations(range(s.M), n):
            pts = np.concatenate(([-s.L / 2], s.positions[list(sub)], [s.L / 2]))
            term = float(np.prod(s.heights[list(sub)]))
            sines = np.prod(np.sin(k[..., None] * np.diff(pts)), axis=-1)
            total = total + (2.0 ** n) * term * sines * k ** (s.M - n)
    return total if total.ndim else float(total)
