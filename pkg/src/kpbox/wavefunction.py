"""Eigenfunction assembly, normalization and evaluation.

Coefficients are built from the reflection/scattering recursion with the
A_1(k) = 1 gauge, then rotated by the constant phase exp(ikL/2). In that
gauge the coefficients obey A_n(-k) = -conj(A_n(k)), which makes Psi equal
to i times a real function, as an eigenfunction of a real Hamiltonian
should be (up to phase). Normalization uses the exact per-region
antiderivative of |Psi|^2 (densities are trigonometric polynomials), so
quadrature appears only in cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bethe import (_reflect_across, _reflect_across_right,
                    reflection_coefficients, scattering_coefficients)
from .model import ScattererSet
from .solve import QuasimomentumRoot


class InvalidRoot(ValueError):
    """Boundary residuals too large; the supplied k is not a root."""


class OutOfDomain(ValueError):
    """Evaluation point outside the box."""


@dataclass(frozen=True)
class EigenState:
    set: ScattererSet
    root: QuasimomentumRoot
    coeff_plus: np.ndarray    # A_n(k), one per region, normalized
    coeff_minus: np.ndarray   # A_n(-k) = R_n A_n(k)
    norm: float               # normalization constant relative to A_1(k)=1

    @property
    def k(self) -> float:
        return self.root.k


def _raw_coefficients(s: ScattererSet, k: float):
    """A_1 = 1 gauge coefficients, assembled from both walls.

    One-sided chains lose relative accuracy wherever the state decays: the
    irreducible root residual, amplified by the dynamic range, then lands
    on the far boundary condition. Building the left chain up to the
    amplitude peak and the mirrored right chain down to the same barrier
    puts the splice where conditioning is O(1); both walls and all other
    scatterer conditions are exact by construction.
    """
    M = s.M
    R = reflection_coefficients(s, k)
    S = scattering_coefficients(s, k, R)
    A = np.empty(M + 1, dtype=complex)
    A[0] = 1.0
    for n in range(M):
        A[n + 1] = A[n] * S[n]
    B = R * A
    if M == 0:
        return A, B
    j = int(np.argmax(np.abs(A)))
    if j < M:
        # mirrored chain from the right wall down to the splice barrier j
        R_r = np.empty(M + 1, dtype=complex)
        A_r = np.empty(M + 1, dtype=complex)
        R_r[M] = -np.exp(1j * k * s.L)
        A_r[M] = 1.0
        for n in range(M - 1, j - 1, -1):
            h, y = s.heights[n], s.positions[n]
            A_r[n] = A_r[n + 1] * (
                1.0 - (h / (1j * k)) * (1.0 + np.exp(-2j * y * k) * R_r[n + 1]))
            R_r[n] = _reflect_across_right(h, y, k, R_r[n + 1], n + 1)
        scale = A[j] / A_r[j]
        A[j + 1:] = scale * A_r[j + 1:]
        B[j + 1:] = R_r[j + 1:] * A[j + 1:]
    else:
        # peak in the last region: close the chain with the recursed ratio
        B[M] = _reflect_across(s.heights[-1], s.positions[-1], k,
                               R[M - 1], M + 1) * A[M]
    return A, B


def _segment_integral(A, B, k, y0, y1):
    """Exact integral of |A e^{ikx} + B e^{-ikx}|^2 over [y0, y1]."""
    cross = A * np.conj(B) * (np.exp(2j * k * y1) - np.exp(2j * k * y0)) / (2j * k)
    return float((np.abs(A) ** 2 + np.abs(B) ** 2) * (y1 - y0) + 2 * np.real(cross))


def norm_constant(s: ScattererSet, k: float,
                  A: np.ndarray | None = None,
                  B: np.ndarray | None = None) -> float:
    """Closed-form normalization constant for the A_1(k) = 1 gauge."""
    if A is None or B is None:
        A, B = _raw_coefficients(s, k)
    b = s.boundaries()
    total = sum(_segment_integral(A[n], B[n], k, b[n], b[n + 1])
                for n in range(s.M + 1))
    return 1.0 / np.sqrt(total)


def build_state(s: ScattererSet, root: QuasimomentumRoot | float,
                residual_tol: float = 1e-6) -> EigenState:
    """Assemble a normalized eigenstate from a solved root.

    Validates the construction: continuity and the derivative jump at every
    scatterer, and vanishing at both walls, all relative to the peak
    amplitude. Raises InvalidRoot if k is not actually a root.
    """
    if not isinstance(root, QuasimomentumRoot):
        root = QuasimomentumRoot(k=float(root))
    if root.residual > residual_tol:
        raise InvalidRoot(f"root residual {root.residual} above {residual_tol}")
    k = root.k
    A, B = _raw_coefficients(s, k)
    norm = norm_constant(s, k, A, B)
    gauge = norm * np.exp(1j * k * s.L / 2)
    state = EigenState(set=s, root=root, coeff_plus=A * gauge,
                       coeff_minus=B * gauge, norm=norm)
    _validate(state)
    return state


def _validate(st: EigenState, tol: float = 1e-9):
    s, k = st.set, st.k
    A, B = st.coeff_plus, st.coeff_minus
    peak = np.max(np.abs(A) + np.abs(B))
    ep = np.exp(1j * k * s.positions)
    em = np.conj(ep)
    left = A[:-1] * ep + B[:-1] * em
    right = A[1:] * ep + B[1:] * em
    dleft = 1j * k * (A[:-1] * ep - B[:-1] * em)
    dright = 1j * k * (A[1:] * ep - B[1:] * em)
    if s.M and np.max(np.abs(right - left)) > tol * peak:
        raise InvalidRoot("continuity residual above tolerance")
    jump = dright - dleft - 2.0 * s.heights * left
    if s.M and np.max(np.abs(jump)) > 1e-8 * max(k, 1.0) * peak:
        raise InvalidRoot("derivative-jump residual above tolerance")
    wl = A[0] * np.exp(-1j * k * s.L / 2) + B[0] * np.exp(1j * k * s.L / 2)
    wr = A[-1] * np.exp(1j * k * s.L / 2) + B[-1] * np.exp(-1j * k * s.L / 2)
    if max(abs(wl), abs(wr)) > tol * peak:
        raise InvalidRoot(
            f"wall residual {max(abs(wl), abs(wr)):.3g} above {tol:.0e} x peak; "
            f"k = {k!r} is not a root")


def evaluate(st: EigenState, x):
    """Complex amplitude Psi(x); accepts a scalar or an ndarray."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < -st.set.L / 2 - 1e-12) or np.any(xs > st.set.L / 2 + 1e-12):
        raise OutOfDomain(f"x outside [-{st.set.L / 2}, {st.set.L / 2}]")
    n = np.searchsorted(st.set.positions, xs, side="left")
    val = (st.coeff_plus[n] * np.exp(1j * st.k * xs)
           + st.coeff_minus[n] * np.exp(-1j * st.k * xs))
    return val if val.ndim else complex(val)


def integrate_density(st: EigenState, a: float, b: float) -> float:
    """Exact integral of |Psi|^2 over [a, b] (per-region antiderivatives)."""
    L = st.set.L
    a = max(a, -L / 2)
    b = min(b, L / 2)
    if b <= a:
        return 0.0
    bounds = st.set.boundaries()
    total = 0.0
    for n in range(st.set.M + 1):
        lo = max(a, bounds[n])
        hi = min(b, bounds[n + 1])
        if hi > lo:
            total += _segment_integral(st.coeff_plus[n], st.coeff_minus[n],
                                       st.k, lo, hi)
    return total


def edge_weight(st: EigenState, edge_fraction: float | None = None) -> float:
    """Probability within a fraction of the box at each wall (both edges).

    Defaults to one lattice period per side, edge_fraction = 1/M (clipped
    to the half box). For a normalized state the value lies in [0, 1].
    """
    if edge_fraction is None:
        edge_fraction = 1.0 / st.set.M if st.set.M else 0.5
    if not 0 < edge_fraction <= 0.5:
        raise ValueError(f"edge_fraction must be in (0, 0.5], got {edge_fraction}")
    L = st.set.L
    w = edge_fraction * L
    return (integrate_density(st, -L / 2, -L / 2 + w)
            + integrate_density(st, L / 2 - w, L / 2))


def edge_weights_sided(st: EigenState, edge_fraction: float | None = None):
    """(left, right) edge probabilities, same window as edge_weight."""
    if edge_fraction is None:
        edge_fraction = 1.0 / st.set.M if st.set.M else 0.5
    L = st.set.L
    w = edge_fraction * L
    return (integrate_density(st, -L / 2, -L / 2 + w),
            integrate_density(st, L / 2 - w, L / 2))


def overlap(a: EigenState, b: EigenState) -> complex:
    """Exact inner product <Psi_a|Psi_b> over the box."""
    if a.set is not b.set and (a.set.L != b.set.L
                               or not np.array_equal(a.set.positions, b.set.positions)):
        raise ValueError("overlap requires states of the same instance")
    bounds = a.set.boundaries()
    ka, kb = a.k, b.k
    total = 0j
    for n in range(a.set.M + 1):
        y0, y1 = bounds[n], bounds[n + 1]
        for ca, sa in ((np.conj(a.coeff_plus[n]), -ka),
                       (np.conj(a.coeff_minus[n]), ka)):
            for cb, sb in ((b.coeff_plus[n], kb), (b.coeff_minus[n], -kb)):
                kap = sa + sb
                if abs(kap) < 1e-12:
                    total += ca * cb * (y1 - y0)
                else:
                    total += ca * cb * (np.exp(1j * kap * y1)
                                        - np.exp(1j * kap * y0)) / (1j * kap)
    return complex(total)


def density_grid(st: EigenState, n_samples: int) -> np.ndarray:
    """(n_samples, 2) array of (x, |Psi|^2) on a uniform grid spanning the
    box, walls included. Wall samples are exact zeros (hard-wall boundary
    condition), bypassing root-refinement noise."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    xs = np.linspace(-st.set.L / 2, st.set.L / 2, n_samples)
    rho = np.abs(evaluate(st, xs)) ** 2
    rho[0] = 0.0
    rho[-1] = 0.0
    return np.column_stack((xs, rho))
