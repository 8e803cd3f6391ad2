"""Independent finite-difference eigensolver used to validate the exact path.

Three-point Laplacian with Dirichlet walls on N interior points; each delta
becomes an on-site potential h/dx at the nearest grid point, which is the
simplest consistent discretization and converges at first order in dx.
Test-only by design: nothing here feeds production output.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import ScattererSet
from .solve import SolverOptions, find_roots


class GridTooCoarse(ValueError):
    """Two scatterers snapped to the same grid point."""


class CountMismatch(RuntimeError):
    """Oracle and exact solver disagree on the number of states."""


@dataclass(frozen=True)
class FdSpectrum:
    N: int
    dx: float
    energies: np.ndarray
    snap_error: float                 # largest |y_n - snapped position|
    vectors: np.ndarray | None = None  # columns are grid eigenvectors


def fd_spectrum(s: ScattererSet, N: int, m: int,
                eigenvectors: bool = False) -> FdSpectrum:
    """Lowest m eigenvalues of the discretized box (Sturm bisection via
    LAPACK's tridiagonal range solver)."""
    dx = s.L / (N + 1)
    x = -s.L / 2 + dx * np.arange(1, N + 1)
    diag = np.full(N, 1.0 / dx ** 2)
    if s.M:
        idx = np.clip(np.rint((s.positions + s.L / 2) / dx).astype(int) - 1,
                      0, N - 1)
        if len(np.unique(idx)) != s.M:
            raise GridTooCoarse(
                f"N = {N} cannot separate scatterers {s.positions}")
        snap = float(np.max(np.abs(x[idx] - s.positions)))
        np.add.at(diag, idx, s.heights / dx)
    else:
        snap = 0.0
    off = np.full(N - 1, -0.5 / dx ** 2)
    if eigenvectors:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, m - 1))
    else:
        w = eigh_tridiagonal(diag, off, select="i", select_range=(0, m - 1),
                             eigvals_only=True)
        v = None
    return FdSpectrum(N=N, dx=dx, energies=w, snap_error=snap, vectors=v)


def compare(s: ScattererSet, m: int, N: int,
            opts: SolverOptions | None = None) -> float:
    """Max relative energy error between the oracle and the exact roots,
    over the lowest m states. Raises CountMismatch if the oracle sees a
    different number of states below the m-th exact energy."""
    fd = fd_spectrum(s, N, m + 1)
    k_max = float(np.sqrt(2.0 * fd.energies[m - 1])) * 1.02 + 0.2
    roots = find_roots(s, k_max, opts)
    if len(roots) < m:
        raise CountMismatch(
            f"exact solver found {len(roots)} states below k = {k_max:.4g}, "
            f"oracle predicts at least {m}")
    exact = np.array([r.E for r in roots[:m]])
    # halfway between the m-th exact and the (m+1)-th oracle energy; a missed
    # or spurious state shifts the count across this threshold
    thr = 0.5 * (exact[m - 1] + fd.energies[m])
    n_fd = int(np.sum(fd.energies < thr))
    if n_fd != m:
        raise CountMismatch(
            f"oracle has {n_fd} states below the {m}-th exact energy, expected {m}")
    return float(np.max(np.abs(fd.energies[:m] - exact) / exact))


def fd_ring_spectrum(a: float, positions: np.ndarray, heights: np.ndarray,
                     q: float, N: int, m: int) -> np.ndarray:
    """Lowest m energies of one periodic cell with Bloch phase exp(iqa);
    small dense solve, used only to validate the band solver."""
    dx = a / N
    H = np.zeros((N, N), dtype=complex)
    i = np.arange(N)
    H[i, i] = 1.0 / dx ** 2
    H[i, (i + 1) % N] = -0.5 / dx ** 2
    H[i, (i - 1) % N] = -0.5 / dx ** 2
    # Bloch boundary phase on the wrap-around hops
    H[N - 1, 0] *= np.exp(1j * q * a)
    H[0, N - 1] *= np.exp(-1j * q * a)
    idx = np.rint(positions / dx).astype(int) % N
    if len(np.unique(idx)) != len(positions):
        raise GridTooCoarse(f"N = {N} cannot separate cell scatterers")
    for j, h in zip(idx, heights):
        H[j, j] += h / dx
    w = np.linalg.eigvalsh(H)
    return w[:m]
