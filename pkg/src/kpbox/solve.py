"""Spectrum solver: all quasimomentum roots below a cutoff.

Roots are zeros of the wall-to-wall mismatch. A uniform scan brackets sign
changes (grid pitch tied to the box level spacing pi/L and the M-fold band
splitting), brentq refines, and a node-count consistency check guarantees
completeness: if the oscillation count disagrees with the number of roots
found, the offending cells are rescanned at geometrically finer pitch
before giving up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _rootscan
from .bethe import bethe_mismatch
from .model import ScattererSet


class BracketExhaustion(RuntimeError):
    """Scan could not separate adjacent roots even after refinement."""


@dataclass(frozen=True)
class SolverOptions:
    q_factor: float = 8.0     # grid pitch = pi / (L * q_factor * (M+1))
    tol_rel: float = 1e-12    # guaranteed relative accuracy of k (refinement
                              # itself always runs to machine precision)
    tol_sep: float = 1e-9     # roots closer than this merge
    k_min: float = 1e-6       # scan start; the ansatz degenerates at k = 0
    tangent_floor: float = 1e-10   # |mismatch| floor for tangential zeros
    max_refine_levels: int = 5     # rescans (x16 finer each) before giving up


@dataclass(frozen=True)
class QuasimomentumRoot:
    k: float
    E: float = field(init=False)
    bracket: tuple[float, float] = (0.0, 0.0)
    residual: float = 0.0
    multiplicity_flag: bool = False

    def __post_init__(self):
        object.__setattr__(self, "E", 0.5 * self.k * self.k)


def count_states_below(s: ScattererSet, E: float) -> int:
    """Number of eigenvalues below E, independent of the root finder.

    Counts the nodes of the shooting solution at k = sqrt(2E) inside the
    box: within each free segment the solution is C sin(k(x - x0) + alpha),
    so nodes are counted in closed form; scatterer jumps touch only the
    derivative and cannot add nodes.
    """
    if E <= 0:
        return 0
    k = math.sqrt(2.0 * E)
    psi, phi = 0.0, 1.0   # (psi, psi'/k) at the left wall
    count = 0
    hs = s.heights
    ds = s.segment_lengths()
    for i, d in enumerate(ds):
        alpha = math.atan2(psi, phi)
        kd = k * d
        count += math.floor((alpha + kd) / math.pi) - math.floor(alpha / math.pi)
        c, sn = math.cos(kd), math.sin(kd)
        psi, phi = psi * c + phi * sn, phi * c - psi * sn
        if i < len(hs):
            phi += (2.0 * hs[i] / k) * psi
    # a node exactly on the right wall means E is itself an eigenvalue;
    # it is not a state strictly below E
    alpha_end = math.atan2(psi, phi)
    if abs(math.remainder(alpha_end, math.pi)) < 1e-12:
        count -= 1
    return count


def _grid(s: ScattererSet, k_lo: float, k_hi: float, step: float) -> np.ndarray:
    n = max(int(math.ceil((k_hi - k_lo) / step)), 8)
    return np.linspace(k_lo, k_hi, n + 1)


def find_roots(s: ScattererSet, k_max: float,
               opts: SolverOptions | None = None) -> list[QuasimomentumRoot]:
    """All roots in (k_min, k_max), ascending, each refined and deduplicated.

    Tangential (even-order) zeros are detected from deep minima of the
    mismatch magnitude and flagged. Raises BracketExhaustion, naming the
    offending interval, if the node-count check still disagrees after the
    finest rescan; missing roots are never silently dropped.
    """
    opts = opts or SolverOptions()
    if k_max <= opts.k_min:
        return []
    f = lambda k: bethe_mismatch(s, k)
    step = math.pi / (s.L * opts.q_factor * (s.M + 1))
    grid = _grid(s, opts.k_min, k_max, step)
    vals = bethe_mismatch(s, grid)
    roots, brackets, flags = _rootscan.scan_roots(
        f, grid, vals, tangent_floor=opts.tangent_floor,
        scale_window=max(int(opts.q_factor * (s.M + 1)), 8))
    roots, brackets, flags = _rootscan.merge_close(roots, brackets, flags,
                                                   opts.tol_sep)

    # Sturm-type completeness: node count across the scanned range equals
    # the number of roots found. States below E(k_min) - weakly bound levels
    # of attractive combs - are outside the real-k domain and not counted.
    expected = (count_states_below(s, 0.5 * k_max * k_max)
                - count_states_below(s, 0.5 * opts.k_min ** 2))
    found = len(roots)
    if found != expected:
        roots, brackets, flags = _rescan(s, f, grid, roots, brackets, flags,
                                         expected, opts)
    out = [QuasimomentumRoot(k=r, bracket=b, residual=abs(f(r)),
                             multiplicity_flag=fl)
           for r, b, fl in zip(roots, brackets, flags)]
    return out


def _rescan(s, f, grid, roots, brackets, flags, expected, opts):
    """Reconcile the root list with the node count, cell by cell.

    Cells holding too few roots are drilled at geometrically finer pitch;
    cells holding too many shed heuristically-flagged (tangential) roots,
    worst residual first. Sign-change roots are certain and never dropped.
    """
    for level in range(opts.max_refine_levels):
        bad = [c for c in _offending_cells(s, grid, roots)
               if not _boundary_threshold_state(f, grid, c)]
        if not bad:
            return roots, brackets, flags
        for (a, b, have, want) in bad:
            if have > want:
                roots, brackets, flags = _drop_flagged(
                    f, roots, brackets, flags, a, b, have - want)
            else:
                sub = np.linspace(a, b, 16 * (2 ** level) + 1)
                vals = bethe_mismatch(s, sub)
                r2, b2, f2 = _rootscan.scan_roots(
                    f, sub, vals, tangent_floor=opts.tangent_floor,
                    scale_window=8)
                roots, brackets, flags = _merge_lists(roots, brackets, flags,
                                                      r2, b2, f2, opts.tol_sep)
    bad = [c for c in _offending_cells(s, grid, roots)
           if not _boundary_threshold_state(f, grid, c)]
    if bad:
        raise BracketExhaustion(
            f"node count {expected} vs {len(roots)} roots; unresolved "
            f"interval(s) {[c[:2] for c in bad[:3]]} after "
            f"{opts.max_refine_levels} rescans")
    return roots, brackets, flags


def _boundary_threshold_state(f, grid, cell):
    """True when the discrepant cell is the k_min boundary cell and the
    mismatch vanishes into the boundary: the signature of a level sitting
    at E = 0 within rounding (an attractive comb's threshold state). Such
    a level has no bracketable k > 0 and lies outside the real-k domain."""
    a, b, have, want = cell
    if abs(have - want) != 1 or a > grid[0]:
        return False
    fa, fb = abs(f(grid[0])), abs(f(b))
    return fa < 1e-6 * max(fb, 1e-300)


def _drop_flagged(f, roots, brackets, flags, a, b, n_drop):
    """Remove up to n_drop tangential-flagged roots in (a, b], largest
    |mismatch| first (a spurious flag has the worst residual)."""
    cand = [(abs(f(r)), i) for i, (r, fl) in enumerate(zip(roots, flags))
            if fl and a < r <= b]
    cand.sort(reverse=True)
    kill = {i for _, i in cand[:n_drop]}
    keep = [i for i in range(len(roots)) if i not in kill]
    return ([roots[i] for i in keep], [brackets[i] for i in keep],
            [flags[i] for i in keep])


def _offending_cells(s, grid, roots):
    """Coarse cells (16 grid steps wide) whose root count disagrees with the
    node count difference across the cell; yields (lo, hi, have, want)."""
    cells = []
    idx = np.arange(0, len(grid), 16)
    if idx[-1] != len(grid) - 1:
        idx = np.append(idx, len(grid) - 1)
    counts = [count_states_below(s, 0.5 * grid[i] ** 2) for i in idx]
    r = np.asarray(roots)
    for j in range(len(idx) - 1):
        a, b = grid[idx[j]], grid[idx[j + 1]]
        have = int(np.sum((r > a) & (r <= b)))
        want = counts[j + 1] - counts[j]
        if have != want:
            cells.append((float(a), float(b), have, want))
    return cells


def _merge_lists(r1, b1, f1, r2, b2, f2, tol_sep):
    allr = list(zip(r1, b1, f1)) + list(zip(r2, b2, f2))
    allr.sort(key=lambda t: t[0])
    roots = [t[0] for t in allr]
    brackets = [t[1] for t in allr]
    flags = [t[2] for t in allr]
    return _rootscan.merge_close(roots, brackets, flags, tol_sep)
