"""Bracketing scan shared by the spectrum solver and the band-edge finder.

Finds zeros of a smooth real function on a grid: transversal zeros from
sign changes, plus even-order (tangential) zeros from local minima of |f|
that dip below a floor tied to the local function scale.
"""
from __future__ import annotations

import numpy as np
from scipy.ndimage import maximum_filter1d
from scipy.optimize import brentq, minimize_scalar


def scan_roots(f_scalar, grid: np.ndarray, f_grid: np.ndarray | None = None,
               tangent_floor: float = 1e-10, scale_window: int = 64,
               tangent_prefilter: float | None = None):
    """Return (roots, brackets, tangential_flags) of f on [grid[0], grid[-1]].

    ``f_scalar`` maps a float to a float; ``f_grid`` may carry precomputed
    values on the grid. Brackets are always refined to machine precision:
    shooting functions amplify k errors exponentially in the scatterer
    count, so anything looser poisons downstream coefficient recursions.
    A tangential candidate is kept when the refined minimum of |f| sits
    below tangent_floor times the windowed max of |f|; if the refined
    minimum reveals a hidden sign change, the bracket is split into two
    ordinary roots instead. ``tangent_prefilter`` controls which grid
    minima are worth refining (relative to the local scale); by default
    only minima already within sqrt(tangent_floor).
    """
    vals = np.asarray(f_grid if f_grid is not None else
                      [f_scalar(x) for x in grid], dtype=float)
    if tangent_prefilter is None:
        tangent_prefilter = float(np.sqrt(tangent_floor))
    local_scale = maximum_filter1d(np.abs(vals), size=2 * scale_window + 1,
                                   mode="nearest")
    local_scale = np.maximum(local_scale, 1e-300)

    roots: list[float] = []
    brackets: list[tuple[float, float]] = []
    flags: list[bool] = []
    rt = 4 * np.finfo(float).eps

    sgn = np.sign(vals)
    for i in np.flatnonzero(sgn[:-1] * sgn[1:] < 0):
        r = brentq(f_scalar, grid[i], grid[i + 1], rtol=rt, xtol=1e-14)
        roots.append(float(r))
        brackets.append((float(grid[i]), float(grid[i + 1])))
        flags.append(False)
    # exact zeros on grid points
    for i in np.flatnonzero(vals == 0.0):
        roots.append(float(grid[i]))
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, len(grid) - 1)]
        brackets.append((float(a), float(b)))
        flags.append(False)

    absv = np.abs(vals)
    interior = np.arange(1, len(grid) - 1)
    is_min = (absv[interior] < absv[interior - 1]) & (absv[interior] <= absv[interior + 1])
    no_cross = ((sgn[interior - 1] * sgn[interior] > 0)
                & (sgn[interior] * sgn[interior + 1] > 0))
    cand = interior[is_min & no_cross
                    & (absv[interior] < tangent_prefilter * local_scale[interior])]
    for i in cand:
        a, b = grid[i - 1], grid[i + 1]
        res = minimize_scalar(lambda x: abs(f_scalar(x)), bounds=(a, b),
                              method="bounded",
                              options={"xatol": 1e-13 * max(abs(a), 1.0)})
        km, fm = float(res.x), f_scalar(float(res.x))
        if np.sign(fm) != sgn[i - 1] and fm != 0.0:
            # a close pair of simple zeros: split the bracket
            for lo, hi in ((a, km), (km, b)):
                r = brentq(f_scalar, lo, hi, rtol=rt, xtol=1e-14)
                roots.append(float(r))
                brackets.append((float(lo), float(hi)))
                flags.append(False)
        elif abs(fm) < tangent_floor * local_scale[i]:
            roots.append(km)
            brackets.append((float(a), float(b)))
            flags.append(True)

    order = np.argsort(roots)
    return ([roots[j] for j in order], [brackets[j] for j in order],
            [flags[j] for j in order])


def merge_close(roots, brackets, flags, tol_sep: float):
    """Deduplicate roots closer than tol_sep (keeps the smaller residual slot;
    a merge marks the survivor as a suspected multiple zero)."""
    out_r, out_b, out_f = [], [], []
    for r, b, fl in zip(roots, brackets, flags):
        if out_r and r - out_r[-1] < tol_sep:
            out_f[-1] = out_f[-1] or fl or (r != out_r[-1])
            continue
        out_r.append(r)
        out_b.append(b)
        out_f.append(fl)
    return out_r, out_b, out_f
