"""Parameter sweeps: spectra versus lattice shift and versus modulation flux.

Each grid point is an independent solve (no continuation, which can follow
the wrong root through a crossing); grid points may run on a process pool,
and the assembled table is a deterministic ordered merge, so output never
depends on the worker count. Tables ship raw: no binning, no smoothing.
"""
from __future__ import annotations

import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .model import ScattererSet, modulated_lattice, random_heights, uniform_lattice
from .solve import SolverOptions, find_roots
from .wavefunction import build_state, edge_weight

CSV_HEADER = "param,param_value,state_index,k,energy,edge_weight"


@dataclass(frozen=True)
class SweepRow:
    param_value: float
    state_index: int        # 0-based, ascending in k
    k: float
    energy: float
    edge_weight: float


@dataclass(frozen=True)
class SweepTable:
    param: str              # "delta" or "phi"
    rows: list[SweepRow]
    provenance: dict = field(default_factory=dict)

    def to_csv(self, stream) -> None:
        for key in sorted(self.provenance):
            stream.write(f"# {key}={json.dumps(self.provenance[key], sort_keys=True)}\n")
        stream.write(CSV_HEADER + "\n")
        for r in self.rows:
            stream.write(f"{self.param},{r.param_value!r},{r.state_index},"
                         f"{r.k!r},{r.energy!r},{r.edge_weight!r}\n")

    def to_json(self, stream) -> None:
        obj = {
            "param": self.param,
            "provenance": self.provenance,
            "rows": [[r.param_value, r.state_index, r.k, r.energy, r.edge_weight]
                     for r in self.rows],
        }
        json.dump(obj, stream, sort_keys=True)
        stream.write("\n")

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def resolve_heights(spec, M: int):
    """Height vector from a sweep heights-spec.

    Accepted forms: a number (uniform), {"alternating": [h1, h2, ...]},
    {"random": {"h_min", "h_max", "seed"}}, or an explicit list of M values.
    """
    if isinstance(spec, (int, float)):
        return np.full(M, float(spec))
    if isinstance(spec, dict) and "alternating" in spec:
        cycle = np.asarray(spec["alternating"], dtype=float)
        return cycle[np.arange(M) % len(cycle)]
    if isinstance(spec, dict) and "random" in spec:
        r = spec["random"]
        return random_heights(M, r["h_min"], r["h_max"], int(r["seed"]))
    arr = np.asarray(spec, dtype=float)
    if arr.shape != (M,):
        raise ValueError(f"explicit heights must have length {M}, got {arr.shape}")
    return arr


def _solve_point(args):
    s, value, k_max, opts, f_edge = args
    roots = find_roots(s, k_max, opts)
    rows = []
    for idx, r in enumerate(roots):
        st = build_state(s, r)
        rows.append(SweepRow(param_value=float(value), state_index=idx,
                             k=r.k, energy=r.E,
                             edge_weight=edge_weight(st, f_edge)))
    return rows


def _run_grid(tasks, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_solve_point, tasks, chunksize=1))
    else:
        chunks = [_solve_point(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def sweep_shift(L: float, M: int, heights_spec, delta_grid, k_max: float,
                opts: SolverOptions | None = None, workers: int = 1,
                edge_fraction: float | None = None) -> SweepTable:
    """Spectrum and edge weights of the shifted equidistant lattice,
    one independent solve per shift value in [-1, 1]."""
    opts = opts or SolverOptions()
    delta_grid = np.asarray(delta_grid, dtype=float)
    if delta_grid.size and (delta_grid.min() < -1 or delta_grid.max() > 1):
        raise ValueError("shift grid must lie within [-1, 1]")
    hts = resolve_heights(heights_spec, M)
    f_edge = edge_fraction if edge_fraction is not None else min(1.0 / M, 0.5)
    tasks = [(uniform_lattice(L, M, 0.0, d, heights=hts), d, k_max, opts, f_edge)
             for d in delta_grid]
    rows = _run_grid(tasks, workers)
    prov = {
        "command": "sweep_shift",
        "family": {"L": L, "M": M, "heights": _echo_heights(heights_spec),
                   "delta_grid": delta_grid.tolist()},
        "k_max": k_max, "options": _echo_opts(opts),
        "edge_fraction": f_edge, "version": __version__,
    }
    return SweepTable(param="delta", rows=rows, provenance=prov)


def sweep_flux(L: float, M: int, h_min: float, h_max: float, phi_grid,
               k_max: float, opts: SolverOptions | None = None,
               workers: int = 1,
               edge_fraction: float | None = None) -> SweepTable:
    """Spectrum of the flux-modulated lattice over a phi grid in [0, phi_0],
    phi_0 = (M+1)/2."""
    opts = opts or SolverOptions()
    phi_grid = np.asarray(phi_grid, dtype=float)
    phi0 = (M + 1) / 2
    if phi_grid.size and (phi_grid.min() < 0 or phi_grid.max() > phi0 * (1 + 1e-12)):
        raise ValueError(f"flux grid must lie within [0, {phi0}]")
    f_edge = edge_fraction if edge_fraction is not None else min(1.0 / M, 0.5)
    tasks = [(modulated_lattice(L, M, h_min, h_max, p), p, k_max, opts, f_edge)
             for p in phi_grid]
    rows = _run_grid(tasks, workers)
    prov = {
        "command": "sweep_flux",
        "family": {"L": L, "M": M, "h_min": h_min, "h_max": h_max,
                   "phi_grid": phi_grid.tolist()},
        "k_max": k_max, "options": _echo_opts(opts),
        "edge_fraction": f_edge, "version": __version__,
    }
    return SweepTable(param="phi", rows=rows, provenance=prov)


def _echo_opts(opts: SolverOptions) -> dict:
    return {"q_factor": opts.q_factor, "tol_rel": opts.tol_rel,
            "tol_sep": opts.tol_sep, "k_min": opts.k_min}


def _echo_heights(spec):
    if isinstance(spec, (int, float)):
        return float(spec)
    if isinstance(spec, dict):
        return spec
    return np.asarray(spec, dtype=float).tolist()
