"""Command-line surface: solve, wavefunction, sweep, chern, verify.

Every output carries provenance comment lines (full effective config plus
version), floats are serialized with shortest round-trip formatting, and
identical configs produce byte-identical files. Exit codes: 0 ok, 2 config
error, 3 solver error, 4 index out of range.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bethe import RecursionPole, SubsetBlowup
from .model import (ModelError, ScattererSet, scatterer_set_from_config,
                    scatterer_set_to_config)
from .oracle import CountMismatch, GridTooCoarse, compare
from .solve import BracketExhaustion, SolverOptions, find_roots
from .sweeps import SweepTable, sweep_flux, sweep_shift
from .topology import (BandNotFound, GapClosure, GaugePinFailure, UnitCell,
                       build_berry_grid)
from .wavefunction import InvalidRoot, OutOfDomain, build_state, evaluate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_RANGE = 4

_SOLVER_ERRORS = (BracketExhaustion, RecursionPole, SubsetBlowup, InvalidRoot,
                  OutOfDomain, BandNotFound, GapClosure, GaugePinFailure,
                  GridTooCoarse, CountMismatch)


@dataclass(frozen=True)
class RunConfig:
    command: str
    instance: dict
    options: dict
    output: str | None
    fmt: str


class ConfigError(ValueError):
    pass


def _parse_kv(text: str) -> dict:
    """Parse 'a=1,b=0.4:1.4' into numbers / colon-lists of numbers."""
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        key, val = item.split("=", 1)
        vals = []
        for piece in val.split(":"):
            try:
                num = float(piece)
            except ValueError as exc:
                raise ConfigError(f"non-numeric value {piece!r} for {key}") from exc
            vals.append(int(num) if num == int(num) and "." not in piece
                        and "e" not in piece.lower() else num)
        out[key.strip()] = vals[0] if len(vals) == 1 else vals
    return out


def _instance_config(args) -> dict:
    """Translate instance flags into the JSON instance schema."""
    given = [name for name in ("box", "uniform", "modulated", "random", "config")
             if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise ConfigError(
            f"exactly one instance source required, got {given or 'none'}")
    src = given[0]
    if src == "config":
        with open(args.config) as fh:
            return json.load(fh)
    kv = _parse_kv(getattr(args, src))
    if src == "box":
        return {"L": kv["L"], "scatterers": []}
    return {src: kv}


def _opts_from(args) -> SolverOptions:
    kw = {}
    if getattr(args, "q_factor", None) is not None:
        kw["q_factor"] = args.q_factor
    if getattr(args, "tol_rel", None) is not None:
        kw["tol_rel"] = args.tol_rel
    if getattr(args, "tol_sep", None) is not None:
        kw["tol_sep"] = args.tol_sep
    return SolverOptions(**kw)


def _echo_options(args) -> dict:
    out = {"k_max": args.kmax}
    for name in ("q_factor", "tol_rel", "tol_sep"):
        if getattr(args, name, None) is not None:
            out[name] = getattr(args, name)
    return out


def _provenance_lines(cfg: RunConfig) -> list[str]:
    blob = {"command": cfg.command, "instance": cfg.instance,
            "options": cfg.options, "format": cfg.fmt}
    return [f"# config={json.dumps(blob, sort_keys=True)}",
            f"# version={__version__}"]


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    env = os.environ.get("KP_THREADS")
    if env:
        return max(int(env), 1)
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# subcommands

def _cmd_solve(args) -> int:
    inst = _instance_config(args)
    s = scatterer_set_from_config(inst)
    cfg = RunConfig("solve", inst, _echo_options(args), args.output, args.format)
    roots = find_roots(s, args.kmax, _opts_from(args))
    if cfg.fmt == "json":
        obj = {"provenance": {"config": json.loads(_provenance_lines(cfg)[0][9:]),
                              "version": __version__},
               "roots": [[i, r.k, r.E] for i, r in enumerate(roots)]}
        _emit(cfg, json.dumps(obj, sort_keys=True) + "\n")
    else:
        lines = _provenance_lines(cfg) + ["index,k,energy"]
        lines += [f"{i},{r.k!r},{r.E!r}" for i, r in enumerate(roots)]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_wavefunction(args) -> int:
    inst = _instance_config(args)
    s = scatterer_set_from_config(inst)
    options = _echo_options(args)
    options.update({"state": args.state, "samples": args.samples})
    cfg = RunConfig("wavefunction", inst, options, args.output, args.format)
    roots = find_roots(s, args.kmax, _opts_from(args))
    if not 0 <= args.state < len(roots):
        print(f"state index {args.state} outside the {len(roots)} solved roots",
              file=sys.stderr)
        return EXIT_RANGE
    st = build_state(s, roots[args.state])
    xs = np.linspace(-s.L / 2, s.L / 2, args.samples)
    psi = evaluate(st, xs)
    psi[0] = psi[-1] = 0.0       # hard walls
    rho = np.abs(psi) ** 2
    lines = _provenance_lines(cfg) + ["x,psi_re,psi_im,density"]
    lines += [f"{float(x)!r},{float(p.real)!r},{float(p.imag)!r},{float(d)!r}"
              for x, p, d in zip(xs, psi, rho)]
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if bool(args.shift) == bool(args.flux):
        raise ConfigError("choose exactly one of --shift or --flux")
    opts = _opts_from(args)
    workers = _workers(args)
    if args.shift:
        fam = _parse_kv(args.shift)
        heights = _heights_spec(fam)
        grid = _axis_grid(fam.get("grid", [-1.0, 1.0, 201]))
        table = sweep_shift(fam["L"], int(fam["M"]), heights, grid,
                            args.kmax, opts, workers)
    else:
        fam = _parse_kv(args.flux)
        M = int(fam["M"])
        L = fam.get("L", M + 1)
        grid = _axis_grid(fam.get("grid", [0.0, (M + 1) / 2, 201]))
        table = sweep_flux(L, M, fam["h_min"], fam["h_max"], grid,
                           args.kmax, opts, workers)
    cfg = RunConfig("sweep", {"shift": args.shift, "flux": args.flux},
                    _echo_options(args), args.output, args.format)
    table.provenance["config"] = json.loads(_provenance_lines(cfg)[0][9:])
    import io
    buf = io.StringIO()
    table.to_json(buf) if cfg.fmt == "json" else table.to_csv(buf)
    _emit(cfg, buf.getvalue())
    return EXIT_OK


def _heights_spec(fam: dict):
    if "h" in fam:
        h = fam["h"]
        if isinstance(h, list):
            return {"alternating": h}
        return h
    if "seed" in fam:
        return {"random": {"h_min": fam["h_min"], "h_max": fam["h_max"],
                           "seed": int(fam["seed"])}}
    raise ConfigError("shift family needs h=... (value or colon list) "
                      "or h_min/h_max/seed for random heights")


def _axis_grid(spec) -> np.ndarray:
    if not isinstance(spec, list) or len(spec) != 3:
        raise ConfigError(f"grid must be lo:hi:n, got {spec!r}")
    lo, hi, n = spec
    return np.linspace(float(lo), float(hi), int(n))


def _cmd_chern(args) -> int:
    kv = _parse_kv(args.cell)
    a = float(kv["a"])
    hts = kv["h"] if isinstance(kv["h"], list) else [kv["h"]]
    pos = [a * j / len(hts) for j in range(len(hts))]
    nq, nd = (int(v) for v in args.grid.lower().split("x"))
    cell = UnitCell(a=a, positions=np.array(pos), heights=np.array(hts, float))
    grid = build_berry_grid(cell, args.band, nq, nd, args.nx)
    options = {"band": args.band, "grid": [nq, nd], "nx": args.nx}
    cfg = RunConfig("chern", {"cell": kv}, options, args.output, "json")
    obj = {"band": args.band, "chern": grid.chern, "grid": [nq, nd],
           "min_overlap": grid.min_overlap,
           "provenance": {"config": json.loads(_provenance_lines(cfg)[0][9:]),
                          "version": __version__}}
    _emit(cfg, json.dumps(obj, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = _instance_config(args)
    s = scatterer_set_from_config(inst)
    options = {"m": args.m, "grid_n": args.grid_n}
    cfg = RunConfig("verify", inst, options, args.output, "text")
    err = compare(s, args.m, args.grid_n)
    lines = _provenance_lines(cfg)
    lines.append(f"states={args.m} grid_n={args.grid_n} max_rel_error={err!r}")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _add_instance_flags(p: argparse.ArgumentParser):
    p.add_argument("--box", help="empty box: L=<length>")
    p.add_argument("--uniform", help="L=..,M=..,h=..,delta=..")
    p.add_argument("--modulated", help="L=..,M=..,h_min=..,h_max=..,phi=..")
    p.add_argument("--random", help="L=..,M=..,h_min=..,h_max=..,seed=..[,delta=..]")
    p.add_argument("--config", help="path to a JSON instance file")


def _add_solver_flags(p: argparse.ArgumentParser, kmax_required=True):
    p.add_argument("--kmax", type=float, required=kmax_required)
    p.add_argument("--q-factor", dest="q_factor", type=float)
    p.add_argument("--tol-rel", dest="tol_rel", type=float)
    p.add_argument("--tol-sep", dest="tol_sep", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kp",
        description="Exact delta-comb-in-a-box solver: spectra, states, "
                    "band topology, figure datasets.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="quasimomentum roots and energies")
    _add_instance_flags(p)
    _add_solver_flags(p)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("wavefunction", help="density samples of one state")
    _add_instance_flags(p)
    _add_solver_flags(p)
    p.add_argument("--state", type=int, required=True, help="0-based index")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=_cmd_wavefunction)

    p = sub.add_parser("sweep", help="shift or flux sweep dataset")
    p.add_argument("--shift", help="L=..,M=..,h=..[,grid=lo:hi:n] "
                                   "(h may be a colon list; or h_min/h_max/seed)")
    p.add_argument("--flux", help="M=..,h_min=..,h_max=..[,L=..][,grid=lo:hi:n]")
    _add_solver_flags(p)
    p.add_argument("--workers", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("chern", help="Chern number of one band")
    p.add_argument("--cell", required=True,
                   help="a=..,h=.. (colon list places equidistant scatterers)")
    p.add_argument("--band", type=int, required=True)
    p.add_argument("--grid", default="32x32")
    p.add_argument("--nx", type=int, default=256)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_chern)

    p = sub.add_parser("verify", help="compare against the grid oracle")
    _add_instance_flags(p)
    p.add_argument("--m", type=int, default=12, help="number of states")
    p.add_argument("--grid-n", dest="grid_n", type=int, default=20000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModelError, json.JSONDecodeError, FileNotFoundError,
            KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SOLVER_ERRORS as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
