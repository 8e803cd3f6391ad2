import collections
import io
import json

import numpy as np
import pytest

from kpbox import (SolverOptions, UnitCell, bulk_gaps, find_roots,
                   random_heights, resolve_heights, sweep_flux, sweep_shift,
                   uniform_lattice)


def rows_by_param(table):
    out = collections.defaultdict(list)
    for r in table.rows:
        out[r.param_value].append(r)
    return out


def test_resolve_heights_forms():
    assert np.allclose(resolve_heights(0.4, 3), [0.4, 0.4, 0.4])
    assert np.allclose(resolve_heights({"alternating": [0.4, 1.4]}, 3),
                       [0.4, 1.4, 0.4])
    r = resolve_heights({"random": {"h_min": 0.1, "h_max": 1.4, "seed": 5}}, 4)
    assert np.array_equal(r, random_heights(4, 0.1, 1.4, 5))
    assert np.allclose(resolve_heights([1.0, 2.0], 2), [1.0, 2.0])
    with pytest.raises(ValueError):
        resolve_heights([1.0, 2.0], 3)


def test_grid_validation():
    with pytest.raises(ValueError):
        sweep_shift(4.0, 3, 0.4, [-1.5, 0.0], 4.0)
    with pytest.raises(ValueError):
        sweep_flux(4.0, 3, 0.1, 1.5, [0.0, 2.5], 4.0)   # phi0 = 2


def test_box_limit_rows():
    t = sweep_shift(2.0, 3, 0.0, [0.0], 5.0)
    ks = [r.k for r in t.rows]
    assert np.allclose(ks, np.pi * np.arange(1, 4) / 2.0, rtol=1e-12)
    assert [r.energy for r in t.rows] == [k * k / 2 for k in ks]
    assert [r.state_index for r in t.rows] == [0, 1, 2]


def test_rows_sorted_by_param_then_k():
    t = sweep_shift(4.0, 3, 0.5, [-0.5, 0.0, 0.5], 5.0)
    seen = [(r.param_value, r.k) for r in t.rows]
    assert seen == sorted(seen)


def test_shift_mirror_symmetry():
    grid = np.linspace(-0.8, 0.8, 9)
    t = sweep_shift(6.0, 5, 0.7, grid, 5.0)
    by = rows_by_param(t)
    for i in range(4):
        a = np.array([r.k for r in by[grid[i]]])
        b = np.array([r.k for r in by[grid[-1 - i]]])
        assert len(a) == len(b)
        assert np.max(np.abs(a - b)) < 1e-9


def test_flux_periodicity_odd_M():
    # the flux sweep itself only accepts [0, phi0]; periodicity is checked
    # against a directly built lattice one period up
    from kpbox import modulated_lattice
    M, L, phi0 = 5, 6.0, 3.0
    a = sweep_flux(L, M, 0.1, 1.5, [0.7], 6.0)
    s = modulated_lattice(L, M, 0.1, 1.5, 0.7 + phi0)
    kb = np.array([r.k for r in find_roots(s, 6.0)])
    ka = np.array([r.k for r in a.rows])
    assert np.max(np.abs(ka - kb)) < 1e-9


def test_flat_state_rows_pinned():
    M, L = 5, 6.0
    flats = np.pi * (M + 1) * np.arange(1, 3) / L
    t = sweep_flux(L, M, 0.1, 2.1, np.linspace(0, 3, 7), 2.2 * np.pi)
    for rows in rows_by_param(t).values():
        ks = np.array([r.k for r in rows])
        for kf in flats:
            assert np.min(np.abs(ks - kf)) < 1e-9


def test_alternating_heights_open_a_subgap():
    # superlattice cell gains a gap inside what is band 1 for equal heights
    sup = UnitCell(a=2.0, positions=np.array([0.0, 1.0]),
                   heights=np.array([0.4, 1.4]))
    uni = UnitCell(a=1.0, positions=np.array([0.0]), heights=np.array([0.4]))
    sub = bulk_gaps(sup, 3)[0]
    assert 1.5 < sub[0] < sub[1] < 2.4
    assert all(not (g[0] < 2.0 < g[1]) for g in bulk_gaps(uni, 3))
    # finite alternating comb: 4 states below the sub-gap, edge branches in it
    hts = resolve_heights({"alternating": [0.4, 1.4]}, 11)
    s = uniform_lattice(11.0, 11, 0.0, 0.0, heights=hts)
    E = np.array([r.E for r in find_roots(s, 7.0)])
    assert int(np.sum(E <= sub[0])) == 4
    assert int(np.sum((E > sub[0]) & (E < sub[1]))) == 2


def test_worker_count_does_not_change_output():
    grid = np.linspace(-1, 1, 7)
    a = sweep_shift(6.0, 5, 0.4, grid, 5.0, workers=1)
    b = sweep_shift(6.0, 5, 0.4, grid, 5.0, workers=3)
    assert a.csv_text() == b.csv_text()


def test_csv_deterministic_and_parseable():
    t = sweep_shift(4.0, 3, 0.6, [0.0, 0.5], 4.0)
    text = t.csv_text()
    assert text == sweep_shift(4.0, 3, 0.6, [0.0, 0.5], 4.0).csv_text()
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert lines[0] == "param,param_value,state_index,k,energy,edge_weight"
    cells = lines[1].split(",")
    assert cells[0] == "delta"
    assert float(cells[3]) == t.rows[0].k   # round-trip exact


def test_json_output_with_provenance():
    t = sweep_flux(4.0, 3, 0.1, 1.0, [0.0, 1.0], 4.0)
    buf = io.StringIO()
    t.to_json(buf)
    obj = json.loads(buf.getvalue())
    assert obj["param"] == "phi"
    assert obj["provenance"]["command"] == "sweep_flux"
    assert obj["provenance"]["family"]["M"] == 3
    assert len(obj["rows"]) == len(t.rows)


def test_random_heights_sweep_reproducible():
    spec = {"random": {"h_min": 0.1, "h_max": 1.4, "seed": 3}}
    a = sweep_shift(6.0, 5, spec, [0.3], 4.0)
    b = sweep_shift(6.0, 5, spec, [0.3], 4.0)
    assert a.csv_text() == b.csv_text()


def test_solver_options_echoed():
    opts = SolverOptions(q_factor=10.0)
    t = sweep_shift(4.0, 3, 0.4, [0.0], 4.0, opts)
    assert t.provenance["options"]["q_factor"] == 10.0
    assert "version" in t.provenance
