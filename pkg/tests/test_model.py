import json

import numpy as np
import pytest

from kpbox import (ModelError, NonMonotonePositions, NonPositiveLength,
                   PositionOutOfBox, SplitMix64, make_scatterer_set,
                   modulated_lattice, random_heights, regions,
                   scatterer_set_from_config, scatterer_set_to_config,
                   uniform_lattice)


def test_empty_box_is_valid():
    s = make_scatterer_set(1.0, [], [])
    assert s.M == 0
    assert s.segment_lengths().tolist() == [1.0]


def test_fig3_style_instance():
    s = make_scatterer_set(11.0, np.arange(-5.0, 5.5), np.full(11, 0.4))
    assert s.M == 11
    assert s.boundaries()[0] == -5.5 and s.boundaries()[-1] == 5.5


def test_rejects_unsorted_positions():
    with pytest.raises(NonMonotonePositions):
        make_scatterer_set(1.0, [0.3, 0.1], [1.0, 1.0])
    with pytest.raises(NonMonotonePositions):
        make_scatterer_set(1.0, [0.1, 0.1], [1.0, 1.0])


def test_rejects_out_of_box_and_bad_length():
    with pytest.raises(PositionOutOfBox):
        make_scatterer_set(1.0, [0.7], [1.0])
    with pytest.raises(NonPositiveLength):
        make_scatterer_set(0.0, [], [])
    with pytest.raises(NonPositiveLength):
        make_scatterer_set(-2.0, [], [])
    with pytest.raises(ModelError):
        make_scatterer_set(1.0, [0.1], [1.0, 2.0])


def test_positions_are_immutable():
    s = make_scatterer_set(2.0, [0.0], [1.0])
    with pytest.raises(ValueError):
        s.positions[0] = 0.5


def test_regions_tile_the_box():
    s = make_scatterer_set(4.0, [-1.0, 0.5], [1.0, 2.0])
    rs = list(regions(s))
    assert [r.index for r in rs] == [1, 2, 3]
    assert rs[0].left == -2.0 and rs[-1].right == 2.0
    for a, b in zip(rs[:-1], rs[1:]):
        assert a.right == b.left


def test_uniform_lattice_fig3_positions():
    s = uniform_lattice(11.0, 11, 0.4, 0.0)
    assert s.positions[0] == pytest.approx(-5.0, abs=1e-14)
    assert s.positions[-1] == pytest.approx(5.0, abs=1e-14)
    assert np.allclose(np.diff(s.positions), 1.0, atol=1e-14)


@pytest.mark.parametrize("delta", [-1.0, -0.37, 0.0, 0.61, 1.0])
def test_uniform_lattice_spacing_is_period(delta):
    s = uniform_lattice(7.3, 9, 0.2, delta)
    assert np.allclose(np.diff(s.positions), 7.3 / 9, atol=1e-13)


def test_uniform_lattice_wall_coincidence_allowed():
    s = uniform_lattice(11.0, 11, 0.4, 1.0)
    assert s.positions[-1] == 5.5
    s = uniform_lattice(11.0, 11, 0.4, -1.0)
    assert s.positions[0] == -5.5


def test_modulated_lattice_zero_flux_gives_h_max():
    s = modulated_lattice(6.0, 5, 0.1, 1.5, 0.0)
    assert np.allclose(s.heights, 1.5, atol=1e-15)
    a = 1.0 / 6
    assert np.allclose(s.positions, -3.0 + a * np.arange(1, 6) * 6.0)


def test_modulated_heights_stay_in_range():
    for phi in np.linspace(0.0, 9.0, 57):
        s = modulated_lattice(18.0, 17, 0.1, 1.5, phi)
        assert np.all(s.heights >= 0.1 - 1e-12)
        assert np.all(s.heights <= 1.5 + 1e-12)


def test_modulated_flux_periodicity_odd_M():
    # period (M+1)/2 holds for odd M only
    for M, phi in [(7, 0.37), (11, 1.9), (17, 2.5)]:
        phi0 = (M + 1) / 2
        a = modulated_lattice(M + 1.0, M, 0.1, 1.5, phi)
        b = modulated_lattice(M + 1.0, M, 0.1, 1.5, phi + phi0)
        assert np.allclose(a.heights, b.heights, atol=1e-12)
    a = modulated_lattice(9.0, 8, 0.1, 1.5, 0.37)
    b = modulated_lattice(9.0, 8, 0.1, 1.5, 0.37 + 4.5)
    assert not np.allclose(a.heights, b.heights, atol=1e-6)


def test_random_heights_deterministic_and_bounded():
    a = random_heights(11, 0.1, 1.4, seed=123)
    b = random_heights(11, 0.1, 1.4, seed=123)
    assert a.tolist() == b.tolist()
    assert np.all((a >= 0.1) & (a <= 1.4))
    c = random_heights(11, 0.7, 0.7, seed=99)
    assert np.all(c == 0.7)
    assert not np.allclose(a, random_heights(11, 0.1, 1.4, seed=124))


def test_splitmix64_known_stream():
    # frozen reference values of the documented generator
    g = SplitMix64(0)
    assert g.next_u64() == 0xE220A8397B1DCDAF
    assert g.next_u64() == 0x6E789E6AA1B965F4
    g = SplitMix64(1234567)
    floats = [g.next_float() for _ in range(3)]
    assert all(0.0 <= u < 1.0 for u in floats)
    g2 = SplitMix64(1234567)
    assert floats == [g2.next_float() for _ in range(3)]


def test_generator_outputs_always_valid(rng):
    for _ in range(25):
        M = int(rng.integers(1, 14))
        L = float(rng.uniform(0.5, 20))
        delta = float(rng.uniform(-1, 1))
        for s in (uniform_lattice(L, M, float(rng.uniform(-0.5, 2)), delta),
                  modulated_lattice(L, M, -0.5, 0.5, float(rng.uniform(0, 9)))):
            assert np.all(np.diff(s.positions) > 0)
            assert s.positions[0] >= -L / 2 - 1e-12
            assert s.positions[-1] <= L / 2 + 1e-12


def test_config_round_trip_explicit():
    s = make_scatterer_set(3.0, [-1.0, 0.25], [0.5, -0.25])
    cfg = scatterer_set_to_config(s)
    t = scatterer_set_from_config(json.loads(json.dumps(cfg)))
    assert t.L == s.L
    assert np.array_equal(t.positions, s.positions)
    assert np.array_equal(t.heights, s.heights)


def test_config_shorthands():
    u = scatterer_set_from_config({"uniform": {"L": 11, "M": 11, "h": 0.4,
                                               "delta": 0.5}})
    assert np.array_equal(u.positions, uniform_lattice(11, 11, 0.4, 0.5).positions)
    m = scatterer_set_from_config({"modulated": {"L": 6, "M": 5, "h_min": 0.1,
                                                 "h_max": 1.5, "phi": 2.0}})
    assert np.array_equal(m.heights, modulated_lattice(6, 5, 0.1, 1.5, 2.0).heights)
    r = scatterer_set_from_config({"random": {"L": 6, "M": 5, "h_min": 0.1,
                                              "h_max": 1.4, "seed": 7}})
    assert np.array_equal(r.heights, random_heights(5, 0.1, 1.4, 7))


@pytest.mark.parametrize("cfg", [
    {}, {"uniform": {"L": 1}}, {"scatterers": []}, 42,
    {"random": {"L": 1, "M": 2, "h_min": 0, "h_max": 1}},
])
def test_config_malformed(cfg):
    with pytest.raises(ModelError):
        scatterer_set_from_config(cfg)
