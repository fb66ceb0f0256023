import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqhm.dynamics import integrate_trajectory
from cqhm.eigensystem import BASE, Eigenstate, FamilyParams, eigenvalue, equilibria, wavefunction
from cqhm.invariance import (
    Decomposition,
    catalog,
    lookup,
    map_from_base,
    map_to_base,
    verify_invariance,
    wavefunction_by_series,
    wavefunction_deviation,
)

from conftest import H1, H2, H3, H4, H5, H6


def base_period(n, x1):
    return integrate_trajectory(Eigenstate(BASE, n), x1, 10).period


def test_catalog_constants():
    got = {e.name: e.params for e in catalog()}
    assert list(got) == ["H1", "H2", "H3", "H4", "H5", "H6"]
    assert got == {"H1": H1, "H2": H2, "H3": H3, "H4": H4, "H5": H5, "H6": H6}
    assert lookup("h6").params == FamilyParams(2, 2, 0.5)
    with pytest.raises(KeyError):
        lookup("H7")


def test_map_examples():
    assert map_to_base(0.3 - 2j, H1) == 0.3 - 2j
    assert map_to_base(1 - 0.5j, H2) == 1
    assert map_to_base(-0.5, H6) == 1
    x1 = 0.7 + 0.2j
    assert map_from_base(x1, H2) == pytest.approx(x1 - 0.5j, abs=1e-15)
    assert map_from_base(x1, H5) == pytest.approx(cmath.exp(-0.5j * math.pi) * x1 - 0.5, abs=1e-15)
    assert map_from_base(x1, H6) == pytest.approx(x1 / 2 - 1, abs=1e-15)


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.floats(-math.pi, math.pi), finite, finite, finite, finite)
def test_map_round_trip(log_mag, angle, br, bi, zr, zi):
    a = 10**log_mag * cmath.exp(1j * angle)
    p = FamilyParams(a, complex(br, bi), 0)
    z = complex(zr, zi)
    back = map_to_base(map_from_base(z, p), p)
    assert abs(back - z) <= 1e-14 * max(abs(z), abs(p.b), 1e-300) * 4


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_wavefunction_invariance(entry, n, rng):
    xs = rng.uniform(-2, 2, 100) + 1j * rng.uniform(-2, 2, 100)
    assert wavefunction_deviation(entry, n, xs) <= 1e-12


def test_series_path_matches_recurrence_on_base(rng):
    xs = rng.normal(size=20) + 1j * rng.normal(size=20)
    for n in range(6):
        s = Eigenstate(BASE, n)
        np.testing.assert_allclose(wavefunction_by_series(s, xs), wavefunction(s, xs), rtol=1e-12)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_eigenvalue_shift(entry, n):
    shift = eigenvalue(Eigenstate(entry.params, n)) - eigenvalue(Eigenstate(BASE, n))
    assert shift == entry.params.c


@pytest.mark.parametrize("name, angle, mag, shift, extra", [
    ("H2", 0.0, 1.0, 0.5j, None),
    ("H3", 0.0, 1.0, -0.5 + 0.5j, 0.25j),
    ("H4", math.pi / 2, 1.0, 0, None),
])
def test_verify_examples(name, angle, mag, shift, extra):
    rep = verify_invariance(lookup(name), 0, 1, 2 * math.pi)
    assert rep.max_trajectory_deviation <= 1e-8
    d = rep.decomposition
    assert d.angle == pytest.approx(angle, abs=1e-15)
    assert d.magnification == pytest.approx(mag)
    assert d.shift == shift
    assert rep.eigenvalue_shift_checked
    if extra is not None:
        assert rep.eigenvalue_shift == extra
    assert rep.compared_samples > 10


@pytest.mark.parametrize("n, x1", [(0, 1.0), (1, 3.0), (1, 1.2)])
def test_verify_all_members(entry, n, x1):
    rep = verify_invariance(entry, n, x1, base_period(n, x1), tolerance=1e-10)
    assert rep.max_trajectory_deviation <= 1e-7
    assert rep.max_wavefunction_deviation <= 1e-12
    assert rep.eigenvalue_shift_checked


def test_verifier_is_not_vacuous():
    # a deliberately wrong map shifts the reference by 1e-3, which must show up
    rep = verify_invariance(lookup("H2"), 0, 1, 2 * math.pi)
    member = integrate_trajectory(Eigenstate(H2, 0), map_from_base(1, H2), math.pi)
    wrong = integrate_trajectory(Eigenstate(FamilyParams(1, 0.5j + 1e-3, 0.125), 0),
                                 map_from_base(1, H2), math.pi)
    assert rep.max_trajectory_deviation < 1e-8
    assert abs(member.x[-1] - wrong.x[-1]) > 1e-4


@pytest.mark.parametrize("name, rotation, scale, translation", [
    ("H2", 0.0, 1.0, -0.5j),
    ("H3", 0.0, 1.0, 0.5 - 0.5j),
    ("H4", -math.pi / 2, 1.0, 0),
    ("H5", -math.pi / 2, 1.0, -0.5),
    ("H6", 0.0, 0.5, -1.0),
])
def test_decomposition_trajectory_motion(name, rotation, scale, translation):
    p = lookup(name).params
    d = Decomposition.of(p)
    assert d.magnification * cmath.exp(1j * d.angle) == pytest.approx(p.a, abs=1e-15)
    assert d.trajectory_rotation == pytest.approx(rotation, abs=1e-15)
    assert d.trajectory_scale == pytest.approx(scale)
    assert d.trajectory_translation == pytest.approx(translation, abs=1e-15)
    z = 0.4 - 1.3j
    moved = d.trajectory_scale * cmath.exp(1j * d.trajectory_rotation) * z + d.trajectory_translation
    assert moved == pytest.approx(map_from_base(z, p), abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_equilibrium_transport(entry, n):
    member = equilibria(Eigenstate(entry.params, n))
    mapped = [map_from_base(z, entry.params) for z in equilibria(Eigenstate(BASE, n))]
    assert len(member) == len(mapped)
    for z in mapped:
        assert min(abs(z - w) for w in member) <= 1e-9


def test_h5_equilibria():
    eqs = equilibria(Eigenstate(H5, 1))
    want = [-0.5 - 1j, -0.5 + 1j]
    for z in want:
        assert min(abs(z - w) for w in eqs) <= 1e-9


@pytest.mark.parametrize("name", ["H4", "H5"])
def test_negative_equivalent_mass(name):
    e = lookup(name)
    assert e.params.equivalent_mass == -1
    if name == "H4":
        assert "negative" in e.symmetry_class


def test_report_as_dict_serialisable():
    import json
    rep = verify_invariance(lookup("H6"), 1, 3, base_period(1, 3))
    d = json.loads(json.dumps(rep.as_dict()))
    assert d["name"] == "H6" and d["decomposition"]["trajectory_scale"] == 0.5
