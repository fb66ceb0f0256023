import cmath
import math

import numpy as np
import pytest
import sympy as sp

from cqhm._kernel_py import eigen_field
from cqhm.dynamics import (
    classify_first_excited,
    energy_from_initial_conditions,
    integrate_trajectory,
    integrate_transition,
    transition_energy,
    transition_velocity,
)
from cqhm.eigensystem import Eigenstate, eigenvalue, intrinsic_energy, velocity
from cqhm.errors import EquilibriumStart, NodeApproach, NodeSingularity, TransitionPole
from cqhm.integrate import dopri45, fixed_step

from conftest import H1, H2, H6

TWO_PI = 2 * math.pi


def ground():
    return Eigenstate(H1, 0)


def first():
    return Eigenstate(H1, 1)


# --- eigen-trajectories -----------------------------------------------------

def test_ground_state_circle():
    tr = integrate_trajectory(ground(), 1, TWO_PI)
    assert tr.closed
    assert abs(tr.period - TWO_PI) <= 1e-6
    assert np.max(np.abs(np.abs(tr.x) - 1)) <= 1e-8
    np.testing.assert_allclose(tr.x, np.exp(1j * tr.t), atol=1e-8)
    assert np.all(np.diff(tr.t) > 0)


@pytest.mark.parametrize("x0", [0.5, 2 - 1j, -3j])
def test_ground_state_circle_any_radius(x0):
    tr = integrate_trajectory(ground(), x0, 7)
    assert np.max(np.abs(np.abs(tr.x) - abs(x0))) <= 1e-8 * max(1, abs(x0))
    assert abs(tr.period - TWO_PI) <= 1e-6


def exact_first_excited(x0, t):
    """x(t)^2 = 1 + (x0^2 - 1) e^{2it}, branch followed continuously from x0."""
    sq = 1 + (x0 * x0 - 1) * np.exp(2j * t)
    out = np.sqrt(sq.astype(complex))
    prev = x0
    for k in range(len(out)):
        if abs(out[k] - prev) > abs(-out[k] - prev):
            out[k] = -out[k]
        prev = out[k]
    return out


@pytest.mark.parametrize(
    "x0, label, period",
    [(1.2, "Omega2", math.pi), (3.0, "Omega3", TWO_PI), (-1.2, "Omega1", math.pi), (-0.6 + 0.1j, "Omega1", math.pi)],
)
def test_first_excited_orbits(x0, label, period):
    tr = integrate_trajectory(first(), x0, 10)
    assert tr.closed
    assert tr.classification == label
    assert abs(tr.period - period) <= 1e-4
    np.testing.assert_allclose(tr.x, exact_first_excited(x0, tr.t), atol=1e-8)


def test_windings_signs():
    tr = integrate_trajectory(first(), 3, 10)
    assert tr.windings == {0: 1, 1: 1}
    tr = integrate_trajectory(first(), 1.2, 10)
    assert tr.windings == {0: 0, 1: 1}


def test_classify_labels():
    s = first()
    eqs = [-1 + 0j, 1 + 0j]
    assert classify_first_excited(s, eqs, {0: -1, 1: 0}) == "Omega1"
    assert classify_first_excited(s, eqs, {0: 0, 1: 1}) == "Omega2"
    assert classify_first_excited(s, eqs, {0: -1, 1: -1}) == "Omega3"
    assert classify_first_excited(s, eqs, {0: 1, 1: -1}) is None
    assert classify_first_excited(ground(), [0j], {0: 1}) is None


def test_open_trajectory_when_too_short():
    tr = integrate_trajectory(first(), 3, 2)
    assert not tr.closed and tr.period is None and tr.windings == {}


@pytest.mark.parametrize("params, n, x0", [(H1, 0, 0.4 + 1j), (H1, 1, 3), (H1, 2, 0.3 + 0.2j), (H2, 1, 1.2),
                                           (H6, 2, 0.5), (H6, 1, 0.1)])
def test_energy_conserved_along_flow(params, n, x0):
    state = Eigenstate(params, n)
    tr = integrate_trajectory(state, x0, 10, 1e-10)
    total = np.asarray(intrinsic_energy(state, tr.x).total)
    assert np.max(np.abs(total - eigenvalue(state))) <= 1e-8


def test_start_errors():
    with pytest.raises(EquilibriumStart):
        integrate_trajectory(first(), 1 + 1e-12, 5)
    with pytest.raises(NodeSingularity):
        integrate_trajectory(first(), 0, 5)
    with pytest.raises(ValueError):
        integrate_trajectory(first(), 3, -1)


@pytest.mark.parametrize("tol", [1e-6, 1e-10, 1e-13])
def test_node_approach(tol):
    # x^2 - 1 = i e^{2it} reaches x = 0 at t = pi/4
    x0 = cmath.sqrt(1 + 1j)
    with pytest.raises(NodeApproach):
        integrate_trajectory(first(), x0, 2, tol)


def test_close_pass_by_node_still_closes():
    # |x0^2 - 1| slightly above 1: the orbit just encloses the node
    tr = integrate_trajectory(first(), cmath.sqrt(1 + 1.001j), 10)
    assert tr.closed and tr.classification == "Omega3"
    assert abs(tr.period - TWO_PI) <= 1e-4
    assert np.min(np.abs(tr.x)) < 0.05


def test_fifth_order_convergence():
    f = eigen_field(1, 0, 0, 1e-8)
    errs = [abs(fixed_step(f, 0.0, 1.0, 1.0, m) - cmath.exp(1j)) for m in (8, 16, 32)]
    for coarse, fine in zip(errs, errs[1:]):
        assert 2**5 * 0.8 < coarse / fine < 2**5 * 1.25


def test_closure_error_decreases_with_tolerance():
    closures = []
    for tol in (1e-6, 1e-7, 1e-8, 1e-9, 1e-10):
        tr = integrate_trajectory(ground(), 1, 7, tol)
        closures.append(abs(tr.x[-1] - cmath.exp(1j * tr.t[-1])))
    assert all(b < a for a, b in zip(closures, closures[1:]))
    slope = np.polyfit(np.log10([1e-6, 1e-10]), np.log10([closures[0], closures[-1]]), 1)[0]
    assert 0.7 < slope < 1.4


def test_dopri45_generic_nonautonomous():
    t, x, v = dopri45(lambda t, x: 2 * t * x, 0.0, 1.0, 1.5, 1e-10, 1e-10)
    assert abs(x[-1] - math.exp(1.5**2)) <= 1e-8 * math.exp(1.5**2)
    assert t[-1] == 1.5


# --- transition -------------------------------------------------------------

def test_transition_velocity_examples():
    assert transition_velocity(-1, 2 + 1j) == -1 + 2j
    assert transition_velocity(0.5, 1) == pytest.approx(1j / 3)
    assert transition_velocity(2, 1) == 0


def test_transition_energy_examples():
    assert transition_energy(0, 7 + 3j) == 0.5
    assert transition_energy(1, 7 + 3j) == 1.5
    assert transition_energy(0.5, 1) == pytest.approx(7 / 6)


def test_transition_poles():
    with pytest.raises(TransitionPole):
        transition_velocity(0.5, -0.5)
    with pytest.raises(TransitionPole):
        transition_velocity(3, 0)
    with pytest.raises(TransitionPole) as info:
        integrate_transition(-0.5 + 1e-9, 0.5, 0.9)
    assert info.value.t == pytest.approx(0.5)


def _symbolic_transition():
    t, x = sp.symbols("t x")
    psi = (1 - t) * sp.exp(-x**2 / 2) + 2 * t * x * sp.exp(-x**2 / 2)
    lp = sp.diff(sp.log(psi), x)
    p = -sp.I * lp
    q = -sp.diff(lp, x) / 2
    return sp.lambdify((t, x), p, "mpmath"), sp.lambdify((t, x), p**2 / 2 + x**2 / 2 + q, "mpmath")


def test_transition_closed_form_against_wavefunction():
    p_f, e_f = _symbolic_transition()
    for t, x in [(0.5, 1), (0.2, 0.3 + 0.4j), (0.9, -1 + 0.2j)]:
        assert transition_velocity(t, x) == pytest.approx(complex(p_f(t, x)), rel=1e-13)
        assert transition_energy(t, x) == pytest.approx(complex(e_f(t, x)), rel=1e-12)


def test_transition_eigen_segments():
    before = integrate_transition(1, -TWO_PI, 0)
    assert all(s.energy == 0.5 for s in before)
    assert max(abs(abs(s.x) - 1) for s in before) <= 1e-8
    mid = integrate_transition(1, 0, 1)
    x_end = mid[-1].x
    after = integrate_transition(x_end, 1, 1 + TWO_PI)
    assert all(s.energy == 1.5 for s in after)
    xs = np.array([s.x for s in after])
    ts = np.array([s.t for s in after]) - 1
    np.testing.assert_allclose(xs, exact_first_excited(x_end, ts), atol=1e-8)


def test_transition_path_properties():
    samples = integrate_transition(1, 0, 1)
    assert samples[0].energy == 0.5 and samples[-1].energy == 1.5
    interior = [s for s in samples if 0 < s.t < 1]
    assert max(abs(s.energy.imag) for s in interior) > 1e-3
    ts = [s.t for s in samples]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_transition_continuity_across_branches():
    whole = integrate_transition(1, -1, 2)
    pieces = integrate_transition(1, -1, 0)
    pieces += integrate_transition(pieces[-1].x, 0, 1)[1:]
    pieces += integrate_transition(pieces[-1].x, 1, 2)[1:]
    assert [s.t for s in whole] == [s.t for s in pieces]
    assert max(abs(a.x - b.x) for a, b in zip(whole, pieces)) == 0
    for boundary in (0.0, 1.0):
        k = [s.t for s in whole].index(boundary)
        assert abs(whole[k + 1].x - whole[k].x) < 0.1


def test_energy_from_initial_conditions():
    s = ground()
    assert energy_from_initial_conditions(1, 1j, s).total == pytest.approx(0.5)
    assert energy_from_initial_conditions(1, 2j, s).total == pytest.approx(-1)
    assert energy_from_initial_conditions(1 + 1j, 0, s).total == pytest.approx(0.5 + 1j)


@pytest.mark.parametrize("params, n", [(H1, 1), (H2, 2), (H6, 1)])
def test_energy_from_eigen_velocity_is_eigenvalue(params, n):
    state = Eigenstate(params, n)
    for x0 in (0.3 + 0.5j, -1.1 + 0.2j):
        e = energy_from_initial_conditions(x0, velocity(state, x0), state).total
        assert e == pytest.approx(eigenvalue(state), abs=1e-12)
        off = energy_from_initial_conditions(x0, velocity(state, x0) + 0.1, state).total
        assert abs(off - eigenvalue(state)) > 1e-3
