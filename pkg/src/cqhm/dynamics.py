"""Eigen-trajectories, closed-orbit detection and the n=0 -> n=1 transition."""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from . import kernel
from ._kernel_py import eigen_field
from .eigensystem import (
    EnergyBreakdown,
    Eigenstate,
    equilibria,
    potential,
    quantum_potential,
    velocity,
)
from .errors import ClassificationError, EquilibriumStart, NodeApproach, TransitionPole
from .integrate import H_MIN, dopri45, dopri_step, winding_number

DEFAULT_TOLERANCE = 1e-10
CLOSURE_RTOL = 1e-8
DIRECTION_TOL = 1e-6
EQUILIBRIUM_TOL = 1e-10
POLE_GUARD = 1e-8
WINDING_SLACK = 1e-3


@dataclass
class Trajectory:
    """Accepted integrator samples plus closed-orbit metadata.

    ``windings`` maps an index into ``equilibria`` to the signed number of
    turns made around it during one period.
    """

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    state: Eigenstate | None = None
    closed: bool = False
    period: float | None = None
    closing_point: complex | None = None
    closure_error: float | None = None
    equilibria: list = field(default_factory=list)
    windings: dict = field(default_factory=dict)
    classification: str | None = None

    def __len__(self):
        return len(self.t)

    def one_period(self):
        """Samples over [0, period] with the refined closing point appended."""
        if not self.closed:
            raise ValueError("trajectory is not closed")
        k = int(np.searchsorted(self.t, self.period, side="left"))
        t = np.append(self.t[:k], self.period)
        x = np.append(self.x[:k], self.closing_point)
        return t, x

    def metadata(self):
        return {
            "closed": self.closed,
            "period": self.period,
            "closure_error": self.closure_error,
            "classification": self.classification,
            "equilibria": [[z.real, z.imag] for z in self.equilibria],
            "windings": {str(k): w for k, w in self.windings.items()},
            "samples": len(self.t),
        }


def _propagate(f, x, v, tau):
    # single Dormand-Prince step from an accepted sample; tau never exceeds
    # the accepted step, so the local error stays within tolerance
    if tau == 0.0:
        return x
    return dopri_step(f, 0.0, x, v, tau)[0]


def detect_closure(traj, f, closure_rtol=CLOSURE_RTOL, direction_tol=DIRECTION_TOL):
    """Find the first return to the start point.

    Crossings of the line through x0 orthogonal to the initial velocity are
    scanned in the direction of motion; the crossing time is refined by
    root-finding on a one-step propagation from the preceding sample.
    Returns ``(period, closing_point, distance)`` or ``None``.
    """
    x0, v0 = traj.x[0], traj.v[0]
    if v0 == 0:
        return None
    side = ((traj.x - x0) * np.conj(v0)).real
    tol = closure_rtol * max(1.0, abs(x0))
    for k in np.nonzero((side[1:-1] < 0.0) & (side[2:] >= 0.0))[0] + 1:
        xk, vk = traj.x[k], traj.v[k]
        h = traj.t[k + 1] - traj.t[k]

        def g(tau):
            return ((_propagate(f, xk, vk, tau) - x0) * np.conj(v0)).real

        lo, hi = g(0.0), g(h)
        if lo >= 0.0 or hi < 0.0:
            continue
        tau = h if hi == 0.0 else brentq(g, 0.0, h, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        xc = _propagate(f, xk, vk, tau)
        dist = abs(xc - x0)
        if dist > tol:
            continue
        vc = f(0.0, xc)
        if abs(np.angle(vc / v0)) > direction_tol:
            continue
        return float(traj.t[k] + tau), complex(xc), float(dist)
    return None


def classify_first_excited(state, eqs, windings):
    """Omega_1 / Omega_2 / Omega_3 label for an n=1 closed orbit."""
    if state.n != 1 or len(eqs) != 2:
        return None
    by_base = {}
    for i, z in enumerate(eqs):
        u = state.a * z + state.b
        by_base[-1 if u.real < 0 else 1] = windings.get(i, 0)
    w_minus, w_plus = by_base.get(-1, 0), by_base.get(1, 0)
    if w_minus != 0 and w_plus == 0:
        return "Omega1"
    if w_minus == 0 and w_plus != 0:
        return "Omega2"
    if w_minus != 0 and w_plus != 0 and (w_minus > 0) == (w_plus > 0):
        return "Omega3"
    return None


def integrate_trajectory(state, x0, t_end, tolerance=DEFAULT_TOLERANCE):
    """Integrate dx/dt = velocity(state, x) from x(0) = x0 up to t_end.

    Closed orbits are detected on the fly; for them the period, winding
    numbers about every equilibrium, and (for n = 1) the orbit family are
    filled in.
    """
    x0 = complex(x0)
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    velocity(state, x0)  # NodeSingularity at a node
    eqs = equilibria(state)
    for z in eqs:
        if abs(x0 - z) <= EQUILIBRIUM_TOL:
            raise EquilibriumStart(f"x0={x0!r} is an equilibrium of the field")
    # A node is a square-root branch point of the orbit: steps shrink near it
    # but the error estimate can still pass it.  Treat a step shorter than the
    # requested tolerance (in units of the unit-frequency period) as entering
    # the node neighbourhood.
    t, x, v = kernel.eigen_flow(state.a, state.b, state.n, x0, float(t_end), tolerance, tolerance,
                                h_min=max(H_MIN, tolerance), guard=POLE_GUARD)
    traj = Trajectory(t=t, x=x, v=v, state=state, equilibria=eqs)
    f = eigen_field(state.a, state.b, state.n, POLE_GUARD)
    found = detect_closure(traj, f)
    if found is None:
        return traj
    traj.closed = True
    traj.period, traj.closing_point, traj.closure_error = found
    _, path = traj.one_period()
    for i, z in enumerate(eqs):
        w = winding_number(path, z)
        r = round(w)
        if abs(w - r) > WINDING_SLACK:
            raise ClassificationError(f"winding {w:.6f} about {z!r} is not an integer")
        traj.windings[i] = int(r)
    traj.classification = classify_first_excited(state, eqs, traj.windings)
    return traj


def energy_from_initial_conditions(x0, v0, state):
    """Total energy for an arbitrary assigned initial position and velocity."""
    x0, v0 = complex(x0), complex(v0)
    m_eq = state.params.equivalent_mass
    u = state.a * x0 + state.b
    return EnergyBreakdown(
        kinetic=0.5 * m_eq * v0 * v0,
        applied=potential(u) + state.c,
        quantum=quantum_potential(state, x0),
    )


# --- n=0 -> n=1 transition ---------------------------------------------------

E_INITIAL = 0.5
E_FINAL = 1.5


@dataclass(frozen=True)
class TransitionSample:
    t: float
    x: complex
    energy: complex


def _middle_denominator(t, x):
    return 2.0 * t * x - t + 1.0


def transition_velocity(t, x, guard=0.0):
    """Piecewise guidance field of the interpolating transition wavefunction."""
    x = complex(x)
    if t <= 0:
        return 1j * x
    if t < 1:
        d = _middle_denominator(t, x)
        if abs(d) <= guard or d == 0:
            raise TransitionPole(f"transition field pole at t={t:.17g}, x={x!r}", t=t, x=x)
        return 1j * x - 2j * t / d
    if abs(x) <= guard or x == 0:
        raise TransitionPole(f"transition field pole at t={t:.17g}, x={x!r}", t=t, x=x)
    return 1j * (x * x - 1.0) / x


def transition_energy(t, x):
    """Closed-form total energy along the transition."""
    if t <= 0:
        return complex(E_INITIAL)
    if t >= 1:
        return complex(E_FINAL)
    x = complex(x)
    d = _middle_denominator(t, x)
    if d == 0:
        raise TransitionPole(f"transition energy pole at t={t:.17g}, x={x!r}", t=t, x=x)
    return 0.5 * (6.0 * t * x - t + 1.0) / d


def _segment_field(branch):
    def f(t, x):
        if branch == 0:
            return 1j * x
        if branch == 1:
            d = _middle_denominator(t, x)
            if abs(d) < POLE_GUARD:
                raise TransitionPole(f"transition field pole near t={t:.17g}", t=t, x=x)
            return 1j * x - 2j * t / d
        if abs(x) < POLE_GUARD:
            raise TransitionPole(f"transition field pole near t={t:.17g}", t=t, x=x)
        return 1j * (x * x - 1.0) / x

    return f


def integrate_transition(x0, t_start, t_end, tolerance=DEFAULT_TOLERANCE):
    """Integrate the transition field across the branch points t = 0 and t = 1.

    Integration restarts exactly at each branch point from the position the
    previous branch reached.
    """
    if not t_end > t_start:
        raise ValueError("t_start must be less than t_end")
    cuts = [t_start] + [c for c in (0.0, 1.0) if t_start < c < t_end] + [t_end]
    x = complex(x0)
    samples = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        branch = 0 if hi <= 0 else (1 if hi <= 1 and lo >= 0 else 2)
        ts, xs, _ = dopri45(_segment_field(branch), lo, x, hi, tolerance, tolerance)
        start = 1 if samples else 0
        for t, z in zip(ts[start:], xs[start:]):
            samples.append(TransitionSample(float(t), complex(z), transition_energy(float(t), z)))
        x = complex(xs[-1])
    return samples
