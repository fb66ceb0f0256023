"""Contour integrals along closed eigen-trajectories.

Two independent routes: chord-trapezoid line integrals over the orbit's own
samples, with every step subdivided and Romberg-extrapolated, and a residue oracle that sums small-circle
integrals around the enclosed poles.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .eigensystem import Eigenstate, equilibria, momentum, nodes, velocity
from ._kernel_py import eigen_field
from .dynamics import POLE_GUARD
from .errors import NodeApproach, NodeSingularity, NotClosed, UnsupportedField
from .integrate import dopri_step, winding_number

RESIDUE_RADIUS = 1e-3
RESIDUE_POINTS = 256
RESIDUE_AGREEMENT = 1e-9
NEAR_POLE = 1e-6


@dataclass
class ContourResult:
    value: complex
    method: str
    enclosed_poles: list = field(default_factory=list)
    error: float = 0.0

    def as_dict(self):
        return {
            "value": [self.value.real, self.value.imag],
            "method": self.method,
            "error": self.error,
            "enclosed_poles": [
                {"location": [z.real, z.imag], "winding": w} for z, w in self.enclosed_poles
            ],
        }


def _closed_path(trajectory):
    if not trajectory.closed:
        raise NotClosed("contour integrals need a detected closed orbit")
    _, path = trajectory.one_period()
    if path[-1] != path[0]:
        path = np.append(path, path[0])
    return path


def _subdivided_path(trajectory, state, parts):
    """Closed sample polygon with every integrator step cut into ``parts`` equal times.

    Interior points come from one-step propagation out of the accepted
    sample that opens the step; the closing hop back onto x0 is a chord.
    """
    coarse = _closed_path(trajectory)
    t, _ = trajectory.one_period()
    f = eigen_field(state.a, state.b, state.n, POLE_GUARD)
    out = np.empty(parts * (len(coarse) - 1) + 1, dtype=complex)
    out[0::parts] = coarse
    for k in range(len(t) - 1):
        h = t[k + 1] - t[k]
        for j in range(1, parts):
            out[parts * k + j] = dopri_step(f, 0.0, trajectory.x[k], trajectory.v[k], j * h / parts)[0]
    if len(coarse) > len(t):
        k = len(coarse) - 2
        for j in range(1, parts):
            out[parts * k + j] = coarse[k] + (coarse[k + 1] - coarse[k]) * j / parts
    return out


def _trapezoid(values, path):
    return complex(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(path)))


def _line_integral(integrand, trajectory, state):
    """Romberg table over step subdivisions 1, 2, 4 of the chord trapezoid rule."""
    path = _subdivided_path(trajectory, state, 4)
    fvals = np.asarray(integrand(path))
    t1 = _trapezoid(fvals[0::4], path[0::4])
    t2 = _trapezoid(fvals[0::2], path[0::2])
    t4 = _trapezoid(fvals, path)
    r2, r4 = (4.0 * t2 - t1) / 3.0, (4.0 * t4 - t2) / 3.0
    value = (16.0 * r4 - r2) / 15.0
    return value, abs(value - r4)


def _windings(path, poles):
    return [(complex(z), int(round(winding_number(path, z)))) for z in poles]


def action_integral(trajectory, state):
    """J = closed integral of p dx along one period of the orbit."""
    value, err = _line_integral(lambda z: momentum(state, z), trajectory, state)
    path = _closed_path(trajectory)
    poles = [pw for pw in _windings(path, nodes(state)) if pw[1] != 0]
    return ContourResult(value, "numeric", poles, err)


def period_integral(trajectory, state):
    """T = closed integral of dx / velocity along one period of the orbit."""

    def integrand(z):
        try:
            v = np.asarray(velocity(state, z))
        except NodeSingularity as exc:
            raise NodeApproach(str(exc)) from exc
        if np.any(np.abs(v) < NEAR_POLE):
            raise NodeApproach("orbit passes too close to a pole of 1/velocity")
        return 1.0 / v

    value, err = _line_integral(integrand, trajectory, state)
    path = _closed_path(trajectory)
    poles = [pw for pw in _windings(path, equilibria(state)) if pw[1] != 0]
    return ContourResult(value, "numeric", poles, err)


def _circle_integral(f, center, radius, points):
    theta = 2.0 * np.pi * np.arange(points) / points
    z = center + radius * np.exp(1j * theta)
    dz = 1j * radius * np.exp(1j * theta)
    return complex(np.mean(f(z) * dz) * 2.0 * np.pi)


def residue_oracle(state, windings, kind, radius=RESIDUE_RADIUS, points=RESIDUE_POINTS):
    """2 pi i * sum(winding * residue), residues from small-circle integrals.

    ``windings`` maps pole locations to winding numbers.  For ``kind="action"``
    the integrand is p (poles at wavefunction nodes); for ``kind="period"``
    it is 1/velocity (poles at equilibria).
    """
    if not isinstance(state, Eigenstate):
        raise UnsupportedField(f"no rational field known for {type(state).__name__}")
    if kind == "action":
        def f(z):
            return momentum(state, z)
    elif kind == "period":
        def f(z):
            return 1.0 / velocity(state, z)
    else:
        raise UnsupportedField(f"unknown integrand kind {kind!r}")

    total = 0j
    spread = 0.0
    enclosed = []
    for pole, w in dict(windings).items():
        pole = complex(pole)
        if w == 0:
            continue
        full = _circle_integral(f, pole, radius, points)
        half = _circle_integral(f, pole, radius / 2, points)
        spread = max(spread, abs(full - half))
        if abs(full - half) > RESIDUE_AGREEMENT * max(1.0, abs(full)):
            raise UnsupportedField(
                f"small-circle integrals around {pole!r} disagree ({full!r} vs {half!r}); "
                "the point is not an isolated simple pole"
            )
        total += w * full
        enclosed.append((pole, int(w)))
    return ContourResult(total, "residue", enclosed, spread)


def oracle_for(trajectory, state, kind):
    """Residue oracle using the orbit's own winding numbers about the poles."""
    path = _closed_path(trajectory)
    poles = nodes(state) if kind == "action" else equilibria(state)
    return residue_oracle(state, dict(_windings(path, poles)), kind)
