"""Named family members and the trajectory/eigenfunction invariance check."""
from dataclasses import dataclass
import cmath

import numpy as np
from numpy.polynomial import hermite as npherm

from .dynamics import integrate_trajectory
from .eigensystem import BASE, Eigenstate, FamilyParams, eigenvalue, wavefunction
from .integrate import hermite_interpolate


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: FamilyParams
    symmetry_class: str


_CATALOG = (
    CatalogEntry("H1", FamilyParams(1, 0, 0), "Hermitian"),
    CatalogEntry("H2", FamilyParams(1, 0.5j, 0.125), "PT-symmetric"),
    CatalogEntry("H3", FamilyParams(1, -0.5 + 0.5j, 0.25j), "non-PT-symmetric"),
    CatalogEntry("H4", FamilyParams(1j, 0, 0), "negative-mass"),
    CatalogEntry("H5", FamilyParams(1j, 0.5j, 0.5), "rotation-shift"),
    CatalogEntry("H6", FamilyParams(2, 2, 0.5), "stretch"),
)


def catalog():
    """The six oscillator variants, in order H1..H6."""
    return list(_CATALOG)


def lookup(name):
    for entry in _CATALOG:
        if entry.name.upper() == name.upper():
            return entry
    raise KeyError(f"unknown catalog member {name!r}; expected one of H1..H6")


def map_to_base(x, params):
    """x1 = a x + b."""
    return params.a * x + params.b


def map_from_base(x1, params):
    """x = (x1 - b) / a."""
    return (x1 - params.b) / params.a


@dataclass(frozen=True)
class Decomposition:
    """Polar form of the map factor: a = magnification * exp(i angle), shift = b.

    The ``trajectory_*`` properties describe the inverse map applied to base
    trajectories, x = x1 / a - b / a.
    """

    angle: float
    magnification: float
    shift: complex

    @classmethod
    def of(cls, params):
        return cls(cmath.phase(params.a), abs(params.a), params.b)

    @property
    def trajectory_rotation(self):
        return -self.angle

    @property
    def trajectory_scale(self):
        return 1.0 / self.magnification

    @property
    def trajectory_translation(self):
        return -self.shift / (self.magnification * cmath.exp(1j * self.angle))


@dataclass
class InvarianceReport:
    name: str
    n: int
    max_wavefunction_deviation: float
    eigenvalue_shift: complex
    eigenvalue_shift_checked: bool
    max_trajectory_deviation: float
    decomposition: Decomposition
    compared_samples: int

    def as_dict(self):
        d = self.decomposition
        return {
            "name": self.name,
            "n": self.n,
            "max_wavefunction_deviation": self.max_wavefunction_deviation,
            "eigenvalue_shift": [self.eigenvalue_shift.real, self.eigenvalue_shift.imag],
            "eigenvalue_shift_checked": self.eigenvalue_shift_checked,
            "max_trajectory_deviation": self.max_trajectory_deviation,
            "compared_samples": self.compared_samples,
            "decomposition": {
                "angle": d.angle,
                "magnification": d.magnification,
                "shift": [d.shift.real, d.shift.imag],
                "trajectory_rotation": d.trajectory_rotation,
                "trajectory_scale": d.trajectory_scale,
                "trajectory_translation": [d.trajectory_translation.real, d.trajectory_translation.imag],
            },
        }


def wavefunction_by_series(state, x):
    """Eigenfunction via numpy's Hermite series, independent of the recurrence."""
    u = state.a * np.asarray(x) + state.b
    coef = np.zeros(state.n + 1)
    coef[-1] = 1.0
    return npherm.hermval(u, coef) * np.exp(-0.5 * u * u)


def wavefunction_deviation(entry, n, xs):
    """Max relative gap between member (series path) and base-composed-with-map (recurrence path)."""
    member = Eigenstate(entry.params, n)
    base = Eigenstate(BASE, n)
    xs = np.asarray(xs, dtype=complex)
    lhs = wavefunction_by_series(member, xs)
    rhs = wavefunction(base, map_to_base(xs, entry.params))
    scale = np.maximum(1.0, np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs) / scale))


def verify_invariance(entry, n, x1_start, t_end, tolerance=1e-10, wavefunction_points=None):
    """Integrate base and member trajectories independently and compare them.

    The member starts at the preimage of ``x1_start`` and follows its own
    field; the base trajectory is mapped back and interpolated (cubic
    Hermite, denser set) onto the sparser set's times.
    """
    params = entry.params
    base = integrate_trajectory(Eigenstate(BASE, n), x1_start, t_end, tolerance)
    member = integrate_trajectory(Eigenstate(params, n), map_from_base(complex(x1_start), params),
                                  t_end, tolerance)
    base_x = map_from_base(base.x, params)
    base_v = base.v / params.a
    if len(base.t) >= len(member.t):
        ref = hermite_interpolate(base.t, base_x, base_v, member.t)
        dev = np.abs(member.x - ref)
        count = len(member.t)
    else:
        ref = hermite_interpolate(member.t, member.x, member.v, base.t)
        dev = np.abs(base_x - ref)
        count = len(base.t)

    if wavefunction_points is None:
        wavefunction_points = member.x
    shift = eigenvalue(Eigenstate(params, n)) - eigenvalue(Eigenstate(BASE, n))
    return InvarianceReport(
        name=entry.name,
        n=n,
        max_wavefunction_deviation=wavefunction_deviation(entry, n, wavefunction_points),
        eigenvalue_shift=shift,
        eigenvalue_shift_checked=abs(shift - params.c) <= 1e-12,
        max_trajectory_deviation=float(dev.max()),
        decomposition=Decomposition.of(params),
        compared_samples=count,
    )
