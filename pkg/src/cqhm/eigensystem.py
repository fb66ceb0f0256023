"""Eigenstates of the linear-mapping family of harmonic oscillators.

A family member is the Hamiltonian

    H = p^2 / (2 a^2) + V(a x + b) + c,     V(u) = u^2 / 2,

with complex constants ``a != 0``, ``b`` and ``c`` (natural units).  Its
eigenfunctions are the oscillator eigenfunctions composed with the map
``u = a x + b``, and every field below is evaluated through that map.
Derivatives are analytic (Hermite ratios); nothing here differentiates
numerically.
"""
from dataclasses import dataclass
import cmath
import math

import numpy as np

from .errors import NodeSingularity
from .roots import aberth
from .special import (
    hermite_coefficients,
    hermite_pair,
    hermite_second_derivative,
)

NODE_RTOL = 1e-12


def potential(u):
    """Base potential of the family (harmonic oscillator)."""
    return 0.5 * u * u


def _as_complex(value, name):
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return z


def _out(value):
    if np.ndim(value) == 0:
        return complex(value)
    return value


@dataclass(frozen=True)
class FamilyParams:
    """The complex triple (a, b, c) selecting one member of the family."""

    a: complex = 1.0
    b: complex = 0.0
    c: complex = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _as_complex(getattr(self, name), name))
        if self.a == 0:
            raise ValueError("a must be nonzero for the map x1 = a x + b to be invertible")

    @property
    def equivalent_mass(self):
        return self.a * self.a


BASE = FamilyParams(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class Eigenstate:
    params: FamilyParams
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"quantum number must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def a(self):
        return self.params.a

    @property
    def b(self):
        return self.params.b

    @property
    def c(self):
        return self.params.c

    def base(self):
        """The same quantum number on the undeformed oscillator."""
        return Eigenstate(BASE, self.n)


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: complex
    applied: complex
    quantum: complex

    @property
    def total(self):
        return self.kinetic + self.applied + self.quantum


def _mapped(state, x):
    return state.a * np.asarray(x) + state.b if np.ndim(x) else state.a * complex(x) + state.b


def _log_derivatives(state, x):
    """Return (u, L, dL) with L = d ln psi1/du and dL = dL/du at u = a x + b."""
    u = _mapped(state, x)
    h, h_prev = hermite_pair(state.n, u)
    scale = np.maximum(1.0, np.abs(u) ** state.n)
    if np.any(np.abs(h) <= NODE_RTOL * scale):
        raise NodeSingularity(f"x={x!r} is a node of the n={state.n} eigenfunction")
    dh = 2.0 * state.n * h_prev
    d2h = hermite_second_derivative(state.n, u)
    ratio = dh / h
    return u, ratio - u, d2h / h - ratio * ratio - 1.0


def wavefunction(state, x):
    """psi(x) = H_n(a x + b) exp(-(a x + b)^2 / 2), normalization constant 1."""
    u = _mapped(state, x)
    h, _ = hermite_pair(state.n, u)
    return _out(h * np.exp(-0.5 * u * u))


def momentum(state, x):
    """Canonical momentum p = -i d ln psi / dx."""
    _, L, _ = _log_derivatives(state, x)
    return _out(-1j * state.a * L)


def velocity(state, x):
    """Guidance velocity dx/dt = p / m_eq with m_eq = a^2."""
    return _out(momentum(state, x) / state.params.equivalent_mass)


def quantum_potential(state, x):
    """Q = -(1 / (2 m_eq)) d^2 ln psi / dx^2."""
    _, _, dL = _log_derivatives(state, x)
    second = state.a * state.a * dL
    return _out(-second / (2.0 * state.params.equivalent_mass))


def eigenvalue(state):
    return complex(state.n + 0.5) + state.c


def intrinsic_energy(state, x):
    """Kinetic, applied and quantum parts of the intrinsic Hamiltonian at x."""
    u, L, dL = _log_derivatives(state, x)
    m_eq = state.params.equivalent_mass
    p = -1j * state.a * L
    q = -(state.a * state.a * dL) / (2.0 * m_eq)
    return EnergyBreakdown(
        kinetic=_out(p * p / (2.0 * m_eq)),
        applied=_out(potential(u) + state.c),
        quantum=_out(q),
    )


def schrodinger_residual(state, x):
    """(1/(2 a^2)) psi'' + (E - V(a x + b) - c) psi, with psi'' from Hermite derivatives."""
    u = _mapped(state, x)
    h, h_prev = hermite_pair(state.n, u)
    dh = 2.0 * state.n * h_prev
    d2h = hermite_second_derivative(state.n, u)
    g = np.exp(-0.5 * u * u)
    a2 = state.a * state.a
    psi = h * g
    psi_xx = a2 * g * (d2h - 2.0 * u * dh + (u * u - 1.0) * h)
    return _out(psi_xx / (2.0 * a2) + (eigenvalue(state) - potential(u) - state.c) * psi)


def equilibrium_polynomial(n):
    """Coefficients (highest first) of 2n H_{n-1}(u) - u H_n(u) in u."""
    poly = np.zeros(n + 2)
    poly[1:] -= hermite_coefficients(n)
    if n > 0:
        poly[: n] += 2.0 * n * hermite_coefficients(n - 1)
    return poly[::-1]


def equilibria(state, tol=1e-12, max_iter=100):
    """All zeros of the velocity field, sorted by (real, imag)."""
    roots_u = aberth(equilibrium_polynomial(state.n), tol=tol, max_iter=max_iter)
    xs = [(u - state.b) / state.a for u in roots_u]
    xs.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return [complex(z) for z in xs]


def nodes(state, tol=1e-12, max_iter=100):
    """Zeros of the eigenfunction (poles of the momentum field), sorted."""
    if state.n == 0:
        return []
    roots_u = aberth(hermite_coefficients(state.n)[::-1], tol=tol, max_iter=max_iter)
    xs = [(u - state.b) / state.a for u in roots_u]
    xs.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return [complex(z) for z in xs]


def angle_and_magnification(a):
    """Polar decomposition of a nonzero complex factor, angle in (-pi, pi]."""
    return cmath.phase(a), abs(a)
