"""Physicists' Hermite polynomials at complex arguments.

Evaluation uses the forward three-term recurrence

    H_0 = 1,  H_1 = 2z,  H_{k+1} = 2z H_k - 2k H_{k-1},

which is stable over the range this package works in (n <= 32, |z| of a
few units).  All functions accept a Python scalar or a numpy array for ``z``.
"""
import numpy as np

MAX_ORDER = 32


def _check_order(n):
    if int(n) != n or n < 0:
        raise ValueError(f"Hermite order must be a non-negative integer, got {n!r}")
    return int(n)


def hermite_pair(n, z):
    """Return ``(H_n(z), H_{n-1}(z))``; the second entry is 0 for n = 0."""
    n = _check_order(n)
    if n == 0:
        return 1.0 + 0.0 * z, 0.0 * z
    prev = 1.0 + 0.0 * z
    cur = 2.0 * z
    for k in range(1, n):
        prev, cur = cur, 2.0 * z * cur - 2.0 * k * prev
    return cur, prev


def hermite(n, z):
    """Hermite polynomial H_n(z)."""
    return hermite_pair(n, z)[0]


def hermite_derivative(n, z):
    """First derivative H_n'(z) = 2n H_{n-1}(z)."""
    n = _check_order(n)
    if n == 0:
        return 0.0 * z
    return 2.0 * n * hermite(n - 1, z)


def hermite_second_derivative(n, z):
    """Second derivative H_n''(z) = 4n(n-1) H_{n-2}(z)."""
    n = _check_order(n)
    if n < 2:
        return 0.0 * z
    return 4.0 * n * (n - 1) * hermite(n - 2, z)


def hermite_coefficients(n):
    """Power-basis coefficients of H_n, lowest degree first (exact integers)."""
    n = _check_order(n)
    prev = [1]
    if n == 0:
        return np.array(prev, dtype=float)
    cur = [0, 2]
    for k in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return np.array(cur, dtype=float)
