"""Simultaneous (Aberth–Ehrlich) iteration for all roots of a polynomial."""
import cmath
import math

import numpy as np

from .errors import RootFindingFailure


def _horner(coeffs, z):
    # coeffs highest degree first; returns p(z), p'(z)
    p = coeffs[0]
    dp = 0.0
    for c in coeffs[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth(coeffs, tol=1e-12, max_iter=100):
    """Return all complex roots of ``sum(coeffs[k] * z**(deg-k))``.

    ``coeffs`` is ordered highest degree first, as in ``numpy.roots``.
    Iteration stops when every Aberth correction is below
    ``tol * max(1, |z|)``; failure to reach that within ``max_iter``
    sweeps raises :class:`RootFindingFailure`.
    """
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError("zero polynomial has no isolated roots")
    deg = len(coeffs) - 1
    if deg == 0:
        return np.array([], dtype=complex)
    lead = coeffs[0]
    coeffs = [c / lead for c in coeffs]
    if deg == 1:
        return np.array([-coeffs[1]], dtype=complex)

    # Fujiwara bound circle, rotated off the axes so symmetric root sets do
    # not trap the iteration.
    radius = 2.0 * max(abs(c) ** (1.0 / k) for k, c in enumerate(coeffs[1:], 1)) + 1e-3
    z = [radius * cmath.exp(1j * (2.0 * math.pi * k / deg + 0.4)) for k in range(deg)]

    for _ in range(max_iter):
        worst = 0.0
        for k in range(deg):
            p, dp = _horner(coeffs, z[k])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else p
            s = sum(1.0 / (z[k] - z[j]) for j in range(deg) if j != k)
            denom = 1.0 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] -= w
            worst = max(worst, abs(w) / max(1.0, abs(z[k])))
        if worst <= tol:
            return np.array(z, dtype=complex)
    raise RootFindingFailure(
        f"Aberth iteration did not converge in {max_iter} sweeps (last correction {worst:.3g})"
    )
