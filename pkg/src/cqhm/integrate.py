"""Adaptive Dormand–Prince 5(4) integration of scalar complex ODEs.

The step controller is the PI controller of Hairer's DOPRI5 (exponents
0.17 / 0.04, safety 0.9, growth clipped to [0.2, 10]).  The error norm for
the scalar complex state is ``|err| / (atol + rtol * max(|x_n|, |x_n+1|))``.

The same algorithm is mirrored, stage for stage, by the compiled kernel in
``_kernel.pyx``; keep the two in sync.
"""
import math

import numpy as np

from .errors import IntegrationError, NodeApproach

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0
ALPHA = 0.17
BETA = 0.04
H_MIN = 1e-14
MAX_STEPS = 1_000_000


def dopri_step(f, t, x, k1, h):
    """One Dormand–Prince step; returns (x_new, k7 = f(t+h, x_new), err)."""
    k2 = f(t + C2 * h, x + h * A21 * k1)
    k3 = f(t + C3 * h, x + h * (A31 * k1 + A32 * k2))
    k4 = f(t + C4 * h, x + h * (A41 * k1 + A42 * k2 + A43 * k3))
    k5 = f(t + C5 * h, x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
    k6 = f(t + h, x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
    x_new = x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
    k7 = f(t + h, x_new)
    err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
    return x_new, k7, err


def initial_step(f, t0, x0, f0, direction, rtol, atol):
    sk = atol + rtol * abs(x0)
    d0 = abs(x0) / sk
    d1 = abs(f0) / sk
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    f1 = f(t0 + direction * h0, x0 + direction * h0 * f0)
    d2 = abs(f1 - f0) / sk / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1)


def dopri45(f, t0, x0, t_end, rtol=1e-10, atol=1e-10, h_min=H_MIN, max_steps=MAX_STEPS):
    """Integrate dx/dt = f(t, x) from t0 to t_end (t_end > t0).

    Returns ``(t, x, v)`` arrays of accepted samples, with ``v = f(t, x)``
    at every sample.  Pole errors raised by ``f`` propagate unchanged;
    a step size collapsing below ``h_min`` raises :class:`NodeApproach`.
    """
    t = float(t0)
    x = complex(x0)
    t_end = float(t_end)
    if not t_end > t:
        raise ValueError("t_end must exceed t0")
    k1 = complex(f(t, x))
    ts, xs, vs = [t], [x], [k1]
    h = initial_step(f, t, x, k1, 1.0, rtol, atol)
    err_old = 1e-4
    rejected = False
    steps = 0
    while t < t_end:
        if steps >= max_steps:
            raise IntegrationError(f"step budget {max_steps} exhausted at t={t:.6g}")
        steps += 1
        last = t + h >= t_end
        if last:
            h = t_end - t
        x_new, k7, err_vec = dopri_step(f, t, x, k1, h)
        scale = atol + rtol * max(abs(x), abs(x_new))
        err = abs(err_vec) / scale
        if err <= 1.0:
            err = max(err, 1e-10)
            fac = SAFETY * err ** -ALPHA * err_old ** BETA
            fac = min(FAC_MAX, max(FAC_MIN, fac))
            if rejected:
                fac = min(fac, 1.0)
            t = t_end if last else t + h
            x, k1 = x_new, k7
            ts.append(t)
            xs.append(x)
            vs.append(k1)
            err_old = err
            rejected = False
            h *= fac
        else:
            fac = max(FAC_MIN, SAFETY * err ** -ALPHA)
            h *= fac
            rejected = True
        if h < h_min and t < t_end:
            raise NodeApproach(f"step size collapsed below {h_min:g} at t={t:.6g}, x={x!r}")
    return np.array(ts), np.array(xs, dtype=complex), np.array(vs, dtype=complex)


def fixed_step(f, t0, x0, t_end, steps):
    """Non-adaptive integration with ``steps`` equal Dormand–Prince steps."""
    t = float(t0)
    x = complex(x0)
    h = (float(t_end) - t) / steps
    k1 = f(t, x)
    for i in range(steps):
        x, k1, _ = dopri_step(f, t, x, k1, h)
        t = t0 + (i + 1) * h
    return x


def hermite_interpolate(t, x, v, t_query):
    """Cubic Hermite interpolation of samples (t, x, dx/dt = v) at ``t_query``."""
    t = np.asarray(t)
    tq = np.atleast_1d(np.asarray(t_query, dtype=float))
    idx = np.clip(np.searchsorted(t, tq, side="right") - 1, 0, len(t) - 2)
    t0, t1 = t[idx], t[idx + 1]
    h = t1 - t0
    s = (tq - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    out = h00 * x[idx] + h10 * h * v[idx] + h01 * x[idx + 1] + h11 * h * v[idx + 1]
    if np.ndim(t_query) == 0:
        return complex(out[0])
    return out


def winding_number(path, point):
    """Total turning of arg(path - point) divided by 2 pi (not rounded)."""
    rel = np.asarray(path) - point
    steps = np.angle(rel[1:] / rel[:-1])
    return float(np.sum(steps) / (2.0 * math.pi))
