"""Pure-Python eigen-trajectory kernel (fallback for ``_kernel``)."""
from .errors import NodeApproach
from .integrate import H_MIN, MAX_STEPS, dopri45


def eigen_field(a, b, n, guard):
    """Return f(t, x) = -i (H_n'(u)/H_n(u) - u) / a with u = a x + b."""
    a = complex(a)
    b = complex(b)
    two_n = 2.0 * n

    def f(t, x):
        u = a * x + b
        if n == 0:
            hn, hp = 1.0, 0.0
        else:
            hp, hn = 1.0, 2.0 * u
            for k in range(1, n):
                hp, hn = hn, 2.0 * u * hn - 2.0 * k * hp
        if abs(hn) < guard:
            raise NodeApproach(f"trajectory reached the node neighbourhood at x={x!r}")
        return -1j * (two_n * hp / hn - u) / a

    return f


def eigen_flow(a, b, n, x0, t_end, rtol, atol, h_min=H_MIN, guard=1e-8, max_steps=MAX_STEPS):
    return dopri45(eigen_field(a, b, n, guard), 0.0, x0, t_end, rtol, atol, h_min, max_steps)
