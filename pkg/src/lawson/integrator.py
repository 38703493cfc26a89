"""Adaptive Dormand-Prince 5(4) for the linear matrix ODE Y' = C(t) Y.

The state is a 2x2 complex matrix held as a flat 4-tuple.  Step size is
governed by a PI controller on the embedded error estimate; no randomness
and no wall-clock dependence, so results are bit-reproducible.

Error control is per unit step: on the unit parameter interval a step of
length h is accepted when its scaled local error is at most h, so the
accumulated local error over a piece stays within the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StepLimitExceeded

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)

SAFETY = 0.9
# err/h scales like h^4 for the embedded 4th-order estimate
ORDER = 4
ALPHA = 0.7 / ORDER
BETA = 0.4 / ORDER
FAC_MIN, FAC_MAX = 0.2, 5.0
EPS = 2.220446049250313e-16
ROUND_SLACK = 10 * EPS


@dataclass(frozen=True)
class ToleranceBudget:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 2_000_000

    def __post_init__(self):
        if not self.rel_tol >= 1e-13:
            raise ValueError(f"rel_tol must be >= 1e-13, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")


def _mv(c, y):
    c11, c12, c21, c22 = c
    y11, y12, y21, y22 = y
    return (c11 * y11 + c12 * y21, c11 * y12 + c12 * y22,
            c21 * y11 + c22 * y21, c21 * y12 + c22 * y22)


def _fro(y):
    return math.sqrt(sum(abs(v) ** 2 for v in y))


def _initial_step(coef, y0, f0, rtol, atol):
    sc = [atol + rtol * abs(v) for v in y0]
    d0 = math.sqrt(sum((abs(v) / s) ** 2 for v, s in zip(y0, sc)) / 4)
    d1 = math.sqrt(sum((abs(v) / s) ** 2 for v, s in zip(f0, sc)) / 4)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, 1.0)
    y1 = tuple(a + h0 * b for a, b in zip(y0, f0))
    f1 = _mv(coef(h0), y1)
    d2 = math.sqrt(sum((abs(a - b) / s) ** 2 for a, b, s in zip(f1, f0, sc)) / 4) / h0
    big = max(d1, d2)
    h1 = max(1e-6, h0 * 1e-3) if big <= 1e-15 else (0.01 / big) ** (1 / 5)
    return min(100 * h0, h1, 1.0)


def integrate(coef, y0, tol: ToleranceBudget, steps_so_far=0):
    """Integrate Y' = coef(t) Y over t in [0, 1].

    ``coef(t)`` returns the coefficient matrix as a 4-tuple.  Returns
    ``(y1, err, steps)`` where ``err`` sums the norms of the accepted local
    error estimates plus a rounding term per step.
    """
    rtol, atol = tol.rel_tol, tol.abs_tol
    t = 0.0
    y = tuple(complex(v) for v in y0)
    c_now = coef(0.0)
    f = _mv(c_now, y)
    h = _initial_step(coef, y, f, rtol, atol)
    err_total = 0.0
    steps = steps_so_far
    prev_ratio = 1e-4
    rejected = False
    while t < 1.0:
        if steps >= tol.max_steps:
            raise StepLimitExceeded(f"more than {tol.max_steps} steps")
        if h < 1e-14:
            raise StepLimitExceeded(f"step size underflow at t={t:.6g}")
        last = t + h >= 1.0
        if last:
            h = 1.0 - t
        k1 = f
        y2 = tuple(a + h * A21 * b for a, b in zip(y, k1))
        k2 = _mv(coef(t + C2 * h), y2)
        y3 = tuple(a + h * (A31 * b + A32 * c) for a, b, c in zip(y, k1, k2))
        k3 = _mv(coef(t + C3 * h), y3)
        y4 = tuple(a + h * (A41 * b + A42 * c + A43 * d) for a, b, c, d in zip(y, k1, k2, k3))
        k4 = _mv(coef(t + C4 * h), y4)
        y5 = tuple(a + h * (A51 * b + A52 * c + A53 * d + A54 * e)
                   for a, b, c, d, e in zip(y, k1, k2, k3, k4))
        k5 = _mv(coef(t + C5 * h), y5)
        y6 = tuple(a + h * (A61 * b + A62 * c + A63 * d + A64 * e + A65 * g)
                   for a, b, c, d, e, g in zip(y, k1, k2, k3, k4, k5))
        c_end = coef(1.0 if last else t + h)
        k6 = _mv(c_end, y6)
        y_new = tuple(a + h * (B1 * b + B3 * d + B4 * e + B5 * g + B6 * m)
                      for a, b, d, e, g, m in zip(y, k1, k3, k4, k5, k6))
        k7 = _mv(c_end, y_new)
        err = tuple(h * (E1 * b + E3 * d + E4 * e + E5 * g + E6 * m + E7 * n)
                    for b, d, e, g, m, n in zip(k1, k3, k4, k5, k6, k7))
        # allowance per entry: h * (atol + rtol |y|), plus the rounding level
        # of the increment, below which the estimate carries no information
        ratio = max(abs(e) / (h * (atol + rtol * max(abs(a), abs(b)))
                              + ROUND_SLACK * h * max(abs(c), abs(d)))
                    for e, a, b, c, d in zip(err, y, y_new, k1, k7))
        steps += 1
        if ratio <= 1.0:
            t = 1.0 if last else t + h
            y = y_new
            f = k7
            err_total += _fro(err) + EPS * _fro(y)
            ratio = max(ratio, 1e-10)
            if rejected:
                fac = min(1.0, SAFETY * ratio ** -ALPHA * prev_ratio ** BETA)
            else:
                fac = SAFETY * ratio ** -ALPHA * prev_ratio ** BETA
            h *= min(FAC_MAX, max(FAC_MIN, fac))
            prev_ratio = ratio
            rejected = False
        else:
            h *= max(FAC_MIN, SAFETY * ratio ** (-1 / ORDER))
            rejected = True
    return y, err_total, steps
