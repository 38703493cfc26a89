"""Complex 2x2 matrices with SL(2,C) conveniences.

Entries are plain Python ``complex`` values; for 2x2 work this is faster
than numpy and keeps every operation exact-contract and side-effect free.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import NonFinite, SingularMatrix

SINGULAR_TOL = 1e-14
SPECIAL_TOL = 1e-12


def as_complex(x, name="value") -> complex:
    """Coerce to ``complex`` and reject NaN/Inf."""
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFinite(f"{name} is not finite: {z!r}")
    return z


class Mat2:
    """Immutable complex 2x2 matrix ``[[a11, a12], [a21, a22]]``."""

    __slots__ = ("a11", "a12", "a21", "a22")

    def __init__(self, a11, a12, a21, a22):
        object.__setattr__(self, "a11", complex(a11))
        object.__setattr__(self, "a12", complex(a12))
        object.__setattr__(self, "a21", complex(a21))
        object.__setattr__(self, "a22", complex(a22))

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, x, y) -> "Mat2":
        return cls(x, 0, 0, y)

    @classmethod
    def from_array(cls, m) -> "Mat2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 array, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def entries(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=complex)

    def is_finite(self) -> bool:
        return all(cmath.isfinite(e) for e in self.entries())

    @property
    def det(self) -> complex:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def trace(self) -> complex:
        return self.a11 + self.a22

    def is_special(self, tol=SPECIAL_TOL) -> bool:
        return abs(self.det - 1) <= tol

    def norm(self) -> float:
        """Frobenius norm."""
        return math.sqrt(sum(abs(e) ** 2 for e in self.entries()))

    def adjoint(self) -> "Mat2":
        return Mat2(self.a11.conjugate(), self.a21.conjugate(),
                    self.a12.conjugate(), self.a22.conjugate())

    def inv(self) -> "Mat2":
        return mat_inv(self)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(*(x + y for x, y in zip(self.entries(), other.entries())))

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(*(x - y for x, y in zip(self.entries(), other.entries())))

    def __neg__(self) -> "Mat2":
        return Mat2(*(-x for x in self.entries()))

    def scale(self, s) -> "Mat2":
        return Mat2(*(s * x for x in self.entries()))

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return mat_inv(self) ** (-n)
        out = Mat2.identity()
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"Mat2({self.a11!r}, {self.a12!r}, {self.a21!r}, {self.a22!r})"


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    return Mat2(
        x.a11 * y.a11 + x.a12 * y.a21,
        x.a11 * y.a12 + x.a12 * y.a22,
        x.a21 * y.a11 + x.a22 * y.a21,
        x.a21 * y.a12 + x.a22 * y.a22,
    )


def mat_inv(x: Mat2) -> Mat2:
    """Inverse via the adjugate; division by det is skipped for special matrices."""
    d = x.det
    if abs(d) <= SINGULAR_TOL:
        raise SingularMatrix(f"|det| = {abs(d):.3e}")
    adj = Mat2(x.a22, -x.a12, -x.a21, x.a11)
    if abs(d - 1) <= SPECIAL_TOL:
        return adj
    return adj.scale(1 / d)


def trace_dist(x: Mat2, y: Mat2) -> float:
    return abs(x.trace - y.trace)


def dist(x: Mat2, y: Mat2) -> float:
    """Frobenius distance."""
    return (x - y).norm()


def product(mats) -> Mat2:
    """Left-to-right product ``mats[0] @ mats[1] @ ...``."""
    out = Mat2.identity()
    for m in mats:
        out = out @ m
    return out


def eigenvalues(x: Mat2) -> tuple:
    """Closed-form eigenvalues, ordered by argument."""
    t = x.trace
    disc = cmath.sqrt(t * t - 4 * x.det)
    lam = ((t + disc) / 2, (t - disc) / 2)
    return tuple(sorted(lam, key=lambda z: (cmath.phase(z), abs(z))))


def _exact(m: Mat2):
    from fractions import Fraction
    return [(Fraction(e.real), Fraction(e.imag)) for e in m.entries()]


def _xmul(x, y):
    def cm(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def ca(a, b):
        return (a[0] + b[0], a[1] + b[1])

    x11, x12, x21, x22 = x
    y11, y12, y21, y22 = y
    return [ca(cm(x11, y11), cm(x12, y21)), ca(cm(x11, y12), cm(x12, y22)),
            ca(cm(x21, y11), cm(x22, y21)), ca(cm(x21, y12), cm(x22, y22))]


def _round(x) -> Mat2:
    return Mat2(*(complex(float(a), float(b)) for a, b in x))


def exact_product(mats) -> Mat2:
    """Product of the float matrices evaluated exactly, rounded once at the end.

    Used by checks such as H^3 = Id on matrices of large norm, where plain
    float64 evaluation alone contributes about ||H||^3 * eps.
    """
    mats = list(mats)
    acc = _exact(mats[0]) if mats else _exact(Mat2.identity())
    for m in mats[1:]:
        acc = _xmul(acc, _exact(m))
    return _round(acc)


def exact_det(m: Mat2) -> complex:
    (a, b), (c, d), (e, f), (g, h) = _exact(m)
    re = a * g - b * h - (c * e - d * f)
    im = a * h + b * g - (c * f + d * e)
    return complex(float(re), float(im))


def exact_conjugate(m: Mat2, s: Mat2) -> Mat2:
    """s^-1 m s evaluated exactly (inverse via adjugate / det), rounded once."""
    from fractions import Fraction
    S = _exact(s)
    (a, b), (c, d), (e, f), (g, h) = S
    det = (a * g - b * h - (c * e - d * f), a * h + b * g - (c * f + d * e))
    n = det[0] * det[0] + det[1] * det[1]
    if n == 0:
        raise SingularMatrix("conjugating matrix is singular")
    inv_det = (det[0] / n, -det[1] / n)

    def scale(z):
        return (z[0] * inv_det[0] - z[1] * inv_det[1], z[0] * inv_det[1] + z[1] * inv_det[0])

    zero = Fraction(0)
    adj = [S[3], (-S[1][0] + zero, -S[1][1] + zero), (-S[2][0] + zero, -S[2][1] + zero), S[0]]
    s_inv = [scale(z) for z in adj]
    return _round(_xmul(_xmul(s_inv, _exact(m)), S))
