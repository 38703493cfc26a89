"""The zeta-family of meromorphic connection forms on the 4-punctured sphere.

With ``a(z) = -(4/3) z^3/(z^4-1) + A/z`` the connection form is
``xi = [[a, 1/zeta + B z^2], [G/(z^4-1) + zeta H/(z^2 (z^4-1)), -a]] dz``
with ``H = A + A^2`` and ``B = -(A^2 + A/3 - 2/9)/G``.  Regular singular
points sit at the fourth roots of unity; z = 0 and z = infinity are
apparent once the two constraints hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import DegenerateG, PoleEvaluation, ZeroZeta
from .linalg import Mat2, as_complex

POLES = (1 + 0j, 1j, -1 + 0j, -1j)
APPARENT_POINTS = (0j, math.inf)
POLE_GUARD = 1e-9
G_GUARD = 1e-12


def pole(k: int) -> complex:
    """p_k = i^(k-1) for k = 1..4."""
    if k not in (1, 2, 3, 4):
        raise ValueError(f"puncture index must be 1..4, got {k}")
    return POLES[k - 1]


def constraint_H(A):
    return A + A * A


def constraint_B(A, G):
    third = Fraction(1, 3) if isinstance(A, (int, Fraction)) else 1 / 3
    return -(-third + A + (third - A) ** 2) / G


@dataclass(frozen=True)
class PotentialParams:
    zeta: complex
    A: complex
    G: complex
    B: complex
    H: complex

    def with_overrides(self, **kw) -> "PotentialParams":
        """Copy with B and/or H replaced (for falsification probes)."""
        return replace(self, **{k: as_complex(v, k) for k, v in kw.items()})

    @property
    def constraint_defect(self) -> float:
        return max(abs(self.H - constraint_H(self.A)),
                   abs(self.B - constraint_B(self.A, self.G)))

    def xi_entries(self, z: complex) -> tuple:
        """Entries (x11, x12, x21, x22) of the dz-coefficient, no guards."""
        z2 = z * z
        q = z2 * z2 - 1
        a = -(4 / 3) * z2 * z / q + self.A / z
        return (a, 1 / self.zeta + self.B * z2,
                self.G / q + self.zeta * self.H / (z2 * q), -a)

    def xi_entries_w(self, w: complex) -> tuple:
        """Entries of the dw-coefficient in the chart w = 1/z."""
        w2 = w * w
        r = 1 - w2 * w2
        a = (4 / 3) / (w * r) - self.A / w
        return (a, -1 / (self.zeta * w2) - self.B / (w2 * w2),
                -self.G * w2 / r - self.zeta * self.H * w2 * w2 / r, -a)


def close_params(zeta, A, G) -> PotentialParams:
    zeta = as_complex(zeta, "zeta")
    A = as_complex(A, "A")
    G = as_complex(G, "G")
    if zeta == 0:
        raise ZeroZeta("zeta must be nonzero")
    if abs(G) <= G_GUARD:
        raise DegenerateG(f"|G| = {abs(G):.3e} <= {G_GUARD}")
    return PotentialParams(zeta, A, G, constraint_B(A, G), constraint_H(A))


def _guard(z, points, what):
    for p in points:
        if abs(z - p) <= POLE_GUARD:
            raise PoleEvaluation(f"{what} = {z!r} within {POLE_GUARD} of pole {p!r}")


def eval_xi(p: PotentialParams, z) -> Mat2:
    z = as_complex(z, "z")
    _guard(z, POLES + (0j,), "z")
    return Mat2(*p.xi_entries(z))


def eval_xi_at_infinity(p: PotentialParams, w) -> Mat2:
    w = as_complex(w, "w")
    _guard(w, POLES + (0j,), "w")
    return Mat2(*p.xi_entries_w(w))


def residue_matrix(p: PotentialParams, k: int) -> Mat2:
    """Residue at p_k from the partial fractions of each entry.

    z^3/(z^4-1) has residue 1/4 at every simple root, and 1/(z^4-1) has
    residue 1/(4 p^3).
    """
    pk = pole(k)
    third = 1 / 3
    lower = (p.G + p.zeta * p.H / pk ** 2) / (4 * pk ** 3)
    return Mat2(-third, 0, lower, third)


def residue_at_zero(p: PotentialParams) -> Mat2:
    # lower-left is -zeta H/z^2 - G + O(z^2): no 1/z term
    return Mat2.diag(p.A, -p.A)


def residue_at_infinity(p: PotentialParams) -> Mat2:
    # coefficient of dw/w in the w-chart; off-diagonals are O(w^2) or pure poles of even order
    c = 4 / 3 - p.A
    return Mat2.diag(c, -c)


def sum_of_residues_check(p: PotentialParams) -> float:
    total = residue_at_zero(p) + residue_at_infinity(p)
    for k in range(1, 5):
        total = total + residue_matrix(p, k)
    return total.norm()
