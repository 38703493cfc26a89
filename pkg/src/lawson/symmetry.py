"""Symmetry checks: pointwise identities of the connection form and
conjugation-invariant consequences for the generator monodromies."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import MismatchedParams
from .linalg import Mat2
from .monodromy import generators
from .potential import POLES, PotentialParams, close_params

FORM_TOL = 1e-12
TRACE_TOL = 1e-7
SAMPLE_SEED = 20240611
SAMPLE_CLEARANCE = 0.2

D_PHI2 = Mat2.diag(1j, -1j)
G_TAU = Mat2.diag(cmath.exp(1j * cmath.pi / 4), cmath.exp(-1j * cmath.pi / 4))


@dataclass(frozen=True)
class SymmetryReport:
    name: str
    max_defect: float
    sample_count: int
    tolerance: float

    @property
    def pass_(self) -> bool:
        return self.max_defect < self.tolerance

    def to_dict(self):
        return {"name": self.name, "max_defect": self.max_defect,
                "sample_count": self.sample_count, "tolerance": self.tolerance,
                "pass": self.pass_}


def sample_points(samples: int, seed: int = SAMPLE_SEED) -> list:
    """Points in 0.2 <= |z| <= 2 at distance >= 0.2 from every puncture.

    Rejection sampling with a fixed seed, so reports are reproducible.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < samples:
        r = rng.uniform(SAMPLE_CLEARANCE, 2.0)
        z = complex(r * cmath.exp(1j * rng.uniform(0, 2 * np.pi)))
        if min(abs(z - q) for q in POLES) >= SAMPLE_CLEARANCE:
            out.append(z)
    return out


def check_phi2_form(p: PotentialParams, samples: int = 100, xi=None) -> SymmetryReport:
    """-xi(-z) against D xi(z) D^-1 with D = diag(i, -i).

    ``xi`` may replace ``p.xi_entries`` (used to feed deliberately broken forms).
    """
    f = xi or p.xi_entries
    worst = 0.0
    for z in sample_points(samples):
        lhs = Mat2(*f(-z)).scale(-1)
        rhs = D_PHI2 @ Mat2(*f(z)) @ D_PHI2.inv()
        worst = max(worst, (lhs - rhs).norm())
    return SymmetryReport("phi2_form", worst, samples, FORM_TOL)


def check_tau_form(pA: PotentialParams, pB: PotentialParams, samples: int = 100,
                   xi_a=None, xi_b=None, strict: bool = True) -> SymmetryReport:
    """i xi_zeta(iz) against g^-1 xi_{-zeta}(z) g with g = diag(e^{i pi/4}, e^{-i pi/4}).

    With ``strict`` the two parameter sets must carry the same (A, G) and
    opposite zeta; pass ``strict=False`` to measure a deliberately uneven pair.
    """
    if strict and (pA.A != pB.A or pA.G != pB.G):
        raise MismatchedParams("tau check needs the same (A, G) at zeta and -zeta")
    if abs(pA.zeta + pB.zeta) > 1e-15 * max(1.0, abs(pA.zeta)):
        raise MismatchedParams("second parameter set must sit at -zeta")
    fa = xi_a or pA.xi_entries
    fb = xi_b or pB.xi_entries
    g_inv = G_TAU.inv()
    worst = 0.0
    for z in sample_points(samples):
        lhs = Mat2(*fa(1j * z)).scale(1j)
        rhs = g_inv @ Mat2(*fb(z)) @ G_TAU
        worst = max(worst, (lhs - rhs).norm())
    return SymmetryReport("tau_form", worst, samples, FORM_TOL)


def _word(h, *ks):
    m = Mat2.identity()
    for k in ks:
        m = m @ h[k - 1]
    return m.trace


def check_trace_symmetries(A, G, zeta, tol=None, A_minus=None, G_minus=None) -> list:
    """Trace-level consequences of the z -> -z and z -> iz symmetries.

    ``A_minus``/``G_minus`` are the accessory values used at -zeta; they
    default to (A, G), i.e. even data.  The generator-level report
    ``rotated_generator_trace`` is uninformative because every generator trace is -1;
    ``rotated_word_traces`` carries the content of the z -> iz symmetry on words.
    """
    A_minus = A if A_minus is None else A_minus
    G_minus = G if G_minus is None else G_minus
    h = [m.matrix for m in generators(close_params(zeta, A, G), tol)]
    k = [m.matrix for m in generators(close_params(-zeta, A_minus, G_minus), tol)]
    a = max(abs(h[2].trace - h[0].trace), abs(h[3].trace - h[1].trace))
    b = abs(h[1].trace - k[0].trace)
    b_word = max(abs(_word(h, 3, 2) - _word(k, 2, 1)),
                 abs(_word(h, 4, 1) - _word(k, 2, 1)),
                 abs(_word(h, 3, 1) - _word(k, 4, 2)))
    c = abs(_word(h, 2, 1) - _word(h, 4, 3))
    return [
        SymmetryReport("opposite_generator_traces", a, 1, TRACE_TOL),
        SymmetryReport("rotated_generator_trace", b, 1, TRACE_TOL),
        SymmetryReport("rotated_word_traces", b_word, 1, TRACE_TOL),
        SymmetryReport("pair_word_traces", c, 1, TRACE_TOL),
    ]


def zbar_diagnostic(A, G, zeta, A_inv=None, G_inv=None, tol=None) -> dict:
    """Word traces at zeta and at 1/conj(zeta), for inspection only.

    The true relation between A(zeta) and A(1/conj(zeta)) is unknown, so
    nothing is asserted here.  Defaults reuse (A, G) at the reflected point.
    """
    z2 = 1 / complex(zeta).conjugate()
    h = [m.matrix for m in generators(close_params(zeta, A, G), tol)]
    k = [m.matrix for m in generators(close_params(z2, A if A_inv is None else A_inv,
                                                   G if G_inv is None else G_inv), tol)]
    t, s = _word(h, 2, 1), _word(k, 2, 1)
    return {"zeta": complex(zeta), "zeta_reflected": z2, "tr_H2H1": t,
            "tr_H2H1_reflected": s, "gap": abs(t - s.conjugate())}
