"""Parallel transport of the linear system and the four generator loops.

Convention: along a path z(t) we solve ``Y' = -xi(z(t)) z'(t) Y`` with
``Y(0) = Id``.  This is the inverse of the frame solving ``dPhi = Phi xi``,
and it composes with the later path on the left: ``Y[g then h] = Y[h] Y[g]``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .integrator import ToleranceBudget, integrate
from .linalg import Mat2, exact_conjugate
from .paths import Arc, Line, PathSpec, circle
from .potential import PotentialParams, pole

BASE_POINT = 0.5 + 0j
CORRIDOR_RADIUS = 0.5
LOOP_RADIUS = 0.3
PROBE_RADIUS = 0.2
APPARENT_TOL = ToleranceBudget(rel_tol=1e-13, abs_tol=1e-15)
APPARENT_THRESHOLD = 1e-5


@dataclass(frozen=True)
class Monodromy:
    matrix: Mat2
    err_estimate: float
    steps_taken: int

    @property
    def trace(self):
        return self.matrix.trace

    @property
    def det(self):
        return self.matrix.det

    def __matmul__(self, other: "Monodromy") -> "Monodromy":
        return Monodromy(self.matrix @ other.matrix,
                         self.err_estimate + other.err_estimate,
                         self.steps_taken + other.steps_taken)

    def inverse(self) -> "Monodromy":
        return Monodromy(self.matrix.inv(), self.err_estimate, self.steps_taken)


def _coef(p: PotentialParams, seg, chart):
    entries = p.xi_entries if chart == "z" else p.xi_entries_w
    point, vel = seg.point, seg.velocity
    if isinstance(seg, Line):
        v = seg.end - seg.start

        def f(t):
            x11, x12, x21, x22 = entries(point(t))
            return (-x11 * v, -x12 * v, -x21 * v, -x22 * v)
    else:
        def f(t):
            x11, x12, x21, x22 = entries(point(t))
            s = -vel(t)
            return (x11 * s, x12 * s, x21 * s, x22 * s)
    return f


def transport(p: PotentialParams, path: PathSpec, tol: ToleranceBudget | None = None) -> Monodromy:
    """Fundamental solution at the end of ``path`` (see module docstring)."""
    tol = tol or ToleranceBudget()
    path.check()
    y = (1 + 0j, 0j, 0j, 1 + 0j)
    err = 0.0
    steps = 0
    for seg in path.segments:
        if seg.length == 0:
            continue
        y, e, steps = integrate(_coef(p, seg, path.chart), y, tol, steps)
        err += e
    return Monodromy(Mat2(*y), err, steps)


def generator_pieces(k: int):
    """(corridor, loop) for generator k; the full loop is corridor, loop, corridor reversed.

    The corridor follows |z| = 1/2 counter-clockwise from the base point to
    angle (k-1)pi/2 and then runs radially out to the loop circle.
    """
    pk = pole(k)
    segs = []
    if k > 1:
        segs.append(Arc(0j, CORRIDOR_RADIUS, 0.0, (k - 1) * math.pi / 2))
        # snap the arc end onto the exact axis point to keep joins tight
        start = CORRIDOR_RADIUS * pk
    else:
        start = BASE_POINT
    segs.append(Line(start, (1 - LOOP_RADIUS) * pk))
    corridor = PathSpec(tuple(segs))
    loop = PathSpec((circle(pk, LOOP_RADIUS, start_angle=math.pi + (k - 1) * math.pi / 2),))
    return corridor, loop


def generator_path(k: int) -> PathSpec:
    corridor, loop = generator_pieces(k)
    return corridor.then(loop).then(corridor.reversed())


def _generator_parts(p, k, tol):
    corridor, loop = generator_pieces(k)
    return transport(p, corridor, tol), transport(p, loop, tol)


def generator(p: PotentialParams, k: int, tol: ToleranceBudget | None = None) -> Monodromy:
    """H_k in the frame Y(z0) = Id, formed as C^-1 O C exactly from the
    transported corridor C and circle O."""
    c, o = _generator_parts(p, k, tol)
    return Monodromy(exact_conjugate(o.matrix, c.matrix), 2 * c.err_estimate + o.err_estimate,
                     c.steps_taken + o.steps_taken)


def balancing_frame(mats, max_iter: int = 200, rtol: float = 1e-9) -> Mat2:
    """T in SL(2,C) approximately minimising sum ||T H T^-1||_F^2.

    Geodesic descent along positive Hermitian directions; the gradient is
    the moment map sum(M M^+ - M^+ M).  For a unitarizable tuple the
    minimiser makes every matrix unitary.
    """
    T = np.eye(2, dtype=complex)
    Ms = [m.to_array() for m in mats]
    f = sum(np.linalg.norm(M) ** 2 for M in Ms)
    step = 1.0 / f
    for _ in range(max_iter):
        X = sum(M @ M.conj().T - M.conj().T @ M for M in Ms)
        X = (X + X.conj().T) / 2
        g2 = np.linalg.norm(X) ** 2
        if np.sqrt(g2) <= rtol * f:
            break
        w, V = np.linalg.eigh(X)
        for _ in range(60):
            E = (V * np.exp(-step * w)) @ V.conj().T
            Einv = (V * np.exp(step * w)) @ V.conj().T
            trial = [E @ M @ Einv for M in Ms]
            ft = sum(np.linalg.norm(M) ** 2 for M in trial)
            if ft <= f - 0.5 * step * g2:
                break
            step /= 2
        else:
            break
        T, Ms, f = E @ T, trial, ft
        step *= 2
    return Mat2.from_array(T / np.sqrt(np.linalg.det(T)))


@dataclass(frozen=True)
class GeneratorSystem:
    """Generators in the raw frame Y(z0) = Id and in a balanced frame.

    ``balanced[i] = frame raw[i] frame^-1``; traces and word relations agree,
    but the balanced matrices have the smallest joint norm, which keeps
    float64 checks such as H^3 = Id well conditioned.  ``indices`` lists
    which generators are present (all four by default).
    """
    indices: tuple
    raw: tuple
    frame: Mat2
    balanced: tuple


def generator_system(p: PotentialParams, tol: ToleranceBudget | None = None,
                     indices=(1, 2, 3, 4)) -> GeneratorSystem:
    indices = tuple(indices)
    parts = [_generator_parts(p, k, tol) for k in indices]
    raw = tuple(Monodromy(exact_conjugate(o.matrix, c.matrix), 2 * c.err_estimate + o.err_estimate,
                          c.steps_taken + o.steps_taken) for c, o in parts)
    T = balancing_frame([m.matrix for m in raw])
    t_inv = T.inv()
    cond = T.norm() * t_inv.norm()
    bal = tuple(Monodromy(exact_conjugate(o.matrix, c.matrix @ t_inv),
                          cond * (2 * c.err_estimate + o.err_estimate),
                          c.steps_taken + o.steps_taken) for c, o in parts)
    return GeneratorSystem(indices, raw, T, bal)


def generators(p: PotentialParams, tol: ToleranceBudget | None = None, frame: str = "balanced") -> tuple:
    """(H1, H2, H3, H4) in the balanced frame (default) or the raw frame."""
    if frame not in ("balanced", "raw"):
        raise ValueError(f"frame must be 'balanced' or 'raw', got {frame!r}")
    if frame == "raw":
        return tuple(generator(p, k, tol) for k in (1, 2, 3, 4))
    return generator_system(p, tol).balanced


def _job(args):
    p, path, tol = args
    return transport(p, path, tol)


def transport_many(jobs, tol: ToleranceBudget | None = None, workers: int | None = None) -> list:
    """Transport independent (params, path) jobs; results keep input order."""
    args = [(p, path, tol) for p, path in jobs]
    if workers is None or workers <= 1 or len(args) < 2:
        return [_job(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_job, args))


def probe_path(which) -> PathSpec:
    chart = "z" if which in (0, "0") else "w"
    return PathSpec((circle(0j, PROBE_RADIUS),), chart=chart, apparent_probe=True)


def classify_loop(matrix: Mat2, threshold: float = APPARENT_THRESHOLD):
    """(||M - Id||, ||M + Id||, outcome) with outcome Id, MinusId or Nontrivial."""
    ident = Mat2.identity()
    plus = (matrix - ident).norm()
    minus = (matrix + ident).norm()
    if plus < threshold:
        return plus, minus, "Id"
    if minus < threshold:
        return plus, minus, "MinusId"
    return plus, minus, "Nontrivial"


@dataclass(frozen=True)
class ApparentProbe:
    monodromy: Monodromy
    defect: float        # ||M - Id||_F
    minus_defect: float  # ||M + Id||_F
    outcome: str         # "Id", "MinusId" or "Nontrivial"


def apparent_probe(p: PotentialParams, which, tol: ToleranceBudget | None = None,
                   threshold: float = APPARENT_THRESHOLD) -> ApparentProbe:
    if which not in (0, "0", "inf", math.inf):
        raise ValueError(f"which must be 0 or 'inf', got {which!r}")
    m = transport(p, probe_path(which), tol or APPARENT_TOL)
    plus, minus, outcome = classify_loop(m.matrix, threshold)
    return ApparentProbe(m, plus, minus, outcome)


def apparent_defect(p: PotentialParams, which, tol: ToleranceBudget | None = None) -> float:
    """||M_loop - Id||_F for the radius-0.2 loop about z = 0 or w = 0."""
    return apparent_probe(p, which, tol).defect
