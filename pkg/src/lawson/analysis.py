"""Surface holonomy, unitarizability, trace-map Jacobian, root finding and
circle scans over the spectral parameter."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import LawsonError, NonUnimodular, TraceTargetFailure
from .integrator import ToleranceBudget
from .linalg import Mat2, SPECIAL_TOL
from .monodromy import generator_system, generators
from .potential import G_GUARD, close_params

UNITARY_TOL = 1e-6
FILTER_TOL = 1e-6
RANK_RATIO = 1e-4
JACOBIAN_TOL = ToleranceBudget(rel_tol=1e-12, abs_tol=1e-14)
# Newton only needs a few correct digits of J; the residual keeps JACOBIAN_TOL
NEWTON_JAC_TOL = ToleranceBudget(rel_tol=1e-8, abs_tol=1e-10)
NEWTON_MAX_ITER = 50
NEWTON_MAX_HALVINGS = 30
NEWTON_G_FLOOR = 1e-6
SCAN_EXCLUSION = 1e-3

YES, NO, BORDERLINE = "Yes", "No", "Borderline"


# ---------------------------------------------------------------- holonomy

@dataclass(frozen=True)
class SurfaceHolonomy:
    A1: Mat2
    A2: Mat2
    A3: Mat2
    A4: Mat2
    form_gap: float  # max distance between the two equivalent forms of each A_k

    def canonical_words(self) -> dict:
        """Holonomies of a1 = G1 G4^-1, b1 = G2, a2 = G3 and b2.

        b2 repeats G2, kept as given; see README.
        Later loops compose on the left.
        """
        return {"a1": self.A4.inv() @ self.A1, "b1": self.A2, "a2": self.A3, "b2": self.A2}

    def traces(self) -> tuple:
        return tuple(m.trace for m in (self.A1, self.A2, self.A3, self.A4))


def surface_holonomy(H1: Mat2, H2: Mat2, H3: Mat2, H4: Mat2, tol: float = 1e-9) -> SurfaceHolonomy:
    """A1 = H2 H1, A2 = H4 H1, A3 = H4^2 H1^2, A4 = H2^2 H1^2.

    The alternate forms H2^-2 H1, H4^-2 H1, H4^-1 H1^2, H2^-1 H1^2 agree
    when H^3 = Id; their largest gap is returned as ``form_gap``.
    """
    for name, h in zip(("H1", "H2", "H3", "H4"), (H1, H2, H3, H4)):
        if abs(h.det - 1) > tol:
            raise NonUnimodular(f"{name} has det {h.det!r}")
    a = (H2 @ H1, H4 @ H1, H4 ** 2 @ H1 ** 2, H2 ** 2 @ H1 ** 2)
    b = (H2 ** -2 @ H1, H4 ** -2 @ H1, H4 ** -1 @ H1 ** 2, H2 ** -1 @ H1 ** 2)
    gap = max((x - y).norm() for x, y in zip(a, b))
    return SurfaceHolonomy(*a, form_gap=gap)


# --------------------------------------------------------- unitarizability

@dataclass(frozen=True)
class HermitianForm:
    p11: float
    p22: float
    p12: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.p11, self.p12], [self.p12.conjugate(), self.p22]])

    def eigenvalues(self) -> tuple:
        return tuple(np.linalg.eigvalsh(self.matrix()))

    @property
    def positive_definite(self) -> bool:
        return self.p11 > 0 and self.p11 * self.p22 - abs(self.p12) ** 2 > 0


_HERM_BASIS = (np.array([[1, 0], [0, 0]], complex), np.array([[0, 0], [0, 1]], complex),
               np.array([[0, 1], [1, 0]], complex), np.array([[0, 1j], [-1j, 0]], complex))


def _form_system(mats) -> np.ndarray:
    rows = []
    for h in mats:
        hm = h.to_array()
        cols = []
        for e in _HERM_BASIS:
            r = (hm.conj().T @ e @ hm - e).ravel()
            cols.append(np.concatenate([r.real, r.imag]))
        rows.append(np.array(cols).T)
    return np.vstack(rows)


def _form_residual(mats, P: np.ndarray) -> float:
    scale = np.linalg.norm(P)
    return max(np.linalg.norm(h.to_array().conj().T @ P @ h.to_array() - P) for h in mats) / scale


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _is_reducible(mats, tol=1e-8) -> bool:
    """True when all matrices share an eigenvector."""
    pivot = next((h for h in mats if (h - Mat2.diag(h.a11, h.a11)).norm() > tol
                  or abs(h.a11 - h.a22) > tol), None)
    if pivot is None:
        return True
    _, vecs = np.linalg.eig(pivot.to_array())
    for v in vecs.T:
        v = v / np.linalg.norm(v)
        if all(abs(_cross(h.to_array() @ v, v)) < tol * max(1.0, h.norm()) for h in mats):
            return True
    return False


def trace_filter_defect(mats) -> float:
    """How far generator and pair traces are from real values in [-2, 2]."""
    ts = [h.trace for h in mats]
    ts += [(mats[j] @ mats[i]).trace for i in range(len(mats)) for j in range(i + 1, len(mats))]
    return max(max(abs(t.imag), max(0.0, abs(t.real) - 2)) for t in ts)


def unitarizability(mats, tol: float = UNITARY_TOL):
    """Verdict (Yes/No/Borderline), invariant Hermitian form, defect.

    The form P solves H^+ P H = P for all inputs in the least-squares sense
    and is normalized to trace 2.  ``defect`` is the trace-filter violation
    when the filter rejects, else the relative form residual.
    """
    mats = list(mats)
    if not mats:
        raise ValueError("need at least one matrix")
    for h in mats:
        if not h.is_special(1e-8):
            raise NonUnimodular(f"det {h.det!r} is not 1")
    _, s, vt = np.linalg.svd(_form_system(mats))
    x = vt[-1]
    P = sum(c * e for c, e in zip(x, _HERM_BASIS))
    tr = P.trace().real
    if abs(tr) > 1e-12:
        P = P * (2 / tr)
    else:
        P = P * (math.sqrt(2) / np.linalg.norm(P))
    P = (P + P.conj().T) / 2
    form = HermitianForm(float(P[0, 0].real), float(P[1, 1].real), complex(P[0, 1]))
    residual = _form_residual(mats, P)
    filt = trace_filter_defect(mats)
    if filt > FILTER_TOL:
        return NO, form, filt
    if _is_reducible(mats) or (len(s) >= 2 and s[-2] < tol * max(1.0, s[0])):
        return BORDERLINE, form, residual
    if residual >= tol:
        return NO, form, residual
    mineig = min(form.eigenvalues())
    if mineig > tol:
        return YES, form, residual
    if abs(mineig) <= tol:
        return BORDERLINE, form, residual
    # an indefinite invariant form: conjugate into SU(1,1), not SU(2)
    return NO, form, residual


# --------------------------------------------------------------- traces

def word_traces(H) -> dict:
    h1, h2, h3, h4 = H
    return {"t1": h1.trace, "t2": h2.trace, "t3": h3.trace, "t4": h4.trace,
            "t12": (h2 @ h1).trace, "t13": (h3 @ h1).trace, "t14": (h4 @ h1).trace,
            "t123": (h3 @ h2 @ h1).trace}


def trace_map(zeta, A, G, tol=None) -> tuple:
    """(t12, t14) = (tr H2 H1, tr H4 H1); only the three needed loops are run."""
    p = close_params(zeta, A, G)
    h1, h2, h4 = (m.matrix for m in generator_system(p, tol, (1, 2, 4)).balanced)
    return (h2 @ h1).trace, (h4 @ h1).trace


def _real_map(zeta, x, tol):
    t12, t14 = trace_map(zeta, complex(x[0], x[1]), complex(x[2], x[3]), tol)
    return np.array([t12.real, t12.imag, t14.real, t14.imag])


def jacobian(zeta, A, G, h: float = 1e-5, tol=None) -> np.ndarray:
    """Central-difference Jacobian of (Re A, Im A, Re G, Im G) -> (Re t12, Im t12, Re t14, Im t14)."""
    tol = tol or JACOBIAN_TOL
    x0 = np.array([complex(A).real, complex(A).imag, complex(G).real, complex(G).imag])
    J = np.empty((4, 4))
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        J[:, j] = (_real_map(zeta, x0 + e, tol) - _real_map(zeta, x0 - e, tol)) / (2 * h)
    return J


def jacobian_rank(zeta, A, G, h: float = 1e-5, tol=None):
    """(real rank, singular values) with rank threshold sigma > 1e-4 sigma_max."""
    if not 1e-6 <= h <= 1e-3:
        raise ValueError(f"h must lie in [1e-6, 1e-3], got {h}")
    s = np.linalg.svd(jacobian(zeta, A, G, h, tol), compute_uv=False)
    rank = int(np.sum(s > RANK_RATIO * s[0])) if s[0] > 0 else 0
    return rank, [float(v) for v in s]


@dataclass(frozen=True)
class TraceTargetResult:
    A: complex
    G: complex
    iterations: int
    residual: float


def find_trace_target(zeta, target_t12, target_t14, init_A, init_G,
                      tol: float = 1e-8, h: float = 1e-4, integ=None,
                      jac_integ=None) -> TraceTargetResult:
    """Damped Newton for (t12, t14)(A, G) = target.

    Residuals are evaluated at ``integ`` (default JACOBIAN_TOL), the Jacobian
    at the looser ``jac_integ``.  Raises TraceTargetFailure with reason
    Singular, MaxIter or LeftDomain.
    """
    integ = integ or JACOBIAN_TOL
    jac_integ = jac_integ or NEWTON_JAC_TOL
    if abs(complex(init_G)) <= NEWTON_G_FLOOR:
        raise TraceTargetFailure("LeftDomain", "initial G inside the guard")
    target = np.array([complex(target_t12).real, complex(target_t12).imag,
                       complex(target_t14).real, complex(target_t14).imag])
    x = np.array([complex(init_A).real, complex(init_A).imag,
                  complex(init_G).real, complex(init_G).imag])

    def resid(v):
        return _real_map(zeta, v, integ) - target

    def pack(v, it, r):
        return TraceTargetResult(complex(v[0], v[1]), complex(v[2], v[3]), it, r)

    F = resid(x)
    r = float(np.linalg.norm(F))
    for it in range(NEWTON_MAX_ITER + 1):
        if r < tol:
            return pack(x, it, r)
        if it == NEWTON_MAX_ITER:
            break
        J = jacobian(zeta, complex(x[0], x[1]), complex(x[2], x[3]), h, jac_integ)
        s = np.linalg.svd(J, compute_uv=False)
        if s[0] == 0 or s[-1] <= RANK_RATIO * s[0]:
            raise TraceTargetFailure("Singular", f"sigma ratio {s[-1] / s[0] if s[0] else 0:.3g}",
                                     last=pack(x, it, r))
        dx = np.linalg.solve(J, -F)
        lam = 1.0
        for _ in range(NEWTON_MAX_HALVINGS):
            xn = x + lam * dx
            if abs(complex(xn[2], xn[3])) > NEWTON_G_FLOOR:
                try:
                    Fn = resid(xn)
                except LawsonError:
                    Fn = None
                if Fn is not None and np.linalg.norm(Fn) < r:
                    break
            lam /= 2
        else:
            if abs(complex(xn[2], xn[3])) <= NEWTON_G_FLOOR:
                raise TraceTargetFailure("LeftDomain", "G entered the guard", last=pack(x, it, r))
            raise TraceTargetFailure("MaxIter", "line search stalled", last=pack(x, it, r))
        x, F = xn, Fn
        r = float(np.linalg.norm(F))
    raise TraceTargetFailure("MaxIter", f"residual {r:.3g} after {NEWTON_MAX_ITER} iterations",
                             last=pack(x, NEWTON_MAX_ITER, r))


# ------------------------------------------------------------------ scans

@dataclass
class TraceProfile:
    index: int
    zeta: complex
    A: complex
    G: complex
    t1: complex = None
    t2: complex = None
    t3: complex = None
    t4: complex = None
    t12: complex = None
    t13: complex = None
    t14: complex = None
    t123: complex = None
    surface_traces: tuple = None
    unitarizable: str = None
    defect: float = None
    relation_defect: float = None
    status: str = "ok"
    error: dict = field(default=None)


def scan_points(n: int) -> list:
    return [cmath.exp(2j * math.pi * j / n) for j in range(n)]


def profile_at(index, zeta, A, G, tol=None) -> TraceProfile:
    prof = TraceProfile(index, complex(zeta), complex(A), complex(G))
    if min(abs(zeta - 1), abs(zeta + 1)) < SCAN_EXCLUSION:
        prof.status = "excluded"
        prof.error = {"error": "excluded", "detail": "within 1e-3 of zeta = +-1"}
        return prof
    try:
        H = [m.matrix for m in generators(close_params(zeta, A, G), tol)]
        for k, v in word_traces(H).items():
            setattr(prof, k, v)
        prof.surface_traces = surface_holonomy(*H).traces()
        prof.unitarizable, _, prof.defect = unitarizability(H)
        prof.relation_defect = (H[3] @ H[2] @ H[1] @ H[0] - Mat2.identity()).norm()
    except LawsonError as exc:
        prof.status = "error"
        prof.error = {"error": exc.code, "detail": str(exc.detail)}
    return prof


def _profile_job(args):
    return profile_at(*args)


def circle_scan(A_val, G_val, n_points: int, tol=None, workers: int | None = None) -> list:
    """Profiles at zeta = exp(2 pi i j/n), j = 0..n-1, same (A, G) everywhere.

    Points near zeta = +-1 are kept as ``status="excluded"`` entries so the
    output always has n entries in index order.
    """
    if n_points < 4 or n_points % 2:
        raise ValueError("n_points must be even and >= 4")
    jobs = [(j, z, A_val, G_val, tol) for j, z in enumerate(scan_points(n_points))]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_profile_job, jobs))
    return [_profile_job(j) for j in jobs]
