import cmath
import math

import numpy as np
import pytest

from lawson import analysis
from lawson.analysis import (
    BORDERLINE, NO, YES, circle_scan, find_trace_target, jacobian, jacobian_rank,
    surface_holonomy, trace_map, unitarizability,
)
from lawson.errors import NonUnimodular, TraceTargetFailure
from lawson.linalg import Mat2
from lawson.monodromy import generators
from lawson.potential import close_params

ID = Mat2.identity()
OMEGA = cmath.exp(2j * math.pi / 3)


def random_su2(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b = complex(q[0], q[1]), complex(q[2], q[3])
    return Mat2(a, -b.conjugate(), b, a.conjugate())


def order_three_su2(rng):
    v = random_su2(rng)
    return v @ Mat2.diag(OMEGA, OMEGA ** 2) @ v.inv()


def random_sl2(rng, spread=1.0):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = np.eye(2) + spread * m / 2
    m /= np.sqrt(np.linalg.det(m))
    return Mat2.from_array(m)


def pair_with_trace(t):
    """tr H1 = tr H2 = -1 and tr H2 H1 = t."""
    return Mat2(OMEGA, 1, 0, OMEGA ** 2), Mat2(OMEGA ** 2, 0, t - 2, OMEGA)


def conj_all(mats, s):
    si = s.inv()
    return [s @ m @ si for m in mats]


# ---------------------------------------------------------------- holonomy

def test_surface_holonomy_identity():
    sh = surface_holonomy(ID, ID, ID, ID)
    assert all(m == ID for m in (sh.A1, sh.A2, sh.A3, sh.A4))
    assert sh.form_gap == 0


def test_surface_holonomy_from_generators():
    H = [m.matrix for m in generators(close_params(cmath.exp(0.8j), 0.2, 1.1))]
    sh = surface_holonomy(*H)
    assert sh.form_gap < 1e-6
    assert sh.A1.trace == (H[1] @ H[0]).trace
    assert sh.traces()[1] == (H[3] @ H[0]).trace
    words = sh.canonical_words()
    assert set(words) == {"a1", "b1", "a2", "b2"}
    assert (words["a1"] - sh.A4.inv() @ sh.A1).norm() == 0


def test_surface_holonomy_rejects_non_unimodular():
    with pytest.raises(NonUnimodular):
        surface_holonomy(ID, ID.scale(1.1), ID, ID)


# --------------------------------------------------------- unitarizability

def test_unitary_pair_yes_with_identity_form():
    rng = np.random.default_rng(1)
    verdict, form, defect = unitarizability([order_three_su2(rng), order_three_su2(rng)])
    assert verdict == YES and defect < 1e-12
    assert np.allclose(form.matrix(), np.eye(2), atol=1e-10)
    assert form.positive_definite


def test_trace_outside_interval_is_no():
    verdict, _, defect = unitarizability(list(pair_with_trace(3.0)))
    assert verdict == NO and defect > 0.5


@pytest.mark.parametrize("t", [-0.9, -0.5, 0.0, 0.7, 1.5, 1.95])
def test_trace_interval_yes(t):
    assert unitarizability(list(pair_with_trace(t)))[0] == YES


@pytest.mark.parametrize("t", [-3.0, -1.5, -1.05, 2.05, 2.5, 4.0])
def test_trace_interval_no(t):
    assert unitarizability(list(pair_with_trace(t)))[0] == NO


@pytest.mark.parametrize("t", [-1.0, 2.0])
def test_trace_interval_endpoints_reducible(t):
    assert unitarizability(list(pair_with_trace(t)))[0] == BORDERLINE


def test_interval_matches_random_su2_pairs():
    """Every SU(2) pair of order-three elements has tr H2 H1 in [-1, 2]."""
    rng = np.random.default_rng(5)
    ts = [(order_three_su2(rng) @ order_three_su2(rng)).trace for _ in range(2000)]
    assert max(abs(t.imag) for t in ts) < 1e-12
    re = [t.real for t in ts]
    assert min(re) >= -1 - 1e-12 and max(re) <= 2 + 1e-12
    assert min(re) < -0.9 and max(re) > 1.9


def test_complex_trace_is_no():
    h1, h2 = pair_with_trace(0.5 + 0.3j)
    assert unitarizability([h1, h2])[0] == NO


def test_commuting_tuple_borderline():
    d = Mat2.diag(OMEGA, OMEGA ** 2)
    assert unitarizability([d, d.inv()])[0] == BORDERLINE


def test_form_recovers_conjugator():
    rng = np.random.default_rng(7)
    us = [order_three_su2(rng) for _ in range(4)]
    s = random_sl2(rng)
    verdict, form, defect = unitarizability(conj_all(us, s))
    assert verdict == YES
    si = s.inv().to_array()
    expect = si.conj().T @ si
    expect *= 2 / expect.trace().real
    assert np.linalg.norm(form.matrix() - expect) < 1e-8


def test_verdict_conjugation_invariant():
    rng = np.random.default_rng(11)
    for t in (-2.0, 0.3, 2.4, 3.5):
        mats = list(pair_with_trace(t)) * 2
        v0, _, d0 = unitarizability(mats)
        for _ in range(5):
            v1, _, d1 = unitarizability(conj_all(mats, random_sl2(rng, 0.5)))
            assert v1 == v0 and abs(d1 - d0) < 1e-8


def test_unitarizability_input_checks():
    with pytest.raises(ValueError):
        unitarizability([])
    with pytest.raises(NonUnimodular):
        unitarizability([ID.scale(2)])


# --------------------------------------------------- traces and Jacobian

def test_trace_map_matches_generators():
    p = close_params(0.9, 0.1, 1.5)
    H = [m.matrix for m in generators(p)]
    t12, t14 = trace_map(0.9, 0.1, 1.5)
    assert abs(t12 - (H[1] @ H[0]).trace) < 1e-8
    assert abs(t14 - (H[3] @ H[0]).trace) < 1e-8


def test_jacobian_rank_full():
    rank, sv = jacobian_rank(0.9, 0.3 + 0.2j, 1.2 - 0.5j)
    assert rank == 4
    assert sv == sorted(sv, reverse=True) and sv[-1] > 1e-4 * sv[0]


def test_jacobian_holomorphic_structure():
    # t12, t14 are holomorphic in (A, G): each 2x2 block is a rotation-dilation
    J = jacobian(0.9, 0.3, 1.2)
    for i in (0, 2):
        for j in (0, 2):
            b = J[i:i + 2, j:j + 2]
            assert abs(b[0, 0] - b[1, 1]) < 1e-6 * np.abs(J).max()
            assert abs(b[0, 1] + b[1, 0]) < 1e-6 * np.abs(J).max()


def test_jacobian_step_halving():
    J1 = jacobian(0.9, 0.3, 1.2, h=1e-3)
    J2 = jacobian(0.9, 0.3, 1.2, h=5e-4)
    J3 = jacobian(0.9, 0.3, 1.2, h=2.5e-4)
    e1, e2 = np.abs(J1 - J2).max(), np.abs(J2 - J3).max()
    assert e1 < 1e-4 * np.abs(J1).max()
    assert 2.5 < e1 / e2 < 6  # O(h^2)


def test_jacobian_step_range():
    with pytest.raises(ValueError):
        jacobian_rank(0.9, 0.3, 1.2, h=1e-2)
    with pytest.raises(ValueError):
        jacobian_rank(0.9, 0.3, 1.2, h=1e-7)


# ------------------------------------------------------------ root finder

def test_round_trip():
    t12, t14 = trace_map(0.9, 0.1, 1.5)
    res = find_trace_target(0.9, t12, t14, 0.1 + 0.05, 1.5 - 0.05j)
    assert res.residual < 1e-8
    assert abs(res.A - 0.1) < 1e-6 and abs(res.G - 1.5) < 1e-6


def test_target_at_start_converges_immediately():
    t12, t14 = trace_map(0.9, 0.1, 1.5)
    res = find_trace_target(0.9, t12, t14, 0.1, 1.5)
    assert res.iterations <= 1 and res.residual < 1e-8


def test_singular_start_reported(monkeypatch):
    monkeypatch.setattr(analysis, "jacobian", lambda *a, **k: np.diag([1.0, 1.0, 1.0, 0.0]))
    with pytest.raises(TraceTargetFailure) as info:
        find_trace_target(0.9, 0, 0, 0.1, 1.5)
    assert info.value.reason == "Singular"
    assert info.value.last is not None


def test_initial_g_in_guard():
    with pytest.raises(TraceTargetFailure) as info:
        find_trace_target(0.9, 0, 0, 0.1, 1e-7)
    assert info.value.reason == "LeftDomain"


# ------------------------------------------------------------------- scans

def test_circle_scan_structure():
    n = 8
    prof = circle_scan(0.2, 1.3, n)
    assert [p.index for p in prof] == list(range(n))
    assert [p.status for p in prof].count("excluded") == 2
    assert prof[0].status == prof[n // 2].status == "excluded"
    for p in prof:
        if p.status != "ok":
            continue
        for t in (p.t1, p.t2, p.t3, p.t4):
            assert abs(t + 1) < 1e-6
        assert p.relation_defect < 1e-6
        assert p.unitarizable in (YES, NO, BORDERLINE)
        assert abs(p.surface_traces[0] - p.t12) < 1e-12
    for j in range(1, n // 2):
        assert abs(prof[j].t14 - prof[j + n // 2].t12) < 1e-7


def test_circle_scan_validates_n():
    for n in (2, 7):
        with pytest.raises(ValueError):
            circle_scan(0.2, 1.3, n)


def test_circle_scan_records_errors():
    prof = circle_scan(0.2, 1e-13, 4)
    assert all(p.status in ("error", "excluded") for p in prof)
    assert prof[1].error["error"] == "degenerate_g"


def test_circle_scan_parallel_matches_serial():
    a = circle_scan(0.2, 1.3, 4)
    b = circle_scan(0.2, 1.3, 4, workers=2)
    assert a == b
