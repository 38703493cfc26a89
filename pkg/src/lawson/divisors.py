"""Divisor classes on y^3 = z^4 - 1 supported on the named points.

The six Weierstrass points Q1..Q6 and the four umbilics P1..P4 are the
only points tracked. Linear equivalence is modelled by an explicit relation
lattice, and class equality is an exact lattice-membership test.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

from . import intlattice
from .errors import MixedLattice

LABELS = ("Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "P1", "P2", "P3", "P4")
INDEX = {name: i for i, name in enumerate(LABELS)}

# images under the Z3-quotient map to CP^1 (None stands for infinity)
BASE_IMAGE = {
    "Q1": 0, "Q3": 0, "Q5": 0,
    "Q2": None, "Q4": None, "Q6": None,
    "P1": 1, "P2": 1j, "P3": -1, "P4": -1j,
}

# pullback permutation of Phi_3: Q1->Q5->Q3->Q1, Q2->Q6->Q4->Q2, P fixed
PHI3 = {"Q1": "Q5", "Q5": "Q3", "Q3": "Q1",
        "Q2": "Q6", "Q6": "Q4", "Q4": "Q2",
        "P1": "P1", "P2": "P2", "P3": "P3", "P4": "P4"}


@dataclass(frozen=True)
class Divisor:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if len(c) != len(LABELS):
            raise ValueError(f"expected {len(LABELS)} coefficients, got {len(c)}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls):
        return cls((0,) * len(LABELS))

    @classmethod
    def of(cls, **named):
        c = [0] * len(LABELS)
        for k, v in named.items():
            c[INDEX[k]] += v
        return cls(tuple(c))

    @classmethod
    def parse(cls, text: str) -> "Divisor":
        """Parse strings such as ``"Q1+Q3-Q5"``, ``"2Q1 - P3"`` or ``"0"``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls.zero()
        terms = re.findall(r"([+-]?)(\d*)\*?([QP]\d)", s)
        if "".join("".join(t) for t in terms) != s.replace("*", ""):
            raise ValueError(f"cannot parse divisor {text!r}")
        c = [0] * len(LABELS)
        for sign, n, name in terms:
            if name not in INDEX:
                raise ValueError(f"unknown point {name!r}")
            k = int(n) if n else 1
            c[INDEX[name]] += -k if sign == "-" else k
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other):
        return Divisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return Divisor(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Divisor(tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int):
        return Divisor(tuple(k * a for a in self.coeffs))

    def permute(self, mapping) -> "Divisor":
        c = [0] * len(LABELS)
        for name, a in zip(LABELS, self.coeffs):
            c[INDEX[mapping[name]]] += a
        return Divisor(tuple(c))

    def __str__(self):
        pos = [(n, a) for n, a in zip(LABELS, self.coeffs) if a > 0]
        neg = [(n, a) for n, a in zip(LABELS, self.coeffs) if a < 0]
        out = ""
        for n, a in pos + neg:
            mag = "" if abs(a) == 1 else str(abs(a))
            if a > 0:
                out += ("+" if out else "") + mag + n
            else:
                out += "-" + mag + n
        return out or "0"


def _principal_generators():
    gens = []
    for i, j in itertools.combinations(range(1, 7), 2):
        gens.append(Divisor.of(**{f"Q{i}": 2, f"Q{j}": -2}))
    gens.append(Divisor.parse("Q1+Q3+Q5-Q2-Q4-Q6"))
    return gens


Q_RELATIONS = tuple(_principal_generators())
# (omega_1) = P1+P3, (omega_2) = P2+P4 and K ~ 2Q1 for a Weierstrass point
P_RELATIONS = (Divisor.parse("P1+P3-2Q1"), Divisor.parse("P2+P4-2Q1"))


@dataclass(frozen=True)
class RelationLattice:
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if g.degree != 0:
                raise ValueError(f"relation {g} has nonzero degree")

    @cached_property
    def hnf(self):
        return intlattice.hermite_normal_form([g.coeffs for g in self.generators])

    def contains(self, d: Divisor) -> bool:
        return intlattice.in_lattice(d.coeffs, self.hnf)

    def reduce(self, d: Divisor) -> tuple:
        return tuple(intlattice.reduce_vector(d.coeffs, self.hnf))


DEFAULT_LATTICE = RelationLattice(Q_RELATIONS + P_RELATIONS)
Q_ONLY_LATTICE = RelationLattice(Q_RELATIONS)


@dataclass(frozen=True)
class DivisorClass:
    representative: Divisor
    lattice: RelationLattice = field(default=DEFAULT_LATTICE, compare=False)

    @classmethod
    def parse(cls, text, lattice=DEFAULT_LATTICE):
        return cls(Divisor.parse(text), lattice)

    @property
    def degree(self):
        return self.representative.degree

    def __eq__(self, other):
        return isinstance(other, DivisorClass) and class_eq(self, other)

    def __hash__(self):
        return hash(self.lattice.reduce(self.representative))

    def canonical(self) -> Divisor:
        return canonical_representative(self)

    def __str__(self):
        return str(self.canonical())


def class_eq(a: DivisorClass, b: DivisorClass) -> bool:
    if a.lattice is not b.lattice and a.lattice != b.lattice:
        raise MixedLattice("classes live in different relation lattices")
    return a.lattice.contains(a.representative - b.representative)


def _vectors_with_l1(n, dim, degree):
    """All integer vectors of the given L1 norm and coordinate sum."""
    def rec(i, remaining, total):
        if i == dim - 1:
            for last in {remaining, -remaining}:
                if total + last == degree:
                    yield (last,)
            return
        for a in range(-remaining, remaining + 1):
            for tail in rec(i + 1, remaining - abs(a), total + a):
                yield (a,) + tail
    yield from rec(0, n, 0)


def _sort_key(coeffs):
    return tuple(-a for a in coeffs)


def canonical_representative(c: DivisorClass, max_l1=None) -> Divisor:
    """Least L1-norm representative, ties broken lexicographically.

    Among equal norms the vector with larger coefficients on earlier labels
    (Q1 first) wins, so ``Q3+Q5-Q1`` canonicalises to ``Q1+Q3-Q5``.
    """
    d = c.representative
    own = sum(abs(a) for a in d.coeffs)
    limit = own if max_l1 is None else min(own, max_l1)
    target = c.lattice.reduce(d)
    for n in range(abs(d.degree), limit + 1):
        hits = [v for v in _vectors_with_l1(n, len(LABELS), d.degree)
                if c.lattice.reduce(Divisor(v)) == target]
        if hits:
            return Divisor(min(hits, key=_sort_key))
    return d


def torsion_group(lattice=DEFAULT_LATTICE, order=None):
    """Invariant factors (>1) of the group generated by Qi - Q1 modulo ``lattice``.

    ``order`` optionally permutes the relation generators; the answer must
    not depend on it.
    """
    gens = list(lattice.generators)
    if order is not None:
        gens = [gens[i] for i in order]
    factors = intlattice.smith_normal_form(_q_supported_sublattice(gens))
    factors += [0] * (5 - len(factors))
    return [f for f in factors if f != 1]


def _q_supported_sublattice(gens):
    """Lattice vectors with vanishing P-coordinates, in (Qi - Q1) coordinates.

    Ordering the P columns first makes the HNF rows with zero P-part span
    exactly the intersection with the Q-supported sublattice.
    """
    p_idx = [INDEX[p] for p in ("P1", "P2", "P3", "P4")]
    q_idx = [INDEX[f"Q{i}"] for i in range(1, 7)]
    perm = p_idx + q_idx
    rows = [[g.coeffs[k] for k in perm] for g in gens]
    out = []
    for v in intlattice.hermite_normal_form(rows):
        if any(v[:4]):
            continue
        q = v[4:]
        out.append(q[1:])  # Q1 coefficient is fixed by degree 0
    return out


def element_order(c: DivisorClass, bound=64) -> int:
    """Order of a degree-0 class, or 0 if it has infinite order (up to ``bound``)."""
    if c.degree != 0:
        return 0
    for n in range(1, bound + 1):
        if c.lattice.contains(n * c.representative):
            return n
    return 0


CANONICAL_CLASS = Divisor.parse("2Q1")


def enumerate_spin_classes(lattice=DEFAULT_LATTICE):
    """The 16 theta characteristics: degree-1 classes D with 2D ~ 2Q1."""
    seen = []
    for bits in itertools.product((0, 1), repeat=5):
        d = Divisor.parse("Q1")
        for i, b in zip(range(2, 7), bits):
            if b:
                d = d + Divisor.of(**{f"Q{i}": 1, "Q1": -1})
        cls = DivisorClass(d, lattice)
        assert lattice.contains(2 * d - CANONICAL_CLASS)
        if not any(class_eq(cls, s) for s in seen):
            seen.append(cls)
    reps = sorted((canonical_representative(s) for s in seen),
                  key=lambda d: (sum(map(abs, d.coeffs)), _sort_key(d.coeffs)))
    return [DivisorClass(d, lattice) for d in reps]


def phi3_pullback(c: DivisorClass) -> DivisorClass:
    return DivisorClass(c.representative.permute(PHI3), c.lattice)


def fixed_spin_classes(lattice=DEFAULT_LATTICE):
    return [c for c in enumerate_spin_classes(lattice) if class_eq(phi3_pullback(c), c)]


def spin_table(lattice=DEFAULT_LATTICE):
    """Rows ``{"class", "pullback", "fixed"}`` with canonical labels."""
    rows = []
    for c in enumerate_spin_classes(lattice):
        img = phi3_pullback(c)
        rows.append({
            "class": str(c.canonical()),
            "pullback": str(img.canonical()),
            "fixed": class_eq(img, c),
        })
    return rows
