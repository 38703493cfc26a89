"""Piecewise paths (segments and circular arcs) in the z- or w-chart."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InadmissiblePath, PoleApproach
from .linalg import as_complex
from .potential import POLES

DEFAULT_GUARD = 0.05
APPARENT_FLOOR = 0.05
JOIN_TOL = 1e-12


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start

    def reversed(self):
        return Line(self.end, self.start)

    def distance_to(self, p) -> float:
        d = self.end - self.start
        if d == 0:
            return abs(p - self.start)
        t = ((p - self.start) * d.conjugate()).real / abs(d) ** 2
        t = min(1.0, max(0.0, t))
        return abs(p - self.point(t))

    @property
    def length(self):
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Arc:
    """Circle arc ``center + radius*exp(i*theta)``, theta from ``angle_from`` to ``angle_to``.

    Counter-clockwise when ``angle_to > angle_from``.
    """

    center: complex
    radius: float
    angle_from: float
    angle_to: float

    @property
    def orientation(self) -> int:
        return 1 if self.angle_to >= self.angle_from else -1

    @property
    def start(self):
        return self.point(0.0)

    @property
    def end(self):
        return self.point(1.0)

    def point(self, t):
        th = self.angle_from + t * (self.angle_to - self.angle_from)
        return self.center + self.radius * cmath.exp(1j * th)

    def velocity(self, t):
        span = self.angle_to - self.angle_from
        th = self.angle_from + t * span
        return 1j * self.radius * span * cmath.exp(1j * th)

    def reversed(self):
        return Arc(self.center, self.radius, self.angle_to, self.angle_from)

    def distance_to(self, p) -> float:
        v = p - self.center
        lo, hi = sorted((self.angle_from, self.angle_to))
        if hi - lo >= 2 * math.pi or v == 0:
            closest_on_arc = True
        else:
            th = cmath.phase(v)
            # shift th into [lo, lo + 2pi)
            th = lo + (th - lo) % (2 * math.pi)
            closest_on_arc = th <= hi
        if closest_on_arc:
            return abs(abs(v) - self.radius)
        return min(abs(p - self.start), abs(p - self.end))

    @property
    def length(self):
        return self.radius * abs(self.angle_to - self.angle_from)


@dataclass(frozen=True)
class PathSpec:
    """Ordered pieces in one chart.

    ``chart`` is ``"z"`` for the affine coordinate or ``"w"`` for w = 1/z.
    Apparent probes may approach the origin of their chart down to
    ``APPARENT_FLOOR`` regardless of ``guard``.
    """

    segments: tuple
    chart: str = "z"
    apparent_probe: bool = False
    guard: float = DEFAULT_GUARD

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.chart not in ("z", "w"):
            raise InadmissiblePath(f"unknown chart {self.chart!r}")
        for a, b in zip(self.segments, self.segments[1:]):
            if abs(a.end - b.start) > JOIN_TOL:
                raise InadmissiblePath(f"pieces do not join: {a.end!r} vs {b.start!r}")

    @property
    def base_point(self):
        return self.segments[0].start if self.segments else None

    @property
    def is_closed(self):
        return bool(self.segments) and abs(self.segments[-1].end - self.segments[0].start) <= JOIN_TOL

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(s.reversed() for s in reversed(self.segments)),
                        self.chart, self.apparent_probe, self.guard)

    def then(self, other: "PathSpec") -> "PathSpec":
        if other.chart != self.chart:
            raise InadmissiblePath("cannot concatenate paths in different charts")
        return PathSpec(self.segments + other.segments, self.chart,
                        self.apparent_probe or other.apparent_probe,
                        min(self.guard, other.guard))

    def clearance(self) -> tuple:
        """(min distance to the regular singular points, min distance to the chart origin)."""
        if not self.segments:
            return math.inf, math.inf
        dp = min(s.distance_to(p) for s in self.segments for p in POLES)
        d0 = min(s.distance_to(0j) for s in self.segments)
        return dp, d0

    def check(self):
        dp, d0 = self.clearance()
        zero_guard = APPARENT_FLOOR if self.apparent_probe else self.guard
        if dp < self.guard:
            raise PoleApproach(f"path passes within {dp:.3g} of a puncture (guard {self.guard})")
        if d0 < zero_guard:
            raise PoleApproach(f"path passes within {d0:.3g} of the apparent point (guard {zero_guard})")


def line(a, b) -> Line:
    return Line(as_complex(a), as_complex(b))


def circle(center, radius, start_angle=0.0, turns=1) -> Arc:
    return Arc(as_complex(center), float(radius), start_angle, start_angle + 2 * math.pi * turns)
