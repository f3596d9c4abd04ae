"""
Slope bounds for ``U_p`` truncations as executable checks.

* the weak Hodge bound: the Newton polygon of a class-number-``t`` operator
  lies above the polygon with vertices ``(n t, t n (n-1) / 2)``;
* the improved bound built from the weight-2 Hodge slopes ``alpha_i`` of
  the twists ``psi omega^(-2r)``, with break points ``(k t, lambda_(k t))``;
* the vertex condition ``NP(s) < HP(s-1) + 1`` which pins down the first
  ``s0`` slopes of every twist;
* degrees of the pieces of slope in ``(n, n+1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .charseries import CharSeries
from .polygon import PolygonData, newton_polygon


class SlopeMultiset(tuple):
    """A sorted tuple of exact rationals."""

    def __new__(cls, values=()):
        return super().__new__(cls, sorted(Fraction(v) for v in values))

    def partial_sum(self, n: int) -> Fraction:
        if n > len(self):
            raise ValueError("only %d slopes available" % len(self))
        return sum(self[:n], Fraction(0))

    def to_json(self):
        return ["%d/%d" % (s.numerator, s.denominator) for s in self]


def _as_polygon(obj) -> PolygonData:
    if isinstance(obj, PolygonData):
        return obj
    if isinstance(obj, CharSeries):
        return newton_polygon(obj)
    raise TypeError("expected a CharSeries or PolygonData")


def theorem_a_polygon(t: int, length: int) -> PolygonData:
    """Polygon with slopes ``0`` (t times), ``1`` (t times), ``2``, ..."""
    return PolygonData.from_slopes([n // t for n in range(length)])


def check_theorem_A(cs, t: int) -> bool:
    """
    True if the Newton polygon lies on or above the vertices
    ``(0,0), (t,0), (2t,t), (3t,3t), ...`` at every integer abscissa.

    Coefficients vanishing to precision enter at their certified floor, so a
    ``True`` answer is rigorous.
    """
    np_ = _as_polygon(cs)
    bound = theorem_a_polygon(t, np_.length)
    return all(np_.y(x) >= bound.y(x) for x in range(np_.length + 1))


def improved_bound_slopes(alpha_lists, t: int, count: int) -> SlopeMultiset:
    """
    The ``count`` smallest elements of ``{alpha_i(r) + q n + r}``.

    ``alpha_lists[r]`` holds the ``t`` Hodge slopes of the weight-2 twist by
    ``omega^(-2r)`` and ``q = len(alpha_lists)``.

    >>> improved_bound_slopes([[0, 0]], 2, 6)
    (Fraction(0, 1), Fraction(0, 1), Fraction(1, 1), Fraction(1, 1), Fraction(2, 1), Fraction(2, 1))
    """
    q = len(alpha_lists)
    if q == 0:
        raise ValueError("need at least one alpha list")
    for alphas in alpha_lists:
        if len(alphas) != t:
            raise ValueError("each alpha list must have t = %d entries" % t)
        for a in alphas:
            if not 0 <= Fraction(a) <= 1:
                raise ValueError("alpha = %s lies outside [0, 1]" % a)
    levels = count // t + 2
    vals = [Fraction(a) + q * n + r
            for n in range(levels) for r, alphas in enumerate(alpha_lists) for a in alphas]
    return SlopeMultiset(sorted(vals)[:count])


def lambda_n(slopes, n: int) -> Fraction:
    """Sum of the ``n`` smallest entries."""
    return SlopeMultiset(slopes).partial_sum(n)


@dataclass
class SharpBoundReport:
    t: int
    strict: bool
    touches: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    uncertified: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and all(ok for _, _, _, ok in self.touches)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "mode": "strict" if self.strict else "report-only",
            "passed": self.passed,
            "touches": [{"k": k, "lambda": str(lam), "np": str(y), "ok": ok}
                        for k, lam, y, ok in self.touches],
            "violations": [{"n": n, "slope": str(s)} for n, s in self.violations],
            "uncertified": self.uncertified,
        }


def check_sharp_bound(cs, improved, t: int, kmax: int | None = None,
                      strict: bool = True) -> SharpBoundReport:
    """
    Check that the Newton polygon passes through ``(k t, lambda_(k t))`` and
    that slope number ``n`` (from 0) lies in ``[n // t, n // t + 1]``.

    Only the certified part of the polygon is examined; break points past it
    are listed under ``uncertified``.
    """
    np_ = _as_polygon(cs)
    improved = SlopeMultiset(improved)
    L = np_.certified_length()
    rep = SharpBoundReport(t, strict)
    kmax = len(improved) // t if kmax is None else kmax
    for k in range(1, kmax + 1):
        x = k * t
        if x > L or x > len(improved):
            rep.uncertified.append(k)
            continue
        lam = improved.partial_sum(x)
        y = np_.y(x)
        rep.touches.append((k, lam, y, y == lam))
    for n, s in enumerate(np_.certified_slopes()):
        lo = n // t
        if not lo <= s <= lo + 1:
            rep.violations.append((n, s))
    return rep


@dataclass
class ProgressionReport:
    s0: int
    s0_nonstrict: int
    boundary: list
    leading_slopes: list
    q: int = 1

    def progression(self, s: int, r: int = 0, terms: int = 5) -> list:
        """Predicted slopes ``a_s + q n + r`` for ``n = 0, ..., terms - 1``."""
        a = self.leading_slopes[s - 1]
        return [a + self.q * n + r for n in range(terms)]

    def to_json(self) -> dict:
        return {"s0": self.s0, "s0_nonstrict": self.s0_nonstrict,
                "boundary": self.boundary,
                "leading_slopes": [str(a) for a in self.leading_slopes],
                "q": self.q}


def progression_check(np_r: PolygonData, hp_r: PolygonData, q: int = 1) -> ProgressionReport:
    """
    Largest vertex ``s0`` of ``np_r`` with ``NP(s) < HP(s-1) + 1`` for
    ``s = 1, ..., s0``.

    Abscissae where the two sides are equal are listed in ``boundary``;
    ``s0_nonstrict`` is what the same rule gives with ``<=``.
    """
    n = min(np_r.length, hp_r.length + 1)

    def last_vertex(upto):
        best = 0
        for s in range(1, upto + 1):
            if np_r.is_vertex(s):
                best = s
        return best

    strict_ok = nonstrict_ok = 0
    boundary = []
    strict_alive = nonstrict_alive = True
    for s in range(1, n + 1):
        lhs = np_r.y(s)
        rhs = hp_r.y(s - 1) + 1
        if lhs == rhs:
            boundary.append(s)
        if strict_alive and lhs < rhs:
            strict_ok = s
        else:
            strict_alive = False
        if nonstrict_alive and lhs <= rhs:
            nonstrict_ok = s
        else:
            nonstrict_alive = False
    s0 = last_vertex(strict_ok)
    s0n = last_vertex(nonstrict_ok)
    return ProgressionReport(s0, s0n, boundary, np_r.slopes()[:s0], q)


@dataclass
class DegreeReport:
    computed: list
    expected: list
    complete_upto: int

    @property
    def matches(self) -> bool:
        return self.computed == self.expected

    def __bool__(self):
        return self.matches

    def to_json(self) -> dict:
        return {"computed": self.computed, "expected": self.expected,
                "intervals": self.complete_upto, "matches": self.matches}


def connected_component_degrees(cs, t: int, ord_list=None) -> DegreeReport:
    """
    Count slopes equal to 0 and in each ``(n, n+1]`` and compare with
    ``t + ord(psi omega^(-2n-2)) - ord(psi omega^(-2n))``.

    ``ord_list[r]`` is the number of slope-0 forms for the twist by
    ``omega^(-2r)``; its length is ``q``.  Only intervals lying entirely
    below the largest certified slope are counted.
    """
    np_ = _as_polygon(cs)
    ord_list = [0] if ord_list is None else list(ord_list)
    q = len(ord_list)
    slopes = np_.certified_slopes()
    top = max(slopes) if slopes else Fraction(0)
    computed = [sum(1 for s in slopes if s == 0)]
    expected = [ord_list[0]]
    n = 0
    while n + 1 < top:
        computed.append(sum(1 for s in slopes if n < s <= n + 1))
        expected.append(t + ord_list[(n + 1) % q] - ord_list[n % q])
        n += 1
    return DegreeReport(computed, expected, n)


def floor_bound_ok(slopes, t: int) -> bool:
    return all(floor(Fraction(n, t)) <= s <= floor(Fraction(n, t)) + 1
               for n, s in enumerate(slopes))
