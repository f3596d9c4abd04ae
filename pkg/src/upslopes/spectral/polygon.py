"""
Newton and Hodge polygons with exact rational vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..padic import CMatrix, PrecisionError
from .charseries import CharSeries, char_series, determinant


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


def lower_hull(points):
    """
    Lower convex hull of ``(x, y)`` points sorted by ``x``.

    Collinear interior points are dropped, so the result is the vertex list.
    """
    hull = []
    for pt in sorted(points, key=lambda t: t[0]):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2][:2], hull[-1][:2]
            x3, y3 = pt[:2]
            # keep hull[-1] only if it lies strictly below the chord
            if (y2 - y1) * (x3 - x1) >= (y3 - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


@dataclass(frozen=True)
class PolygonData:
    """
    A convex polygon starting at ``(0, 0)``.

    ``certified[i]`` tells whether edge ``i`` (between vertices ``i`` and
    ``i + 1``) is known not to move if uncertain points were refined.
    """

    vertices: tuple
    certified: tuple = None

    def __post_init__(self):
        verts = tuple((int(x), Fraction(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.certified is None:
            object.__setattr__(self, "certified", (True,) * max(len(verts) - 1, 0))

    @classmethod
    def from_slopes(cls, slopes) -> "PolygonData":
        slopes = sorted(Fraction(s) for s in slopes)
        pts = [(0, Fraction(0))]
        for s in slopes:
            pts.append((pts[-1][0] + 1, pts[-1][1] + s))
        return cls(tuple(lower_hull(pts)))

    @classmethod
    def from_points(cls, points) -> "PolygonData":
        """Lower hull of ``(x, y)`` or ``(x, y, exact)`` points."""
        pts = [(int(t[0]), Fraction(t[1]), t[2] if len(t) > 2 else True) for t in points]
        hull = lower_hull(pts)
        cert = tuple(a[2] and b[2] for a, b in zip(hull, hull[1:]))
        return cls(tuple((x, y) for x, y, _ in hull), cert)

    @property
    def length(self) -> int:
        return self.vertices[-1][0] if self.vertices else 0

    def edges(self):
        return list(zip(self.vertices, self.vertices[1:]))

    def slopes(self) -> list:
        out = []
        for (x1, y1), (x2, y2) in self.edges():
            out += [(y2 - y1) / (x2 - x1)] * (x2 - x1)
        return out

    def certified_length(self) -> int:
        """Largest ``x`` such that every edge up to ``x`` is certified."""
        x = 0
        for ok, ((_, _), (x2, _)) in zip(self.certified, self.edges()):
            if not ok:
                break
            x = x2
        return x

    def certified_slopes(self) -> list:
        return self.slopes()[: self.certified_length()]

    def is_certified(self) -> bool:
        return all(self.certified)

    def y(self, x) -> Fraction:
        """Height of the polygon above ``x`` (``0 <= x <= length``)."""
        x = Fraction(x)
        for (x1, y1), (x2, y2) in self.edges():
            if x1 <= x <= x2:
                return y1 + (y2 - y1) * (x - x1) / (x2 - x1)
        if self.vertices and x == self.vertices[0][0]:
            return self.vertices[0][1]
        raise ValueError("x = %s outside the polygon" % x)

    def is_vertex(self, x: int) -> bool:
        return any(vx == x for vx, _ in self.vertices)

    def to_json(self) -> dict:
        return {"vertices": [[x, _frac_str(y)] for x, y in self.vertices],
                "slopes": [_frac_str(s) for s in self.slopes()],
                "certified": list(self.certified)}


def newton_polygon(cs: CharSeries) -> PolygonData:
    """
    Lower convex hull of ``(k, v(c_k))``.

    Coefficients that vanish to working precision enter at their certified
    floor; edges touching them are flagged uncertified.
    """
    return PolygonData.from_points(cs.points())


def elementary_divisor_valuations(M: CMatrix) -> list:
    """
    Valuations of the elementary divisors of ``M`` over ``O_E``.

    Each step moves an entry of minimal valuation to the pivot and clears
    its column; entries of the pivot row then only matter through the
    pivot, so the pivot row and column are dropped.
    """
    rows = [[M[i, j] for j in range(M.ncols)] for i in range(M.nrows)]
    out = []
    while rows and rows[0]:
        best = None
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                v = x.valuation()
                if v.exact and (best is None or v.value < best[0]):
                    best = (v.value, i, j)
        if best is None:
            raise PrecisionError("remaining %dx%d block vanishes to working precision"
                                 % (len(rows), len(rows[0])))
        _, pi_, pj = best
        piv_row = rows[pi_]
        piv = piv_row[pj]
        rest = []
        for i, r in enumerate(rows):
            if i == pi_:
                continue
            x = r[pj]
            if not x.is_zero():
                f = x / piv
                r = [a - f * b for a, b in zip(r, piv_row)]
            rest.append(r[:pj] + r[pj + 1:])
        out.append(best[0])
        rows = rest
    return out


def hodge_polygon(M: CMatrix) -> PolygonData:
    """Hodge polygon of a square matrix from its elementary divisors."""
    if M.nrows != M.ncols:
        raise ValueError("square matrix required")
    return PolygonData.from_slopes(elementary_divisor_valuations(M))


def hodge_polygon_minors(M: CMatrix) -> PolygonData:
    """
    Hodge polygon straight from the definition: the point above ``k`` is the
    least valuation of a ``k x k`` minor.  Exponential cost; small matrices only.
    """
    n = M.nrows
    pts = [(0, Fraction(0))]
    for k in range(1, n + 1):
        best = None
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                v = determinant(M.submatrix(rows, cols)).valuation()
                if v.exact and (best is None or v.value < best):
                    best = v.value
        if best is None:
            raise PrecisionError("all %dx%d minors vanish to working precision" % (k, k))
        pts.append((k, best))
    return PolygonData.from_points(pts)


def polygon_above(upper: PolygonData, lower: PolygonData, upto: int | None = None) -> bool:
    """True if ``upper`` lies on or above ``lower`` at every integer ``x``."""
    n = min(upper.length, lower.length) if upto is None else upto
    return all(upper.y(x) >= lower.y(x) for x in range(n + 1))


def check_np_above_hp(M: CMatrix) -> bool:
    """Compare Newton and Hodge polygons of ``M`` at every integer abscissa."""
    return polygon_above(newton_polygon(char_series(M)), hodge_polygon(M))
