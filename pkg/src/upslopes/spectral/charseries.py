"""
Characteristic series ``det(I - X M)`` by Berkowitz's division-free method.

For ``M`` partitioned as ``[[a, R], [S, C]]`` the characteristic polynomial
of ``M`` is the product of the lower triangular Toeplitz matrix with first
column ``(1, -a, -R S, -R C S, ..., -R C^(n-2) S)`` and the coefficient
vector of ``C``.  Only ring operations are used, which matters because most
entries of the matrices we care about are non-units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..padic import CMatrix, CycloElt, Valuation
from ..padic.matrix import ring_matmul, ring_polymul


@dataclass(frozen=True)
class CharSeries:
    """
    Coefficients ``c_0 = 1, c_1, ..., c_n`` of ``det(I - X M)``.

    ``floors[k]`` is a certified lower bound for ``v(c_k)``; it only matters
    when ``c_k`` vanishes to working precision.
    """

    coeffs: tuple
    floors: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def ctx(self):
        return self.coeffs[0].ctx

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def valuations(self) -> list:
        return [c.valuation() for c in self.coeffs]

    def points(self) -> list:
        """``(k, height, exact)`` for the Newton polygon."""
        out = []
        for k, (c, fl) in enumerate(zip(self.coeffs, self.floors)):
            v = c.valuation()
            if v.exact:
                out.append((k, v.value, True))
            else:
                out.append((k, max(v.value, Fraction(fl)), False))
        return out

    def __mul__(self, other: "CharSeries") -> "CharSeries":
        """Product of two series (characteristic series of a block sum)."""
        ctx = self.ctx
        X = np.array([c.coeffs for c in self.coeffs], dtype=object)
        Y = np.array([c.coeffs for c in other.coeffs], dtype=object)
        Z = ring_polymul(ctx, X, Y)
        coeffs = tuple(CycloElt(ctx, row) for row in Z)
        floors = []
        for k in range(len(coeffs)):
            lo = min(Fraction(self.floors[i]) + Fraction(other.floors[k - i])
                     for i in range(max(0, k - other.degree), min(k, self.degree) + 1))
            floors.append(max(lo, Fraction(ctx.prec)))
        return CharSeries(coeffs, tuple(floors), {"product": True})

    def to_json(self) -> dict:
        return {"coefficients": [c.literal() for c in self.coeffs],
                "valuations": [str(v) for v in self.valuations()]}


def _berkowitz(M: CMatrix) -> np.ndarray:
    ctx = M.ctx
    n = M.nrows
    e = ctx.e
    A = M.data
    vect = np.zeros((1, e), dtype=object)
    vect[0, 0] = 1
    for k in range(n - 1, -1, -1):
        m = n - k - 1
        t = np.zeros((m + 2, e), dtype=object)
        t[0, 0] = 1
        t[1] = -A[k, k]
        if m:
            R = A[k:k + 1, k + 1:]
            C = A[k + 1:, k + 1:]
            v = A[k + 1:, k:k + 1]
            krylov = [v]
            for _ in range(m - 1):
                v = ring_matmul(ctx, C, v)
                krylov.append(v)
            K = np.concatenate(krylov, axis=1)
            t[2:] = -ring_matmul(ctx, R, K)[0]
        vect = ring_polymul(ctx, t % ctx.modulus, vect, length=m + 2)
    return vect


def _partial_min_sums(values, n) -> list:
    s = sorted(values)
    out = [Fraction(0)]
    for k in range(n):
        out.append(out[-1] + s[k])
    return out


def valuation_floors(M: CMatrix) -> list:
    """
    Lower bounds for ``v(c_k)`` from row and column contents.

    Every ``k x k`` minor is divisible by the product of the contents of
    its rows, so ``v(c_k)`` is at least the sum of the ``k`` smallest row
    valuations; the same holds for columns.
    """
    n = M.nrows
    vals = M.valuations()
    rows = [min(v.value for v in r) if r else Fraction(0) for r in vals]
    cols = [min(vals[i][j].value for i in range(n)) for j in range(n)] if n else []
    a = _partial_min_sums(rows, n)
    b = _partial_min_sums(cols, n)
    prec = Fraction(M.ctx.prec)
    return [max(x, y, prec) for x, y in zip(a, b)]


def char_series(M: CMatrix, provenance: dict | None = None) -> CharSeries:
    """
    The characteristic series ``det(I - X M)``.

    EXAMPLES::

        >>> from upslopes.padic import PadicContext, CMatrix
        >>> ctx = PadicContext(3, prec=10)
        >>> cs = char_series(CMatrix.diag(ctx, [3, 9]))
        >>> [c.to_int() for c in cs.coeffs] == [1, (-12) % 3**10, 27]
        True
    """
    if M.nrows != M.ncols:
        raise ValueError("square matrix required")
    ctx = M.ctx
    vect = _berkowitz(M)
    coeffs = tuple(CycloElt(ctx, row) for row in vect)
    prov = {"size": M.nrows}
    if provenance:
        prov.update(provenance)
    return CharSeries(coeffs, tuple(valuation_floors(M)), prov)


def determinant(M: CMatrix) -> CycloElt:
    """Division-free determinant."""
    n = M.nrows
    if n == 0:
        return CycloElt.one(M.ctx)
    c = CycloElt(M.ctx, _berkowitz(M)[n])
    return c if n % 2 == 0 else -c


def charpoly_valuation_points(cs: CharSeries) -> list:
    return [(k, h) for k, h, _ in cs.points()]


__all__ = ["CharSeries", "char_series", "determinant", "valuation_floors", "Valuation"]
