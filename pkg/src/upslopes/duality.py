"""
Weight-2 classical blocks: the pairing on functions on the class set, the
``U_p`` adjunction, and splittings of operator matrices by idempotents.

With ``phi`` identified with its values at the ``t`` class representatives
the pairing is the dot product, and the adjunction
``<U_p phi, U_p phi'> = p <S_p phi, phi'>`` becomes::

    U(psi)^T U(psi^-1) = p A^T

where ``A`` is the matrix of the central action ``S_p``.  It forces the
Hodge slopes of ``U(psi)`` and ``U(psi^-1)`` to pair up to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .padic import CMatrix, CycloElt, PadicContext, PrecisionError, residue_rank, unit_inverse
from .spectral import CharSeries, char_series, hodge_polygon, newton_polygon


def pair(phi, phi2):
    """``sum_i phi_i phi2_i``."""
    phi, phi2 = list(phi), list(phi2)
    if len(phi) != len(phi2):
        raise ValueError("vectors of length %d and %d" % (len(phi), len(phi2)))
    acc = 0
    for a, b in zip(phi, phi2):
        acc = a * b + acc
    return acc


@dataclass
class ClassicalBlock:
    """
    ``U_p`` on weight-2 forms with character ``psi`` in the basis of class
    indicators, with the partner matrix for ``psi^-1`` and the central
    matrix ``A``.
    """

    matrix: CMatrix
    label: str = ""
    partner: CMatrix | None = None
    central: CMatrix | None = None

    @classmethod
    def self_conjugate(cls, M: CMatrix, label: str = "") -> "ClassicalBlock":
        """Partner given by the entrywise conjugate ``zeta -> zeta^-1``."""
        return cls(M, label, M.conj())

    @property
    def ctx(self):
        return self.matrix.ctx

    @property
    def t(self):
        return self.matrix.nrows

    def central_matrix(self) -> CMatrix:
        return CMatrix.identity(self.ctx, self.t) if self.central is None else self.central

    def alphas(self) -> list:
        return hodge_polygon(self.matrix).slopes()

    def is_integral(self) -> bool:
        return all(v.value >= 0 for row in self.matrix.valuations() for v in row)


def verify_adjunction(B: ClassicalBlock) -> bool:
    """``U(psi)^T U(psi^-1) == p A^T`` modulo ``p^prec``."""
    if B.partner is None:
        raise ValueError("the adjunction needs the partner matrix for psi^-1")
    lhs = B.matrix.T @ B.partner
    return lhs == B.central_matrix().T * B.ctx.p


def hodge_duality_check(B: ClassicalBlock) -> bool:
    """``alpha_i + alpha'_(t-1-i) = 1`` with all slopes in ``[0, 1]``."""
    if B.partner is None:
        raise ValueError("the duality check needs the partner matrix")
    a = hodge_polygon(B.matrix).slopes()
    b = hodge_polygon(B.partner).slopes()
    t = len(a)
    return (all(0 <= x <= 1 for x in a + b)
            and all(a[i] + b[t - 1 - i] == 1 for i in range(t)))


# -- projectors ------------------------------------------------------------------

def _is_zero_mod_uniformizer(M: CMatrix) -> bool:
    e = M.ctx.e
    return all(v.value >= Fraction(1, e) for row in M.valuations() for v in row)


@dataclass
class ResidualProjector:
    """
    ``P`` with ``P^2 = P`` modulo the uniformizer, built as
    ``prod (T_l - a') / (a - a')``.

    ``data`` records, per prime, the Hecke matrix, the lifted eigenvalue
    ``a`` and the rejected eigenvalues ``a'``.
    """

    matrix: CMatrix
    label: str = ""
    data: list = field(default_factory=list, repr=False)

    @classmethod
    def from_hecke(cls, ctx: PadicContext, data, label: str = "") -> "ResidualProjector":
        n = data[0][0].nrows
        P = CMatrix.identity(ctx, n)
        I = CMatrix.identity(ctx, n)
        for T, a, rejected in data:
            a = CycloElt.coerce(CycloElt.one(ctx), a)
            for a2 in rejected:
                a2 = CycloElt.coerce(CycloElt.one(ctx), a2)
                diff = a - a2
                if not diff.is_unit():
                    raise ValueError("eigenvalues %s and %s are not distinguished mod the "
                                     "uniformizer" % (a, a2))
                P = P @ (T - I * a2) * diff.inverse()
        return cls(P, label, list(data))

    def is_residually_idempotent(self) -> bool:
        P = self.matrix
        return _is_zero_mod_uniformizer(P @ P - P)

    def commutes_with(self, H: CMatrix) -> bool:
        return self.matrix @ H == H @ self.matrix


def idempotent_limit(P, max_iter: int | None = None) -> CMatrix:
    """
    ``lim P^(p^n)``, iterating ``Q -> Q^p`` until it is stationary.

    The limit exists when ``P^2 = P`` modulo the uniformizer; it is reached
    within ``prec * e`` steps.  The result ``Q`` satisfies ``Q^2 = Q``
    exactly modulo ``p^prec`` and ``Q = P`` modulo the uniformizer.
    """
    M = P.matrix if isinstance(P, ResidualProjector) else P
    ctx = M.ctx
    if not _is_zero_mod_uniformizer(M @ M - M):
        raise ValueError("P is not idempotent modulo the uniformizer")
    limit = ctx.prec * ctx.e + 2 if max_iter is None else max_iter
    Q = M
    for _ in range(limit):
        Q2 = Q ** ctx.p
        if Q2 == Q:
            if Q @ Q != Q:
                raise ArithmeticError("stationary point is not idempotent")
            return Q
        Q = Q2
    raise ArithmeticError("no convergence within %d iterations" % limit)


# -- splitting --------------------------------------------------------------------

def image_basis(Q: CMatrix) -> tuple:
    """
    Columns of ``Q`` forming a basis of its image, with a left inverse.

    For an idempotent the image is a direct summand of rank equal to the
    rank of ``Q`` modulo the uniformizer; columns are picked left to right
    when they raise that rank, and the left inverse inverts the rows where
    the chosen columns are independent modulo the uniformizer.
    """
    n = Q.nrows
    cols, rank = [], 0
    for j in range(n):
        trial = cols + [j]
        if residue_rank(Q.submatrix(range(n), trial)) > rank:
            cols, rank = trial, rank + 1
    B = Q.submatrix(range(n), cols)
    rows, r = [], 0
    for i in range(n):
        trial = rows + [i]
        if residue_rank(B.submatrix(trial, range(len(cols)))) > r:
            rows, r = trial, r + 1
    if r != len(cols):
        raise ArithmeticError("image basis is not saturated")
    inv = unit_inverse(B.submatrix(rows, range(len(cols))))
    L = CMatrix.zeros(Q.ctx, len(cols), n)
    for a, i in enumerate(rows):
        for b in range(len(cols)):
            L.set(b, i, inv[b, a])
    return B, L


@dataclass
class Splitting:
    projectors: list
    blocks: list
    bases: list
    series: list
    total: CharSeries

    @property
    def ranks(self) -> list:
        return [b.nrows for b in self.blocks]

    @property
    def product_ok(self) -> bool:
        prod = self.series[0]
        for s in self.series[1:]:
            prod = prod * s
        return tuple(prod.coeffs[: len(self.total)]) == self.total.coeffs

    def slopes(self) -> list:
        return [newton_polygon(s).slopes() for s in self.series]


def check_idempotents(projs) -> None:
    ctx = projs[0].ctx
    n = projs[0].nrows
    total = CMatrix.zeros(ctx, n)
    for i, Q in enumerate(projs):
        if Q @ Q != Q:
            raise ValueError("projector %d is not idempotent" % i)
        for j, R in enumerate(projs):
            if i != j and not (Q @ R).is_zero():
                raise ValueError("projectors %d and %d do not annihilate each other" % (i, j))
        total = total + Q
    if total != CMatrix.identity(ctx, n):
        raise ValueError("projectors do not sum to the identity")


def split_and_factor(M: CMatrix, projs) -> Splitting:
    """
    Restrict ``M`` to the images of commuting idempotents and factor its
    characteristic series as the product of the pieces.
    """
    projs = list(projs)
    check_idempotents(projs)
    for i, Q in enumerate(projs):
        if Q @ M != M @ Q:
            raise ValueError("projector %d does not commute with M" % i)
    blocks, bases, series = [], [], []
    for Q in projs:
        if residue_rank(Q) == 0:
            continue
        B, L = image_basis(Q)
        X = L @ M @ B
        blocks.append(X)
        bases.append(B)
        series.append(char_series(X))
    return Splitting(projs, blocks, bases, series, char_series(M))


# -- dominant slope lattices ---------------------------------------------------------

def _normalize(v: CMatrix) -> CMatrix:
    xs = [v[i, 0] for i in range(v.nrows)]
    k = min(int(x.valuation().value * v.ctx.e) for x in xs if not x.is_zero())
    return CMatrix.from_entries(v.ctx, [[x.div_uniformizer_power(k)] for x in xs])


def dominant_eigenvector(M: CMatrix, iterations: int) -> CMatrix:
    """
    Primitive eigenvector for the eigenvalue of least valuation, by power
    iteration with exact rescaling.  Needs that eigenvalue to be simple and
    strictly separated from the others.
    """
    v = CMatrix.from_ints(M.ctx, [[1]] * M.nrows)
    for _ in range(iterations):
        v = _normalize(M @ v)
    return v


@dataclass
class DominantSplit:
    """
    ``M`` restricted to ``O w + (W meet O^n)`` where ``w`` spans the dominant
    line and ``W`` is the sum of the other generalized eigenspaces.

    ``hecke`` is ``diag(1, (M22 / lam)^power)``: it commutes with
    ``matrix``, is ``1`` on the line and vanishes modulo the uniformizer on
    the complement, so it plays the role of a Hecke operator separating the
    dominant eigenvalue.
    """

    matrix: CMatrix
    eigenvalue: CycloElt
    hecke: CMatrix
    prec: int


def separate_dominant_slope(M: CMatrix, target_prec: int, power: int | None = None) -> DominantSplit:
    """
    Block-diagonal form ``[lam] + M22`` of ``M`` on the sublattice spanned
    by the dominant eigenvector and the kernel of the dominant left
    eigenvector.

    ``M`` must be given at a precision high enough to absorb the rescaling
    losses of power iteration; the result is reduced to ``target_prec``.
    """
    ctx = M.ctx
    slopes = newton_polygon(char_series(M)).slopes()
    gap = slopes[1] - slopes[0]
    if gap <= 0:
        raise ValueError("the least slope is not simple")
    steps = int(Fraction(target_prec + 2) / gap) + 2
    power = int(Fraction(target_prec) / gap) + 1 if power is None else power
    need = target_prec + steps * slopes[0] + power * slopes[0] + 2
    if ctx.prec < need:
        raise PrecisionError("need prec >= %s" % need)
    w = dominant_eigenvector(M, steps)
    u = dominant_eigenvector(M.T, steps)
    n = M.nrows
    i0 = next(i for i in range(n) if u[i, 0].is_unit())
    others = [k for k in range(n) if k != i0]
    X = CMatrix.zeros(ctx, n, n - 1)
    inv = u[i0, 0].inverse()
    for c, k in enumerate(others):
        X.set(k, c, CycloElt.one(ctx))
        X.set(i0, c, -u[k, 0] * inv)
    MX = M @ X
    j0 = next(i for i in range(n) if w[i, 0].is_unit())
    lam = (M @ w)[j0, 0] * w[j0, 0].inverse()
    out = CMatrix.zeros(ctx, n)
    out.set(0, 0, lam)
    for a, j in enumerate(others):
        for b in range(n - 1):
            out.set(a + 1, b + 1, MX[j, b])
    R = out.submatrix(range(1, n), range(1, n)) ** power
    lam_k = lam ** power
    T = CMatrix.zeros(ctx, n)
    T.set(0, 0, CycloElt.one(ctx))
    for a in range(n - 1):
        for b in range(n - 1):
            T.set(a + 1, b + 1, R[a, b] / lam_k)
    low = ctx.with_prec(target_prec)
    return DominantSplit(out.to_context(low), lam.to_context(low), T.to_context(low), target_prec)


def random_unit_matrix(ctx: PadicContext, n: int, rng) -> CMatrix:
    """Integer matrix invertible modulo ``p``."""
    while True:
        rows = [[int(x) for x in rng.integers(-3, 4, size=n)] for _ in range(n)]
        S = CMatrix.from_ints(ctx, rows)
        if residue_rank(S) == n:
            return S


def commuting_projector_family(ctx: PadicContext, sizes, rng) -> tuple:
    """
    Residual projectors ``S (E_k + varpi E_k R E_k) S^-1`` for a random unit
    ``S``, coordinate idempotents ``E_k`` of the given block sizes and a
    random ``R``.  Returns ``(projectors, S)``.
    """
    n = sum(sizes)
    S = random_unit_matrix(ctx, n, rng)
    Sinv = S.inverse()
    R = CMatrix.from_ints(ctx, [[int(x) for x in rng.integers(-5, 6, size=n)] for _ in range(n)])
    pi = CycloElt.uniformizer(ctx)
    out = []
    start = 0
    for size in sizes:
        E = CMatrix.diag(ctx, [int(start <= i < start + size) for i in range(n)])
        out.append(S @ (E + E @ R @ E * pi) @ Sinv)
        start += size
    return out, S
