"""
Dense matrices over ``O_E`` modulo ``p^prec``.

A matrix is stored as an object array of shape ``(rows, cols, e)`` holding
the pi-basis coordinates of each entry as Python integers.  Products are
computed by ``e`` integer matrix products followed by a single reduction
modulo the minimal polynomial of ``pi``, which keeps the inner loops in
numpy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .context import PadicContext, PrecisionError, Valuation
from .cyclo import CycloElt


@lru_cache(maxsize=None)
def _fold_array(ctx: PadicContext):
    if ctx.e == 1:
        return None
    return np.array([list(r) for r in ctx.fold], dtype=object)


def reduce_raw(ctx: PadicContext, raw: np.ndarray) -> np.ndarray:
    """Fold an array whose last axis has length ``2e - 1`` back to ``e``."""
    e = ctx.e
    if e == 1:
        return raw[..., :1] % ctx.modulus
    out = raw[..., :e] + np.tensordot(raw[..., e:], _fold_array(ctx), axes=([-1], [0]))
    return out % ctx.modulus


def ring_mul(ctx: PadicContext, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Entrywise product of coordinate arrays (broadcasting on leading axes)."""
    e = ctx.e
    shape = np.broadcast_shapes(X.shape[:-1], Y.shape[:-1])
    raw = np.zeros(shape + (2 * e - 1,), dtype=object)
    for a in range(e):
        raw[..., a:a + e] += X[..., a:a + 1] * Y
    return reduce_raw(ctx, raw)


def ring_matmul(ctx: PadicContext, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product of coordinate arrays ``(r, k, e) @ (k, c, e)``."""
    e = ctx.e
    r, k = A.shape[:2]
    c = B.shape[1]
    raw = np.zeros((r, c, 2 * e - 1), dtype=object)
    if r == 0 or c == 0 or k == 0:
        return np.zeros((r, c, e), dtype=object)
    for a in range(e):
        Aa = A[:, :, a]
        if not Aa.any():
            continue
        raw[:, :, a:a + e] += np.tensordot(Aa, B, axes=([1], [0]))
    return reduce_raw(ctx, raw)


def ring_polymul(ctx: PadicContext, X: np.ndarray, Y: np.ndarray, length=None) -> np.ndarray:
    """Product of polynomials given as coordinate arrays of shape ``(n, e)``."""
    n1, n2 = X.shape[0], Y.shape[0]
    n = n1 + n2 - 1 if length is None else length
    out = np.zeros((n, ctx.e), dtype=object)
    for i in range(min(n1, n)):
        if not X[i].any():
            continue
        hi = min(n2, n - i)
        out[i:i + hi] += ring_mul(ctx, X[i][None, :], Y[:hi])
    return out % ctx.modulus


class CMatrix:
    """
    A matrix over ``O_E``.

    EXAMPLES::

        >>> from upslopes.padic import PadicContext
        >>> ctx = PadicContext(3)
        >>> M = CMatrix.from_ints(ctx, [[1, 2], [3, 4]])
        >>> (M @ M)[1, 1].to_int()
        22
    """

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: PadicContext, data: np.ndarray):
        if data.ndim != 3 or data.shape[2] != ctx.e:
            raise ValueError("coordinate array must have shape (r, c, %d)" % ctx.e)
        self.ctx = ctx
        self.data = data

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, ctx, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        return cls(ctx, np.zeros((nrows, ncols, ctx.e), dtype=object))

    @classmethod
    def identity(cls, ctx, n):
        M = cls.zeros(ctx, n)
        for i in range(n):
            M.data[i, i, 0] = 1
        return M

    @classmethod
    def from_ints(cls, ctx, rows):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        M = cls.zeros(ctx, nrows, ncols)
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for j, x in enumerate(r):
                M.data[i, j, 0] = int(x) % ctx.modulus
        return M

    @classmethod
    def from_entries(cls, ctx, rows):
        """Build from nested lists of :class:`CycloElt` or integers."""
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        M = cls.zeros(ctx, nrows, ncols)
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for j, x in enumerate(r):
                if isinstance(x, CycloElt):
                    if x.ctx != ctx:
                        raise ValueError("entry from a different context")
                    M.data[i, j, :] = x.coeffs
                else:
                    M.data[i, j, 0] = int(x) % ctx.modulus
        return M

    @classmethod
    def diag(cls, ctx, entries):
        entries = list(entries)
        M = cls.zeros(ctx, len(entries))
        for i, x in enumerate(entries):
            x = x if isinstance(x, CycloElt) else CycloElt.from_int(ctx, x)
            M.data[i, i, :] = x.coeffs
        return M

    @classmethod
    def block_diag(cls, blocks):
        blocks = list(blocks)
        ctx = blocks[0].ctx
        n = sum(b.nrows for b in blocks)
        c = sum(b.ncols for b in blocks)
        M = cls.zeros(ctx, n, c)
        i = j = 0
        for b in blocks:
            M.data[i:i + b.nrows, j:j + b.ncols] = b.data
            i += b.nrows
            j += b.ncols
        return M

    # -- shape and access -------------------------------------------------

    @property
    def shape(self):
        return self.data.shape[:2]

    @property
    def nrows(self):
        return self.data.shape[0]

    @property
    def ncols(self):
        return self.data.shape[1]

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, int) and isinstance(j, int):
            return CycloElt(self.ctx, self.data[i, j])
        sub = self.data[i, j]
        if sub.ndim != 3:
            raise IndexError("use slices or index lists for submatrices")
        return CMatrix(self.ctx, sub.copy())

    def submatrix(self, rows, cols):
        return CMatrix(self.ctx, self.data[np.ix_(list(rows), list(cols))].copy())

    def set(self, i, j, x):
        """In-place assignment of one entry (used while building matrices)."""
        x = x if isinstance(x, CycloElt) else CycloElt.from_int(self.ctx, x)
        self.data[i, j, :] = x.coeffs

    def entries(self):
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def copy(self):
        return CMatrix(self.ctx, self.data.copy())

    # -- arithmetic -------------------------------------------------------

    def _same(self, other):
        if not isinstance(other, CMatrix):
            raise TypeError("expected a CMatrix")
        if other.ctx != self.ctx:
            raise ValueError("matrices from different contexts")

    def __add__(self, other):
        self._same(other)
        return CMatrix(self.ctx, (self.data + other.data) % self.ctx.modulus)

    def __sub__(self, other):
        self._same(other)
        return CMatrix(self.ctx, (self.data - other.data) % self.ctx.modulus)

    def __neg__(self):
        return CMatrix(self.ctx, (-self.data) % self.ctx.modulus)

    def __matmul__(self, other):
        self._same(other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        return CMatrix(self.ctx, ring_matmul(self.ctx, self.data, other.data))

    def __mul__(self, scalar):
        """Multiply every entry by a scalar (integer or :class:`CycloElt`)."""
        if isinstance(scalar, int):
            return CMatrix(self.ctx, (self.data * scalar) % self.ctx.modulus)
        if isinstance(scalar, CycloElt):
            s = np.array(scalar.coeffs, dtype=object)
            return CMatrix(self.ctx, ring_mul(self.ctx, self.data, s))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        result = CMatrix.identity(self.ctx, self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, CMatrix):
            return NotImplemented
        return (self.ctx == other.ctx and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.ctx, self.shape, tuple(self.data.ravel().tolist())))

    @property
    def T(self):
        return CMatrix(self.ctx, self.data.transpose(1, 0, 2).copy())

    def conj(self):
        """Apply ``zeta -> zeta^-1`` entrywise."""
        return self.galois(-1)

    def galois(self, a: int):
        from .cyclo import _galois_images
        ctx = self.ctx
        if ctx.e == 1:
            return self.copy()
        images = np.array(_galois_images(ctx, a % ctx.cyclo_order), dtype=object)
        data = np.tensordot(self.data, images, axes=([2], [0])) % ctx.modulus
        return CMatrix(ctx, data)

    def permute(self, perm):
        """Conjugate by the permutation sending basis vector ``perm[k]`` to ``k``."""
        perm = list(perm)
        return CMatrix(self.ctx, self.data[np.ix_(perm, perm)].copy())

    def to_context(self, ctx: PadicContext):
        if (ctx.p, ctx.cyclo_order) != (self.ctx.p, self.ctx.cyclo_order):
            raise ValueError("incompatible contexts")
        return CMatrix(ctx, self.data % ctx.modulus)

    # -- valuations -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.data.any()

    def valuations(self):
        return [[self[i, j].valuation() for j in range(self.ncols)]
                for i in range(self.nrows)]

    def min_valuation(self) -> Valuation:
        exact = [v for row in self.valuations() for v in row if v.exact]
        return min(exact) if exact else Valuation.at_least(self.ctx.prec)

    def is_integral_unit_matrix(self) -> bool:
        """True when the reduction mod the uniformizer is invertible."""
        if self.nrows != self.ncols:
            return False
        return residue_rank(self) == self.nrows

    def residue_matrix(self):
        """Reduction modulo the uniformizer as an integer array mod ``p``."""
        return (self.data[:, :, 0] % self.ctx.p).astype(np.int64)

    def inverse(self):
        """Inverse of a matrix whose reduction mod the uniformizer is invertible."""
        return unit_inverse(self)

    def __repr__(self):
        rows = ["[" + ", ".join(str(self[i, j]) for j in range(self.ncols)) + "]"
                for i in range(self.nrows)]
        return "CMatrix(%dx%d, [%s])" % (self.nrows, self.ncols, ", ".join(rows))


def residue_rank(M: CMatrix) -> int:
    """Rank of ``M`` modulo the uniformizer (over ``F_p``)."""
    p = M.ctx.p
    A = [[int(x) % p for x in row] for row in M.data[:, :, 0]]
    rank = 0
    nrows, ncols = M.nrows, M.ncols
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, p)
        for r in range(nrows):
            if r != rank and A[r][col]:
                f = A[r][col] * inv % p
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def unit_inverse(M: CMatrix) -> CMatrix:
    """
    Gauss-Jordan inverse using unit pivots only.

    Raises :class:`ZeroDivisionError` if ``M`` is not invertible over ``O_E``.
    """
    ctx = M.ctx
    n = M.nrows
    if n != M.ncols:
        raise ValueError("square matrix required")
    rows = [[M[i, j] for j in range(n)] + [CycloElt.from_int(ctx, int(i == j)) for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col].is_unit()), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible over O_E")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return CMatrix.from_entries(ctx, [r[n:] for r in rows])


def valuation_floor(values) -> Fraction:
    """Smallest value among a list of valuations, reading ``AtLeast`` as its bound."""
    return min((v.value for v in values), default=Fraction(0))


__all__ = ["CMatrix", "ring_mul", "ring_matmul", "ring_polymul", "reduce_raw",
           "residue_rank", "unit_inverse", "PrecisionError"]
