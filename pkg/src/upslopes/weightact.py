"""
The weight-``kappa`` action of ``Sigma_0(p^m)`` on power series as exactly
truncated infinite matrices.

For ``gamma = [[a, b], [c, d]]`` the operator ``h -> kappa(cz+d)/(cz+d) *
h((az+b)/(cz+d))`` has generating series::

    sum_{i,j} m_{i,j} x^i y^j = kappa(cx+d) / (cx + d - a x y - b y)

Column ``j`` is therefore the power series ``F(x) R(x)^j`` with
``F = kappa(cx+d)/(cx+d)`` and ``R = (ax+b)/(cx+d)``; truncating those
series at ``x^N`` gives the ``N x N`` block exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .padic import (CMatrix, Classical, CycloElt, DiskPoint, PadicContext,
                    PrecisionError, kappa_eval, kappa_series, vp)
from .padic.matrix import ring_polymul


# -- monoid elements --------------------------------------------------------

@dataclass(frozen=True)
class MonoidElt:
    """
    ``[[a, b], [c, d]]`` in ``Sigma_0(p^m)``: ``p^m | c``, ``p`` prime to
    ``d`` and nonzero determinant.

    Entries are integers; when ``prec`` is set they are only known modulo
    ``p^prec`` (images of quaternions under a splitting map).
    """

    a: int
    b: int
    c: int
    d: int
    p: int
    m: int = 1
    prec: int | None = None

    def __post_init__(self):
        p, m = self.p, self.m
        if self.c % p ** m:
            raise ValueError("p^m = %d must divide c = %d" % (p ** m, self.c))
        if self.d % p == 0:
            raise ValueError("d = %d must be prime to p" % self.d)
        det = self.det
        if det == 0 or (self.prec is not None and det % p ** self.prec == 0):
            raise ValueError("determinant vanishes")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def a_valuation(self) -> int:
        if self.a == 0 or (self.prec is not None and self.a % self.p ** self.prec == 0):
            return self.prec if self.prec is not None else 10 ** 9
        return vp(self.a, self.p)

    @property
    def shape(self) -> str:
        """``"Up"`` when ``v(a) = 1``, ``"Tl"`` when ``v(a) = 0``, else ``"other"``."""
        return {0: "Tl", 1: "Up"}.get(self.a_valuation, "other")

    @classmethod
    def identity(cls, p: int, m: int = 1) -> "MonoidElt":
        return cls(1, 0, 0, 1, p, m)

    @classmethod
    def parse(cls, text: str, p: int, m: int = 1) -> "MonoidElt":
        a, b, c, d = (int(x) for x in text.replace(" ", "").split(","))
        return cls(a, b, c, d, p, m)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def to_json(self) -> dict:
        out = {"entries": list(self.entries()), "p": self.p, "m": self.m}
        if self.prec is not None:
            out["prec"] = self.prec
        return out

    def __str__(self):
        return "[[%d, %d], [%d, %d]]" % self.entries()


# -- rescaling ---------------------------------------------------------------

@dataclass(frozen=True)
class Rescale:
    """
    ``u = p^pu * varpi^qu`` and ``v = p^pv * varpi^qv``; entry ``(i, j)`` is
    multiplied by ``u^i v^j``.
    """

    pu: int
    qu: int
    pv: int
    qv: int
    name: str = "custom"

    def exponents(self, i: int, j: int) -> tuple:
        """``(P, Q)`` with ``u^i v^j = p^P varpi^Q``."""
        return self.pu * i + self.pv * j, self.qu * i + self.qv * j

    def varpi_exponent(self, i: int, j: int, e: int) -> int:
        P, Q = self.exponents(i, j)
        return e * P + Q

    def guard(self, N: int, e: int) -> int:
        """Extra ``p``-adic digits lost to the most negative exponent."""
        worst = min(0, *(self.varpi_exponent(i, j, e) for i in range(N) for j in range(N)))
        return -(worst // e) + 1 if worst else 0

    def to_json(self) -> dict:
        return {"name": self.name, "u": [self.pu, self.qu], "v": [self.pv, self.qv]}


RESCALE_B = Rescale(-1, 0, 1, 0, "B")
"""``u = p^-1, v = p``: the orthonormal basis ``1, pz, p^2 z^2, ...``."""

RESCALE_PI = Rescale(-1, -1, 0, 1, "pi")
"""``u = 1/(p varpi), v = varpi``."""


def _div_p_power(x: CycloElt, k: int) -> CycloElt:
    q = x.ctx.p ** k
    if any(c % q for c in x.coeffs):
        raise ArithmeticError("%s is not divisible by p^%d" % (x, k))
    return CycloElt(x.ctx, [c // q for c in x.coeffs])


def apply_scale(x: CycloElt, pk: int, qk: int) -> CycloElt:
    """``x * p^pk * varpi^qk``; positive powers are applied before exact divisions."""
    if pk > 0:
        x = x * x.ctx.p ** pk
    if qk > 0:
        x = x.mul_uniformizer_power(qk)
    if pk < 0:
        x = _div_p_power(x, -pk)
    if qk < 0:
        x = x.div_uniformizer_power(-qk)
    return x


# -- action matrices -----------------------------------------------------------

@dataclass
class ActionMatrix:
    """Truncated matrix of ``||_kappa gamma`` with its basis tag."""

    matrix: CMatrix
    basis: str
    gamma: MonoidElt
    kappa: object
    N: int
    rescale: Rescale | None = field(default=None, repr=False)

    @property
    def ctx(self):
        return self.matrix.ctx

    def __getitem__(self, key):
        return self.matrix[key]

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {"basis": self.basis, "gamma": self.gamma.to_json(), "N": self.N,
                "matrix": matrix_to_json(self.matrix)}


def _series_array(ctx: PadicContext, coeffs, N: int) -> np.ndarray:
    out = np.zeros((N, ctx.e), dtype=object)
    for n, c in enumerate(coeffs[:N]):
        out[n] = c.coeffs if isinstance(c, CycloElt) else CycloElt.from_int(ctx, c).coeffs
    return out


def action_columns(gamma: MonoidElt, kappa, N: int, ctx: PadicContext) -> np.ndarray:
    """
    Raw ``(N, N, e)`` array of the unscaled matrix in context ``ctx``.

    Column ``j`` holds the coefficients of ``F(x) R(x)^j`` modulo ``x^N``.
    """
    p, P = ctx.p, ctx.modulus
    if gamma.prec is not None and gamma.prec < ctx.prec:
        raise PrecisionError("gamma is known to p^%d only, need p^%d" % (gamma.prec, ctx.prec))
    psi = kappa.psi
    psi.check_context(ctx)
    if gamma.c % psi.conductor or p ** gamma.m % psi.conductor:
        raise ValueError("psi of conductor %d does not factor through Sigma_0(p^%d)"
                         % (psi.conductor, gamma.m))
    a, b, c, d = (x % P for x in gamma.entries())
    dinv = pow(d, -1, P)
    u = c * dinv % P
    # 1/(cx + d) = d^-1 sum (-u x)^n
    inv = [dinv * pow(-u, n, P) % P for n in range(N)]
    num = [b, a] if N > 1 else [b]
    R = [sum(num[k] * inv[n - k] for k in range(len(num)) if n - k >= 0) % P for n in range(N)]
    lead = kappa_eval(kappa, gamma.d, ctx)
    F = [lead * x for x in kappa_series(kappa, u, ctx, n_terms=N).coeffs]
    Fa = _series_array(ctx, F, N)
    Ra = _series_array(ctx, R, N)
    cols = [Fa]
    for _ in range(N - 1):
        cols.append(ring_polymul(ctx, cols[-1], Ra, length=N))
    return np.stack(cols, axis=1)


def generating_matrix(gamma: MonoidElt, kappa, N: int, ctx: PadicContext,
                      rescale: Rescale | None = None) -> ActionMatrix:
    """
    The ``N x N`` matrix of ``||_kappa gamma`` in the basis ``1, z, z^2, ...``,
    optionally rescaled by ``Diag(u) M Diag(v)``.

    Rescaling divides by powers of ``varpi``; the matrix is built at
    ``prec + guard`` so that the result is exact modulo ``p^prec``.

    >>> from upslopes.padic import DirichletCharacter
    >>> ctx = PadicContext(3, prec=10)
    >>> kappa = Classical(1, DirichletCharacter.trivial(3))
    >>> A = generating_matrix(MonoidElt(1, 2, 0, 1, 3), kappa, 3, ctx)
    >>> [[A[i, j].to_int() for j in range(3)] for i in range(3)]
    [[1, 2, 4], [0, 1, 4], [0, 0, 1]]
    """
    if N < 1:
        raise ValueError("truncation size must be at least 1")
    if gamma.p != ctx.p:
        raise ValueError("gamma and context use different primes")
    guard = rescale.guard(N, ctx.e) if rescale is not None else 0
    hctx = ctx.with_prec(ctx.prec + guard)
    raw = action_columns(gamma, kappa, N, hctx)
    if rescale is None:
        return ActionMatrix(CMatrix(ctx, raw % ctx.modulus), "standard", gamma, kappa, N)
    out = np.zeros_like(raw)
    for i in range(N):
        for j in range(N):
            x = CycloElt(hctx, raw[i, j])
            if x.is_zero():
                continue
            try:
                y = apply_scale(x, *rescale.exponents(i, j))
            except ArithmeticError as exc:
                raise ValueError("entry (%d, %d) is not integral after rescaling; "
                                 "is gamma in Sigma_0(p^m)?" % (i, j)) from exc
            out[i, j] = y.coeffs
    return ActionMatrix(CMatrix(ctx, out % ctx.modulus), rescale.name, gamma, kappa, N, rescale)


# -- the congruence audit ----------------------------------------------------------

@dataclass
class CongruenceReport:
    shape: str
    strict: bool
    failures: list = field(default_factory=list)
    uncertain: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"shape": self.shape, "mode": "strict" if self.strict else "report-only",
                "passed": self.passed,
                "failures": [{"i": i, "j": j, "valuation": str(v), "bound": str(b)}
                             for i, j, v, b in self.failures],
                "uncertain": [list(t) for t in self.uncertain]}


def congruence_bound(i: int, j: int, va: int) -> int:
    """Lower bound for ``v`` of entry ``(i, j)`` minus its main term."""
    if i == j:
        return 2 + i * va
    if i > j:
        return i - j + 2 + j * va
    return j - i + i * va


def verify_congruence_shape(mat: ActionMatrix, shape: str | None = None,
                            strict: bool | None = None) -> CongruenceReport:
    """
    Audit a ``B``-basis action matrix against the block-valuation pattern::

        (i, i):  (a/d)^i kappa(d)/d   mod p^(2 + i v(a))   (exact at (0, 0))
        i > j:   v >= i - j + 2 + j v(a)
        i < j:   v >= j - i + i v(a)

    The pattern is guaranteed for ``m >= 4``; below that the audit runs in
    report-only mode (``strict=False``), where it is still computed but
    only describes what happened.
    """
    gamma = mat.gamma
    if mat.basis != "B":
        raise ValueError("the congruence pattern refers to the B basis")
    shape = gamma.shape if shape is None else shape
    strict = gamma.m >= 4 if strict is None else strict
    rep = CongruenceReport(shape, strict)
    if shape != gamma.shape or shape not in ("Up", "Tl"):
        rep.failures.append((-1, -1, "v(a)=%d" % gamma.a_valuation, shape))
        return rep
    ctx = mat.ctx
    P = ctx.modulus
    va = gamma.a_valuation
    main = kappa_eval(mat.kappa, gamma.d, ctx)
    ratio = gamma.a * pow(gamma.d, -1, P) % P
    prec = Fraction(ctx.prec)
    N = mat.N
    for i in range(N):
        for j in range(N):
            x = mat[i, j]
            if i == j:
                x = x - main * pow(ratio, i, P)
                bound = Fraction(0 if i == 0 else congruence_bound(i, i, va))
                if i == 0:
                    if not x.is_zero():
                        rep.failures.append((0, 0, x.valuation(), "exact"))
                    continue
            else:
                bound = Fraction(congruence_bound(i, j, va))
            v = x.valuation()
            if v.exact and v.value < bound:
                rep.failures.append((i, j, v, bound))
            elif not v.exact and bound > prec:
                rep.uncertain.append((i, j))
    return rep
