"""
Truncated matrices of ``U_p`` and ``T_l`` assembled from recipes.

A recipe lists, for each pair of classes ``(i, j)``, the local components
``delta`` of the global elements through which the operator routes copy
``j`` into copy ``i``.  Block ``(i, j)`` of the operator is the sum of the
weight-``kappa`` action matrices of those ``delta``.

Matrices are stored in the interleaved basis ``1_0, ..., 1_(t-1), z_0, ...``
(index ``n t + i``), so block row ``n`` collects the ``z^n`` coordinates of
every class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np

from .padic import (CMatrix, CycloElt, DirichletCharacter, DiskPoint, PadicContext,
                    PrecisionError, char_eval)
from .quatalg import Quaternion, SplittingMap, delta_decomposition, example_splitting
from .spectral import char_series, hodge_polygon, newton_polygon
from .weightact import RESCALE_B, RESCALE_PI, MonoidElt, Rescale, generating_matrix

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


# -- recipes ------------------------------------------------------------------

@dataclass(frozen=True)
class RecipeEntry:
    """Operator ``delta`` routed from class ``j`` to class ``i``.

    Exactly one of ``delta`` (integer entries) and ``quaternion`` is set; a
    quaternion is split at ``p`` at whatever precision is requested.
    """

    i: int
    j: int
    delta: tuple | None = None
    quaternion: Quaternion | None = None

    def __post_init__(self):
        if (self.delta is None) == (self.quaternion is None):
            raise ValueError("give exactly one of delta and quaternion")

    def realize(self, p: int, m: int, prec: int) -> MonoidElt:
        if self.delta is not None:
            return MonoidElt(*self.delta, p=p, m=m)
        sm = SplittingMap(PadicContext(p, m=1, prec=prec, cyclo_order=1))
        return MonoidElt(*sm.image_ints(self.quaternion), p=p, m=m, prec=prec)

    def to_json(self) -> dict:
        out = {"i": self.i, "j": self.j}
        if self.delta is not None:
            out["delta"] = list(self.delta)
        else:
            out["quaternion"] = self.quaternion.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RecipeEntry":
        if "delta" in data:
            return cls(int(data["i"]), int(data["j"]), delta=tuple(int(x) for x in data["delta"]))
        return cls(int(data["i"]), int(data["j"]),
                   quaternion=Quaternion(*(int(x) for x in data["quaternion"])))


@dataclass(frozen=True)
class UpRecipe:
    """
    ``t`` classes and the routed operators of ``U_p`` (``shape="Up"``) or
    ``T_l`` (``shape="Tl"``).

    ``psi`` is the nebentypus the recipe was built for (optional) and
    ``central`` the ``t x t`` matrix of the central action at ``p``
    (identity when omitted).
    """

    t: int
    p: int
    m: int
    entries: tuple
    shape: str = "Up"
    l: int | None = None
    psi: DirichletCharacter | None = None
    central: tuple | None = None
    name: str = ""

    @property
    def q(self) -> int:
        return (self.p - 1) // 2

    @property
    def operators_per_line(self) -> int:
        return self.p if self.shape == "Up" else self.l + 1

    def validate(self, prec: int = 8):
        """Check row/column counts and the shape of every ``delta``."""
        if self.shape not in ("Up", "Tl"):
            raise ValueError("unknown shape %r" % self.shape)
        if self.shape == "Tl" and self.l is None:
            raise ValueError("a Tl recipe needs l")
        k = self.operators_per_line
        rows = [0] * self.t
        cols = [0] * self.t
        for e in self.entries:
            if not (0 <= e.i < self.t and 0 <= e.j < self.t):
                raise ValueError("entry (%d, %d) outside t = %d" % (e.i, e.j, self.t))
            rows[e.i] += 1
            cols[e.j] += 1
            g = e.realize(self.p, self.m, prec)
            if g.shape != self.shape:
                raise ValueError("delta %s has shape %s, recipe is %s" % (g, g.shape, self.shape))
            if self.shape == "Tl" and self.l and (g.det - self.l) % self.p ** min(prec, self.m):
                raise ValueError("delta %s does not have determinant l = %d" % (g, self.l))
        if any(r != k for r in rows) or any(c != k for c in cols):
            raise ValueError("each block row and column needs %d operators; rows %s, columns %s"
                             % (k, rows, cols))

    def realize(self, prec: int) -> list:
        return [(e.i, e.j, e.realize(self.p, self.m, prec)) for e in self.entries]

    def central_matrix(self, ctx: PadicContext) -> CMatrix:
        if self.central is None:
            return CMatrix.identity(ctx, self.t)
        return CMatrix.from_ints(ctx, [list(r) for r in self.central])

    def to_json(self) -> dict:
        out = {"t": self.t, "p": self.p, "m": self.m, "shape": self.shape,
               "entries": [e.to_json() for e in self.entries]}
        if self.l is not None:
            out["l"] = self.l
        if self.psi is not None:
            out["psi"] = self.psi.to_json()
        if self.central is not None:
            out["central"] = [list(r) for r in self.central]
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "UpRecipe":
        psi = DirichletCharacter.from_json(data["psi"]) if "psi" in data else None
        central = tuple(tuple(int(x) for x in r) for r in data["central"]) if "central" in data else None
        return cls(int(data["t"]), int(data.get("p", 3)), int(data.get("m", 1)),
                   tuple(RecipeEntry.from_json(e) for e in data["entries"]),
                   data.get("shape", "Up"), data.get("l"), psi, central, data.get("name", ""))


def load_recipe(path) -> UpRecipe:
    with open(path) as fh:
        return UpRecipe.from_json(json.load(fh))


def save_recipe(recipe: UpRecipe, path):
    with open(path, "w") as fh:
        fh.write(json.dumps(recipe.to_json(), sort_keys=True, indent=2) + "\n")


def identity_recipe(p: int = 3, m: int = 1) -> UpRecipe:
    """One class, one operator ``[[1, 0], [0, 1]]``: a ``T_l``-shaped recipe with ``l = 0``."""
    return UpRecipe(1, p, m, (RecipeEntry(0, 0, delta=(1, 0, 0, 1)),), "Tl", 0, name="identity")


# -- the built-in example ---------------------------------------------------------

EXAMPLE_PSI = DirichletCharacter(3, 2, 0, 2)
"""Conductor-9 character with ``psi(4) = zeta_3`` and ``psi(-1) = 1``."""


def example53_recipe() -> UpRecipe:
    """
    ``U_3`` for the level ``[[Z_3^x, Z_3], [9 Z_3, 1 + 3 Z_3]]`` on the
    Hurwitz quaternions: one class and the three elements of
    :func:`~upslopes.quatalg.delta_decomposition`.
    """
    path = FIXTURE_DIR / "example5_recipe.json"
    return load_recipe(path)


def _example53_from_search() -> UpRecipe:
    deltas = delta_decomposition(example_splitting(24))
    entries = tuple(RecipeEntry(0, 0, quaternion=d.delta) for d in deltas)
    return UpRecipe(1, 3, 2, entries, "Up", psi=EXAMPLE_PSI, name="example-5")


def example53_context(prec: int = 40) -> PadicContext:
    return PadicContext(3, m=2, prec=prec)


# -- assembly -------------------------------------------------------------------

@dataclass
class TruncatedOpMatrix:
    """``tN x tN`` operator matrix in the interleaved basis."""

    matrix: CMatrix
    t: int
    N: int
    basis: str
    recipe: UpRecipe = field(repr=False)
    kappa: object = field(repr=False, default=None)

    @property
    def ctx(self):
        return self.matrix.ctx

    def block(self, n: int, n2: int) -> CMatrix:
        """The ``t x t`` block coupling ``z^n2`` to ``z^n``."""
        t = self.t
        return self.matrix.submatrix(range(n * t, n * t + t), range(n2 * t, n2 * t + t))

    def grouped_permutation(self) -> list:
        """``perm[k]`` is the interleaved index of grouped index ``k = i N + n``."""
        return [n * self.t + i for i in range(self.t) for n in range(self.N)]

    def grouped(self) -> CMatrix:
        """The same operator in the basis ``1_0, z_0, z_0^2, ..., 1_1, z_1, ...``."""
        return self.matrix.permute(self.grouped_permutation())

    def char_series(self):
        return char_series(self.matrix, {"recipe": self.recipe.name, "N": self.N,
                                         "basis": self.basis})

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {"t": self.t, "N": self.N, "basis": self.basis,
                "recipe": self.recipe.to_json(), "matrix": matrix_to_json(self.matrix)}


def assemble(recipe: UpRecipe, kappa, N: int, ctx: PadicContext,
             rescale: Rescale | None = RESCALE_B, validate: bool = True) -> TruncatedOpMatrix:
    """
    Sum the routed action matrices of ``recipe`` into a ``tN x tN`` matrix.

    With the default ``rescale`` the result is in the basis
    ``1_0, ..., 1_(t-1), p z_0, ..., p z_(t-1), p^2 z_0^2, ...``;
    ``rescale=None`` gives the basis of plain monomials.
    """
    if validate:
        recipe.validate()
    t = recipe.t
    guard = rescale.guard(N, ctx.e) if rescale is not None else 0
    gammas = recipe.realize(ctx.prec + guard + 2)
    data = np.zeros((t * N, t * N, ctx.e), dtype=object)
    for i, j, g in gammas:
        A = generating_matrix(g, kappa, N, ctx, rescale).matrix.data
        data[i::t, j::t] += A
    basis = "standard" if rescale is None else rescale.name
    return TruncatedOpMatrix(CMatrix(ctx, data % ctx.modulus), t, N, basis, recipe, kappa)


def example53_up(w0=0, N: int = 12, prec: int = 40, rescale: Rescale | None = RESCALE_B,
                 psi: DirichletCharacter = EXAMPLE_PSI) -> TruncatedOpMatrix:
    """
    The ``N x N`` truncation of ``U_3`` at the weight ``x <x>^w0 psi``.

    >>> T = example53_up(0, N=4, prec=20)
    >>> newton_polygon(T.char_series()).slopes()
    [Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(7, 2)]
    """
    ctx = example53_context(prec)
    if isinstance(w0, CycloElt) and w0.ctx != ctx:
        w0 = w0.to_context(ctx)
    if psi.conductor != 9 or char_eval(psi, -1, ctx) != CycloElt.one(ctx):
        raise ValueError("need a conductor-9 character with psi(-1) = 1")
    return assemble(example53_recipe(), DiskPoint(psi, w0), N, ctx, rescale)


# -- classical blocks and the error decomposition ----------------------------------

def classical_block(recipe: UpRecipe, psi: DirichletCharacter, ctx: PadicContext,
                    r: int = 0) -> CMatrix:
    """
    Weight-2 operator on the twist ``psi omega^(-2r)``: block ``(i, j)`` is
    the sum of ``psi omega^(-2r)(d)`` over the ``delta`` routed ``j -> i``.
    """
    chi = psi * DirichletCharacter.teichmuller(recipe.p, -2 * r)
    out = CMatrix.zeros(ctx, recipe.t)
    prec = ctx.prec
    for i, j, g in recipe.realize(prec):
        out.set(i, j, out[i, j] + char_eval(chi, g.d, ctx))
    return out


def classical_blocks(recipe: UpRecipe, psi: DirichletCharacter, ctx: PadicContext) -> list:
    """The ``q`` twists ``r = 0, ..., q - 1``."""
    return [classical_block(recipe, psi, ctx, r) for r in range(recipe.q)]


def error_bound(n: int, n2: int, shape: str) -> int:
    """Exponent of ``p`` dividing block ``(n, n2)`` of the error space."""
    if shape == "Up":
        if n == n2:
            return n + 1
        return n + 2 if n > n2 else n2
    if n == n2:
        return 1
    return n - n2 + 2 if n > n2 else n2 - n


@dataclass
class ErrorReport:
    shape: str
    strict: bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"shape": self.shape, "mode": "strict" if self.strict else "report-only",
                "passed": self.passed,
                "failures": [{"block": [n, n2], "entry": [a, b], "valuation": str(v),
                              "bound": b2} for n, n2, a, b, v, b2 in self.failures]}


def verify_error_decomposition(T: TruncatedOpMatrix, classical, strict: bool | None = None,
                               shape: str | None = None) -> ErrorReport:
    """
    Check that ``T`` minus ``Diag(C_0, s C_1, s^2 C_2, ...)`` lies in the
    error space, where ``C_n = classical[n % len(classical)]`` and ``s = p``
    for ``U_p`` or ``s = l`` for ``T_l``.

    Block ``(n, n2)`` must be divisible by ``p^(n+1)``, ``p^(n+2)``, ``p^n2``
    (``U_p``; diagonal, below, above) or ``p``, ``p^(n-n2+2)``, ``p^(n2-n)``
    (``T_l``).
    """
    if T.basis != "B":
        raise ValueError("the error space refers to the B basis")
    recipe = T.recipe
    shape = recipe.shape if shape is None else shape
    strict = recipe.m >= 4 if strict is None else strict
    classical = list(classical)
    t = T.t
    ctx = T.ctx
    for C in classical:
        if C.shape != (t, t):
            raise ValueError("classical blocks must be %d x %d" % (t, t))
    scale = recipe.p if shape == "Up" else recipe.l
    rep = ErrorReport(shape, strict)
    for n in range(T.N):
        for n2 in range(T.N):
            B = T.block(n, n2)
            if n == n2:
                B = B - classical[n % len(classical)] * pow(scale, n, ctx.modulus)
            bound = error_bound(n, n2, shape)
            for a in range(t):
                for b in range(t):
                    v = B[a, b].valuation()
                    if v.exact and v.value < bound:
                        rep.failures.append((n, n2, a, b, v, bound))
    return rep


# -- truncation stability -------------------------------------------------------------

@dataclass
class StabilityReport:
    N: int
    step: int
    slopes: list
    stable: bool
    certified: bool

    def to_json(self) -> dict:
        return {"N": self.N, "step": self.step, "stable": self.stable,
                "certified": self.certified,
                "slopes": ["%d/%d" % (s.numerator, s.denominator) for s in self.slopes]}


def _leading_slopes(recipe, kappa, N, ctx, n):
    T = assemble(recipe, kappa, N, ctx, validate=False)
    np_ = newton_polygon(T.char_series())
    return np_.slopes()[:n], np_.certified_length() >= n


def truncation_stability(recipe: UpRecipe, kappa, n_slopes: int, ctx: PadicContext,
                         N: int | None = None, step: int = 5) -> StabilityReport:
    """
    Compare the first ``n_slopes`` slopes at block counts ``N`` and
    ``N + step``.

    Without ``N`` the search starts at ``ceil(n_slopes / t)`` blocks and
    grows by ``step`` until both truncations agree and are certified, up to
    ``n_slopes + prec`` blocks.  An explicit ``N`` that fails raises
    :class:`PrecisionError`.
    """
    recipe.validate()
    t = recipe.t
    explicit = N is not None
    N = -(-n_slopes // t) if N is None else N
    limit = n_slopes + ctx.prec
    while True:
        s1, c1 = _leading_slopes(recipe, kappa, N, ctx, n_slopes)
        s2, c2 = _leading_slopes(recipe, kappa, N + step, ctx, n_slopes)
        stable = s1 == s2 and len(s1) == n_slopes
        if stable and c1 and c2:
            return StabilityReport(N, step, s1, True, True)
        if explicit or N + step > limit:
            raise PrecisionError("first %d slopes not stable at N = %d (%s vs %s)"
                                 % (n_slopes, N, s1, s2))
        N += step


# -- synthetic recipes -------------------------------------------------------------------

def _random_delta(rng, p: int, m: int, det: int, shape: str) -> tuple:
    """Integer ``[[a, b], [c, d]]`` with ``p^m | c``, unit ``d`` and ``ad - bc = det``."""
    while True:
        d = int(rng.integers(1, 60))
        if d % p == 0:
            continue
        d *= 1 if rng.integers(0, 2) else -1
        c = p ** m * int(rng.integers(-4, 5))
        if gcd(c, d) != 1:
            continue
        # a d = det + b c: pick b with b c = -det mod d
        b0 = (-det * pow(c, -1, abs(d))) % abs(d) if abs(d) > 1 else 0
        b = b0 + abs(d) * int(rng.integers(0, 3))
        a, rem = divmod(det + b * c, d)
        if rem:
            continue
        g = MonoidElt(a, b, c, d, p, m)
        if g.shape == shape:
            return (a, b, c, d)


def synthetic_recipe(seed: int, t: int, p: int = 3, m: int = 4, shape: str = "Up",
                     l: int | None = None, prec: int = 20, max_tries: int = 500) -> UpRecipe:
    """
    A seeded random recipe with ``t`` classes and a random character of
    conductor ``p^m``.

    Each block row and column receives ``p`` (or ``l + 1``) operators via
    random permutations.  ``U_p`` recipes are redrawn until every twisted
    weight-2 block has all Hodge slopes strictly below 1, the range in
    which the error-space estimates control ``det`` of the diagonal blocks.
    """
    rng = np.random.default_rng(seed)
    if shape == "Tl" and l is None:
        raise ValueError("a Tl recipe needs l")
    det = p if shape == "Up" else l
    k = p if shape == "Up" else l + 1
    ctx = PadicContext(p, m=m, prec=prec)
    for _ in range(max_tries):
        wild = int(rng.integers(1, p ** (m - 1)))
        if wild % p == 0:
            continue
        psi = DirichletCharacter(p, m, 0, wild)
        entries = []
        for _ in range(k):
            perm = rng.permutation(t)
            for j in range(t):
                entries.append(RecipeEntry(int(perm[j]), j,
                                           delta=_random_delta(rng, p, m, det, shape)))
        recipe = UpRecipe(t, p, m, tuple(entries), shape, l, psi,
                          name="synthetic-%s-t%d-seed%d" % (shape, t, seed))
        if shape != "Up":
            return recipe
        try:
            ok = all(max(hodge_polygon(C).slopes()) < 1
                     for C in classical_blocks(recipe, psi, ctx))
        except PrecisionError:
            ok = False
        if ok:
            return recipe
    raise RuntimeError("no admissible recipe in %d draws" % max_tries)


def synthetic_context(recipe: UpRecipe, prec: int = 40) -> PadicContext:
    return PadicContext(recipe.p, m=recipe.m, prec=prec)


def alpha_lists(recipe: UpRecipe, ctx: PadicContext, psi=None) -> list:
    """Hodge slopes of the weight-2 twists, one list per ``r < q``."""
    psi = recipe.psi if psi is None else psi
    return [hodge_polygon(C).slopes() for C in classical_blocks(recipe, psi, ctx)]
